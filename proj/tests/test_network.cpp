#include "test_util.hpp"

#include <catch_amalgamated.hpp>

#include "cgbound/core/cost.hpp"
#include "cgbound/core/projections.hpp"
#include "cgbound/core/tikhonov.hpp"
#include "cgbound/network/config.hpp"
#include "cgbound/network/forward.hpp"
#include "cgbound/network/json.hpp"
#include "cgbound/network/parameters.hpp"
#include "cgbound/network/scale_updates.hpp"

#include <cmath>

using namespace cgbound;
using namespace testutil;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr std::uint64_t kSeed = 0x5eed0002ULL;

} // namespace

TEST_CASE("grad_z_F examples", "[network][gradient]")
{
    Rng rng = make_stream(kSeed, 1);
    const MeasurementModel model(gaussian_matrix(rng, 3, 4));
    const Vector y = gaussian_vector(rng, 3);
    const Vector z = uniform_vector(rng, 4, 1.0, 3.0);
    CHECK(grad_z_F(z, Vector::Zero(4), y, model, 0.0).isZero(0.0));
    CHECK(grad_z_F(Vector::Ones(4), Vector::Zero(4), y, model, 5.0).isZero(0.0));

    Vector bad = z;
    bad(2) = 0.0;
    CHECK_THROWS_AS(grad_z_F(bad, Vector::Ones(4), y, model, 1.0), DomainError);
    CHECK_NOTHROW(grad_z_F(bad, Vector::Ones(4), y, model, 0.0));
}

TEST_CASE("grad_z_F matches central differences of the cost", "[network][gradient][property]")
{
    CAPTURE(kSeed);
    for (int trial = 0; trial < 200; ++trial) {
        Rng rng = make_stream(kSeed, 100 + trial);
        const int n = uniform_int(rng, 2, 8), m = uniform_int(rng, 1, 6);
        const MeasurementModel model(gaussian_matrix(rng, m, n));
        const SpdMatrix p(Matrix::Identity(n, n));
        const Vector y = gaussian_vector(rng, m);
        const Vector u = gaussian_vector(rng, n);
        const Vector z = uniform_vector(rng, n, 1.0, std::exp(3.0));
        const double mu = uniform(rng, -2.0, 2.0);
        const Regularizer reg = log_prior_regularizer(mu);

        const Vector g = grad_z_F(z, u, y, model, mu);
        Vector fd(n);
        const double h = 1e-6;
        for (int i = 0; i < n; ++i) {
            Vector zp = z, zm = z;
            zp(i) += h;
            zm(i) -= h;
            fd(i) = (cost_eval(u, zp, y, model, p, reg) - cost_eval(u, zm, y, model, p, reg)) / (2 * h);
        }
        CAPTURE(trial);
        CHECK((g - fd).norm() <= 1e-4 * std::max(1.0, g.norm()));
    }
}

TEST_CASE("exp prior constants", "[network][prior]")
{
    const auto c = exp_prior_constants(1.0, std::exp(3.0));
    CHECK_THAT(c.hMax, WithinRel(std::exp(-1.0), 1e-14));
    CHECK_THAT(c.tauH, WithinRel(1.0, 1e-14));
    CHECK_THROWS_AS(exp_prior_constants(0.0, 1.0), InvalidArgument);

    // Grid maxima of |ln z / z| and |(1 − ln z)/z²| on random intervals.
    Rng rng = make_stream(kSeed, 2);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = uniform(rng, 0.1, 5.0), b = a + uniform(rng, 0.0, 20.0);
        double h = 0.0, dh = 0.0;
        const int grid = 20000;
        for (int i = 0; i <= grid; ++i) {
            const double z = a + (b - a) * i / grid;
            h = std::max(h, std::abs(std::log(z) / z));
            dh = std::max(dh, std::abs((1.0 - std::log(z)) / (z * z)));
        }
        const auto k = exp_prior_constants(a, b);
        CHECK(k.hMax >= h * (1 - 1e-12));
        CHECK(k.tauH >= dh * (1 - 1e-12));
        CHECK(k.hMax <= h * (1 + 1e-6));
        CHECK(k.tauH <= dh * (1 + 1e-6));
    }
}

TEST_CASE("cgnet_scale_step", "[network][cgnet]")
{
    Rng rng = make_stream(kSeed, 3);
    const int n = 5, m = 3;
    const MeasurementModel model(gaussian_matrix(rng, m, n));
    const SignalBounds bounds;
    const Vector y = gaussian_vector(rng, m);
    const Vector u = gaussian_vector(rng, n);
    const Vector z = uniform_vector(rng, n, -1.0, 30.0);

    CHECK(cgnet_scale_step(z, u, y, model, Matrix::Zero(n, n), 0.7, bounds) == mrelu(z, bounds.a, bounds.b));
    const Matrix b = gaussian_matrix(rng, n, n);
    CHECK(cgnet_scale_step(Vector::Ones(n), Vector::Zero(n), y, model, b, 3.0, bounds) == Vector::Ones(n));

    const Vector zin = uniform_vector(rng, n, 1.0, 10.0);
    const double mu = 0.4;
    const Vector expected = mrelu(zin - b * ball_project(grad_z_F(zin, u, y, model, mu), bounds.xi), bounds.a, bounds.b);
    CHECK(cgnet_scale_step(zin, u, y, model, b, mu, bounds) == expected);
    CHECK_THROWS_AS(cgnet_scale_step(zin, u, y, model, Matrix::Zero(n, n + 1), mu, bounds), ShapeError);
}

TEST_CASE("subnet_forward", "[network][subnet]")
{
    Rng rng = make_stream(kSeed, 4);
    const Vector z = gaussian_vector(rng, 4);
    CHECK(subnet_forward({Matrix::Identity(4, 4)}, z) == z);
    CHECK(subnet_forward({gaussian_matrix(rng, 8, 4), Matrix::Zero(4, 8)}, z).isZero(0.0));
    CHECK_THROWS_AS(subnet_forward({gaussian_matrix(rng, 8, 3)}, z), ShapeError);
    CHECK_THROWS_AS(subnet_forward({gaussian_matrix(rng, 8, 4)}, z), ShapeError);
    CHECK_THROWS_AS(subnet_forward({}, z), ShapeError);

    // Nonnegative weights on nonnegative input leave every ReLU inactive.
    for (int trial = 0; trial < 100; ++trial) {
        const int n = uniform_int(rng, 1, 6), f = uniform_int(rng, 1, 4);
        const Matrix w1 = uniform_vector(rng, n * f * n, 0.0, 1.0).reshaped(n * f, n);
        const Matrix w2 = uniform_vector(rng, n * n * f, 0.0, 1.0).reshaped(n, n * f);
        const Vector x = uniform_vector(rng, n, 0.0, 2.0);
        const Vector direct = w2 * (w1 * x);
        CHECK(rel_diff(subnet_forward({w1, w2}, x), direct) <= 1e-14);
    }
}

TEST_CASE("subnet output norm is bounded by the weight-norm product", "[network][subnet][property]")
{
    CAPTURE(kSeed);
    Rng rng = make_stream(kSeed, 5);
    for (int trial = 0; trial < 10000; ++trial) {
        const int t = uniform_int(rng, 1, 4);
        std::vector<int> dims{uniform_int(rng, 1, 8)};
        for (int i = 0; i < t; ++i) dims.push_back(uniform_int(rng, 1, 8));
        std::vector<Matrix> ws;
        double prod = 1.0;
        for (int i = 0; i < t; ++i) {
            ws.push_back(gaussian_matrix(rng, dims[i + 1], dims[i], uniform(rng, 0.1, 2.0)));
            prod *= spectral_norm(ws.back());
        }
        const Vector in = gaussian_vector(rng, dims[0]);
        // ReLU after every layer is σ(𝒢(x)), since ReLU is idempotent.
        Vector out = in;
        for (const Matrix& w : ws) out = relu(w * out);
        CHECK(out.norm() <= prod * in.norm() * (1 + 1e-12) + 1e-12);
        if (dims.back() == dims.front())
            CHECK(subnet_forward(ws, in).norm() <= prod * in.norm() * (1 + 1e-12) + 1e-12);
    }
}

TEST_CASE("drcgnet_scale_step", "[network][drcgnet]")
{
    Rng rng = make_stream(kSeed, 6);
    const int n = 4, m = 3;
    const MeasurementModel model(gaussian_matrix(rng, m, n));
    const SignalBounds bounds;
    const Vector y = gaussian_vector(rng, m);
    const Vector u = gaussian_vector(rng, n);
    const Vector z = uniform_vector(rng, n, 0.0, 5.0);
    const std::vector<Matrix> zero{Matrix::Zero(2 * n, n), Matrix::Zero(n, 2 * n)};

    CHECK(drcgnet_scale_step(z, u, y, model, 0.0, zero, bounds) == z);
    CHECK(drcgnet_scale_step(z, Vector::Zero(n), y, model, 1.3, zero, bounds) == z);

    const std::vector<Matrix> w{gaussian_matrix(rng, 2 * n, n), gaussian_matrix(rng, n, 2 * n)};
    const double delta = 0.8;
    const Vector expected = z - delta * ball_project(datafit_grad(z, u, y, model), bounds.xi) + subnet_forward(w, z);
    CHECK(drcgnet_scale_step(z, u, y, model, delta, w, bounds) == expected);
}

TEST_CASE("forward examples", "[network][forward]")
{
    Rng rng = make_stream(kSeed, 7);
    for (Variant v : {Variant::CgNet, Variant::DrCgNet}) {
        const NetworkConfig cfg = random_config(rng, v);
        const MeasurementModel model = random_model(rng, 3, cfg.n);
        const ParameterSet ps = sample_parameters(cfg, rng);
        const ForwardTrace tr = forward(Vector::Zero(3), model, ps, cfg);
        CHECK(tr.z0.isZero(0.0));
        for (const Vector& u : tr.uk) CHECK(u.isZero(0.0));
        CHECK(tr.output.isZero(0.0));
        CHECK(static_cast<int>(tr.uk.size()) == cfg.K + 1);
    }

    // K = J = 1, B = 0, μ = 0: the scale update is a pure clamp.
    NetworkConfig cfg = cgnet_reference_config(5, 1, 1);
    const MeasurementModel model(gaussian_matrix(rng, 3, 5));
    ParameterSet ps;
    ps.P = SpdMatrix(2.0 * Matrix::Identity(5, 5));
    ps.theta = {{StepParams{Matrix::Zero(5, 5), 0.0, {}, 0.0}}};
    const Vector y = gaussian_vector(rng, 3) * 3.0;
    const Vector z1 = mrelu(mrelu(model.A().transpose() * y / model.norm2(), 0.0, cfg.bounds.zInf), cfg.bounds.a,
                            cfg.bounds.b);
    const Vector expected = ball_project(z1.cwiseProduct(tikhonov_solve(model, z1, y, ps.P)), cfg.bounds.cMax);
    CHECK(rel_diff(forward_output(y, model, ps, cfg), expected) <= 1e-15);
}

TEST_CASE("forward trace invariants", "[network][forward][property]")
{
    CAPTURE(kSeed);
    int passes = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Rng rng = make_stream(kSeed, 1000 + trial);
        const Variant v = trial % 2 == 0 ? Variant::CgNet : Variant::DrCgNet;
        const NetworkConfig cfg = random_config(rng, v);
        const int m = uniform_int(rng, 1, 6);
        const MeasurementModel model = random_model(rng, m, cfg.n);
        const ParameterSet ps = sample_parameters(cfg, rng);
        const Vector y = gaussian_vector(rng, m, uniform(rng, 0.1, 10.0));
        const ForwardTrace tr = forward(y, model, ps, cfg);
        bool ok = tr.output.norm() <= cfg.bounds.cMax * (1 + 1e-15);
        ok = ok && (tr.z0.array() >= 0.0).all() && (tr.z0.array() <= cfg.bounds.zInf).all();
        for (const auto& layer : tr.zk)
            for (const Vector& z : layer) ok = ok && (z.array() >= 0.0).all() && (z.array() <= cfg.bounds.zInf).all();
        passes += ok ? 1 : 0;
    }
    CHECK(passes == 1000);
}

TEST_CASE("gcgls_run reproduces forward", "[network][gcgls]")
{
    CAPTURE(kSeed);
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng = make_stream(kSeed, 3000 + trial);
        const Variant v = trial % 2 == 0 ? Variant::CgNet : Variant::DrCgNet;
        const NetworkConfig cfg = random_config(rng, v);
        const int m = uniform_int(rng, 1, 6);
        const MeasurementModel model = random_model(rng, m, cfg.n);
        const ParameterSet ps = sample_parameters(cfg, rng);
        const Vector y = gaussian_vector(rng, m, 2.0);
        const Vector a = forward_output(y, model, ps, cfg);
        const Vector b = gcgls_run(y, model, cfg, ps);
        CHECK((a - b).norm() <= 1e-12 * std::max(1.0, a.norm()));
        CHECK(gcgls_run(Vector::Zero(m), model, cfg, ps).isZero(0.0));
        // An arbitrary u₀ still produces a bounded estimate.
        CHECK(gcgls_run(y, model, cfg, ps, U0Mode::Zero).norm() <= cfg.bounds.cMax * (1 + 1e-15));
    }
    Rng rng = make_stream(kSeed, 4000);
    NetworkConfig cfg = random_config(rng, Variant::CgNet);
    const MeasurementModel model = random_model(rng, 2, cfg.n);
    const ParameterSet ps = sample_parameters(cfg, rng);
    cfg.K = 0;
    CHECK_THROWS_AS(gcgls_run(Vector::Ones(2), model, cfg, ps), InvalidArgument);
}

TEST_CASE("sample_parameters", "[network][sampling]")
{
    Rng rng = make_stream(kSeed, 8);
    const NetworkConfig cfg = random_config(rng, Variant::DrCgNet);
    const ParameterSet a = sample_parameters(cfg, 42u), b = sample_parameters(cfg, 42u), c = sample_parameters(cfg, 43u);
    CHECK(a.P.P() == b.P.P());
    CHECK(a.theta[0][0].W[0] == b.theta[0][0].W[0]);
    CHECK(a.theta.back().back().delta == b.theta.back().back().delta);
    CHECK(a.theta[0][0].W[0] != c.theta[0][0].W[0]);

    const NetworkConfig cg = random_config(rng, Variant::CgNet);
    CHECK(sample_parameters(cg, 7u).theta[0][0].B == sample_parameters(cg, 7u).theta[0][0].B);
    CHECK(sample_parameters(cg, 7u).theta[0][0].B != sample_parameters(cg, 8u).theta[0][0].B);
}

TEST_CASE("sampled parameters satisfy every ball constraint", "[network][sampling][property]")
{
    CAPTURE(kSeed);
    int valid = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Rng rng = make_stream(kSeed, 5000 + trial);
        const NetworkConfig cfg = random_config(rng, trial % 2 == 0 ? Variant::CgNet : Variant::DrCgNet);
        const ParameterSet ps = sample_parameters(cfg, rng);
        const auto bad = parameter_violations(ps, cfg);
        if (!bad.empty()) UNSCOPED_INFO(bad.front());
        valid += bad.empty() ? 1 : 0;
        // Structure is kept: tridiagonal samples have zero entries off the band.
        if (cfg.covStructure == CovStructure::Tridiagonal)
            for (int i = 0; i < cfg.n; ++i)
                for (int j = 0; j < cfg.n; ++j)
                    if (std::abs(i - j) > 1) REQUIRE(ps.P.P()(i, j) == 0.0);
    }
    CHECK(valid == 1000);
}

TEST_CASE("parameter validation rejects out-of-ball blocks", "[network][sampling]")
{
    Rng rng = make_stream(kSeed, 9);
    NetworkConfig cfg = random_config(rng, Variant::DrCgNet);
    ParameterSet ps = sample_parameters(cfg, rng);
    CHECK(parameters_valid(ps, cfg));
    ParameterSet bad = ps;
    bad.theta[0][0].delta = 2.0 * cfg.delta;
    CHECK_FALSE(parameters_valid(bad, cfg));
    bad = ps;
    bad.theta[0][0].W[0] *= 10.0 * cfg.weightBounds[0] / std::max(1e-12, spectral_norm(bad.theta[0][0].W[0]));
    CHECK_FALSE(parameters_valid(bad, cfg));
    bad = ps;
    bad.P = SpdMatrix(2.0 * cfg.spectrum.pMax * Matrix::Identity(cfg.n, cfg.n));
    CHECK_FALSE(parameters_valid(bad, cfg));
    bad = ps;
    bad.theta.pop_back();
    CHECK_FALSE(parameters_valid(bad, cfg));

    // Convex blends of admissible sets stay admissible.
    const ParameterSet other = sample_parameters(cfg, rng);
    for (double t : {0.0, 0.3, 1.0}) CHECK(parameters_valid(blend(ps, other, t), cfg));
}

TEST_CASE("network config validation", "[network][config]")
{
    NetworkConfig c = drcgnet_reference_config(8, 2, 2);
    CHECK_NOTHROW(c.validate());
    CHECK(c.D() == 3);
    CHECK(cgnet_reference_config(8, 2, 2).D() == 2);
    c.filters = {1, 2, 2};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = drcgnet_reference_config(8, 2, 2);
    c.kernels = {3};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    NetworkConfig g = cgnet_reference_config(8, 2, 2);
    g.hName = "softplus";
    CHECK_THROWS_AS(g.validate(), InvalidArgument);
    g = cgnet_reference_config(8, 0, 2);
    CHECK_THROWS_AS(g.validate(), InvalidArgument);
    CHECK(variant_from_string("DR-CG-Net") == Variant::DrCgNet);
    CHECK_THROWS_AS(variant_from_string("lista"), InvalidArgument);
}

TEST_CASE("network JSON round trip and error locations", "[network][json]")
{
    Rng rng = make_stream(kSeed, 10);
    for (Variant v : {Variant::CgNet, Variant::DrCgNet}) {
        const NetworkConfig cfg = random_config(rng, v);
        const json j = to_json(cfg);
        const NetworkConfig back = network_config_from_json(JsonSection(j, ""));
        CHECK(to_json(back) == j);

        const ParameterSet ps = sample_parameters(cfg, rng);
        const json pj = to_json(ps, cfg);
        const ParameterSet pb = parameter_set_from_json(JsonSection(pj, "/theta"), cfg);
        CHECK(to_json(pb, cfg) == pj);

        const MeasurementModel model = random_model(rng, 3, cfg.n);
        const Vector y = gaussian_vector(rng, 3);
        const json tj = to_json(forward(y, model, pb, cfg));
        CHECK(tj.contains("output"));
        CHECK(tj["uk"].size() == static_cast<std::size_t>(cfg.K + 1));
    }

    json bad = to_json(cgnet_reference_config(4, 1, 1));
    bad["K"] = "two";
    try {
        network_config_from_json(JsonSection(bad, "/network"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.where() == "/network/K");
    }
    bad = to_json(cgnet_reference_config(4, 1, 1));
    bad["bounds"]["zeta"] = 1.0;
    try {
        network_config_from_json(JsonSection(bad, "/network"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.where() == "/network/bounds/zeta");
    }
}
