#include "cgbound/geb/bound.hpp"
#include "cgbound/geb/covering.hpp"
#include "cgbound/geb/scaling.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace cgbound;
using Catch::Approx;

namespace {

constexpr std::uint64_t kSeed = 0x5eed0004;

NetworkConfig small_drcgnet(int n, int K, int J)
{
    NetworkConfig c = drcgnet_reference_config(n, K, J);
    c.bounds.zInf = 2.0;
    c.bounds.b = 2.0;
    c.bounds.a = 0.0;
    c.spectrum = {0.5, 2.0};
    c.weightBounds = {1.1, 1.3};
    c.delta = 0.5;
    return c;
}

NetworkConfig small_cgnet(int n, int K, int J)
{
    NetworkConfig c = cgnet_reference_config(n, K, J);
    c.bounds.zInf = 3.0;
    c.bounds.a = 1.0;
    c.bounds.b = 3.0;
    c.spectrum = {0.25, 4.0};
    c.mu = 2.0;
    return c;
}

MeasurementModel fixed_model(int m, int n, std::uint64_t stream)
{
    Rng rng = make_stream(kSeed, stream);
    return MeasurementModel(gaussian_matrix(rng, m, n, 1.0 / std::sqrt(double(m))));
}

} // namespace

TEST_CASE("dim_cov per structure", "[geb]")
{
    CHECK(dim_cov(CovStructure::ScaledIdentity, 5) == 1);
    CHECK(dim_cov(CovStructure::Diagonal, 5) == 5);
    CHECK(dim_cov(CovStructure::Tridiagonal, 5) == 9);
    CHECK(dim_cov(CovStructure::Full, 4) == 10);
    CHECK_THROWS_AS(dim_cov(CovStructure::Full, 0), InvalidArgument);
}

TEST_CASE("covering_log_bound examples", "[geb]")
{
    CHECK(covering_log_bound(3.0, 0.0, 0.1) == 0.0);
    CHECK(covering_log_bound(1.5, 4.0, 3.0) == Approx(4.0 * std::log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(covering_log_bound(1.0, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(covering_log_bound(1.0, 1.0, -1.0), InvalidArgument);

    const auto greedy = oracle::greedy_cover_count(1, -1.0, 1.0, 0.5, 2001);
    CHECK(greedy <= 5);
    CHECK(std::log(double(greedy)) <= covering_log_bound(1.0, 1.0, 0.5));
}

TEST_CASE("covering_log_bound dominates greedy covers in 1-D and 2-D", "[geb]")
{
    // Greedy centers are ε-separated points of the set, so their count is
    // a packing number and must sit under the volumetric bound.
    for (int dim : {1, 2}) {
        for (double omega : {0.5, 1.0, 3.0}) {
            const double half = omega / std::sqrt(double(dim));
            for (double eps : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0}) {
                const auto count = oracle::greedy_cover_count(dim, -half, half, eps, dim == 1 ? 4001 : 121);
                INFO("dim " << dim << " omega " << omega << " eps " << eps << " count " << count);
                CHECK(std::log(double(count)) <= covering_log_bound(omega, dim, eps) + 1e-12);
            }
        }
    }
}

TEST_CASE("dudley_closed_form examples", "[geb]")
{
    CHECK(dudley_closed_form(2.5, 0.0) == Approx(2.5).epsilon(1e-15));
    // √(ln 2e) by 50-digit evaluation.
    const oracle::hp two_e = 2 * boost::multiprecision::exp(oracle::hp(1));
    const double expected = static_cast<double>(boost::multiprecision::sqrt(boost::multiprecision::log(two_e)));
    CHECK(dudley_closed_form(1.0, 1.0) == Approx(expected).epsilon(1e-15));
    CHECK(expected == Approx(1.3013).margin(1e-4));
    CHECK(oracle::dudley_integral(1.0, 1.0, 1e-8) <= dudley_closed_form(1.0, 1.0));
    CHECK_THROWS_AS(dudley_closed_form(0.0, 1.0), InvalidArgument);
}

TEST_CASE("dudley_closed_form dominates quadrature on random pairs", "[geb]")
{
    Rng rng = make_stream(kSeed, 1);
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
        const double beta = std::pow(10.0, uniform(rng, -2.0, 2.0));
        const double nu = t % 50 == 0 ? 0.0 : std::pow(10.0, uniform(rng, -3.0, 3.0));
        const double gap = dudley_closed_form(beta, nu) - oracle::dudley_integral(beta, nu, 1e-8);
        if (gap < -1e-10) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("ymax_estimate modes", "[geb]")
{
    const MeasurementModel m(2.0 * Matrix::Identity(3, 3), 0.5);
    CHECK(ymax_estimate(m, 1.0, YMaxMode::Noiseless) == Approx(2.0));
    CHECK(ymax_estimate(m, 1.0, YMaxMode::WhiteNoise) == Approx(5.055).epsilon(1e-14));
    const MeasurementModel quiet(2.0 * Matrix::Identity(3, 3), 0.0);
    CHECK(ymax_estimate(quiet, 1.5, YMaxMode::WhiteNoise) == ymax_estimate(quiet, 1.5, YMaxMode::Noiseless));
    CHECK(ymax_estimate(m, 1.0, YMaxMode::Dataset, {testutil::vec({3.0, 4.0})}) == Approx(5.0));
    CHECK_THROWS_AS(ymax_estimate(m, 1.0, YMaxMode::Dataset, {}), InvalidArgument);
}

TEST_CASE("loss specs", "[geb]")
{
    const LossSpec mae = mae_loss(16, 2.0);
    CHECK(mae.tau == Approx(0.25));
    CHECK(mae.c == Approx(0.5));
    CHECK(ssim_loss(0.7).c == 2.0);
    CHECK_THROWS_AS(ssim_loss(std::nullopt), ConfigError);
    CHECK_THROWS_AS(ssim_loss(0.0), ConfigError);
}

TEST_CASE("geb_bound rejects bad inputs", "[geb]")
{
    const NetworkConfig c = small_drcgnet(4, 1, 1);
    const MeasurementModel m = fixed_model(2, 4, 2);
    const LossSpec l = mae_loss(4, 1.0);
    CHECK_THROWS_AS(geb_bound(c, m, l, 100, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(geb_bound(c, m, l, 100, 1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(geb_bound(c, m, l, 100, 2.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(geb_bound(c, m, l, 0, 0.05, 1.0), InvalidArgument);
    CHECK_THROWS_AS(geb_bound(c, fixed_model(2, 5, 3), l, 100, 0.05, 1.0), ShapeError);
}

TEST_CASE("geb_bound log collapse at yMax = 0", "[geb]")
{
    for (Variant v : {Variant::CgNet, Variant::DrCgNet}) {
        const NetworkConfig c = v == Variant::CgNet ? small_cgnet(5, 2, 3) : small_drcgnet(5, 2, 3);
        const MeasurementModel m = fixed_model(3, 5, 4);
        const LossSpec l = ssim_loss(0.3);
        const BoundReport r = geb_bound(c, m, l, 400, 0.05, 0.0, 0.125);
        double sumAlpha = 0.0;
        for (double a : r.inputs.alpha) sumAlpha += std::sqrt(a);
        const double expected = 8.0 * 0.3 * c.bounds.cMax / 20.0
                                * (std::sqrt(double(r.inputs.dimP)) + c.K * c.J * sumAlpha);
        CHECK(r.term2 == Approx(expected).epsilon(1e-13));
        CHECK(r.term1 == 0.125);
        CHECK(r.total == r.term1 + r.term2 + r.term3);
    }
}

TEST_CASE("geb_bound inputs per variant", "[geb]")
{
    NetworkConfig d = small_drcgnet(6, 1, 2);
    d.Lc = 3;
    d.filters = {1, 2, 3, 1};
    d.kernels = {3, 5, 1};
    d.weightBounds = {1.0, 1.1, 1.2};
    const BoundReport r = geb_bound(d, fixed_model(3, 6, 5), mae_loss(6, 1.0), 10, 0.1, 1.0);
    CHECK(r.inputs.dimP == 11);
    CHECK(r.inputs.alpha == std::vector<double>{18.0, 150.0, 3.0, 1.0});
    CHECK(r.inputs.omega == std::vector<double>{1.0, 1.1, 1.2, 0.5});

    const NetworkConfig c = small_cgnet(6, 1, 1);
    const BoundReport q = geb_bound(c, fixed_model(3, 6, 5), ssim_loss(1.0), 10, 0.1, 1.0);
    CHECK(q.inputs.dimP == 1);
    CHECK(q.inputs.alpha == std::vector<double>{21.0, 1.0});
    CHECK(q.inputs.omega == std::vector<double>{4.0, 2.0});
}

TEST_CASE("geb_bound terms scale as 1/sqrt(Ns)", "[geb]")
{
    const NetworkConfig c = small_drcgnet(6, 2, 2);
    const MeasurementModel m = fixed_model(3, 6, 6);
    const LossSpec l = mae_loss(6, 1.0);
    const BoundReport a = geb_bound(c, m, l, 250, 0.05, 1.7);
    const BoundReport b = geb_bound(c, m, l, 1000, 0.05, 1.7);
    CHECK(b.term2 == Approx(0.5 * a.term2).epsilon(1e-15));
    CHECK(b.term3 == Approx(0.5 * a.term3).epsilon(1e-15));

    double ref = 0.0;
    for (std::int64_t ns : {100LL, 1000LL, 10000LL, 100000LL, 1000000LL}) {
        const BoundReport r = geb_bound(c, m, l, ns, 0.05, 1.7);
        const double v = (r.term2 + r.term3) * std::sqrt(double(ns));
        if (ref == 0.0) ref = v;
        CHECK(std::abs(v - ref) <= 1e-10 * ref);
    }
}

TEST_CASE("geb_bound matches a high-precision evaluation", "[geb]")
{
    using oracle::hp;
    NetworkConfig c = small_drcgnet(4, 1, 1);
    c.Lc = 1;
    c.filters = {1, 1};
    c.kernels = {3};
    c.weightBounds = {1.25};
    c.delta = 0.75;
    c.bounds.xi = 1.5;
    c.bounds.cMax = 1.2;
    Matrix a(2, 4);
    a << 0.5, -0.25, 0.125, 1.0, 0.0, 0.75, -0.5, 0.25;
    const MeasurementModel m(a);
    const double y = 0.9;
    const std::int64_t ns = 500;
    const double epsConf = 0.05;
    const BoundReport r = geb_bound(c, m, mae_loss(4, c.bounds.cMax), ns, epsConf, y);

    const hp a2 = oracle::spectral_norm(a), ai = hp(1.875); // max absolute row sum
    const hp zinf = 2, pmax = 2, pmin = 0.5, w = 1.25, delta = 0.75, xi = 1.5, cmax = 1.2, Y = y, n = 4;
    const hp sq = zinf * pmax * Y * a2 * ai;
    const hp r1 = 1 + delta * sq * sq + w;
    const hp r2 = delta * Y * a2 * (1 + zinf * zinf * pmax * a2 * (a2 + ai));
    const hp r3[2] = {boost::multiprecision::sqrt(n) * zinf, xi};
    const hp c1 = pmax * Y * a2 * (1 + 2 * zinf * zinf * pmax * a2 * a2);
    const hp c2 = zinf * Y * a2 * (pmax / pmin) * (pmax / pmin);
    const hp out = zinf * (c1 + pmax * Y * ai);
    const hp kappa = out * c2 * r2 + zinf * c2;
    (void)r1; // K = 1 leaves r̂₁ unused
    const hp count = 3; // KJD + 1
    auto root = [&](hp alpha, hp omega, hp k) {
        return boost::multiprecision::sqrt(alpha * (1 + boost::multiprecision::log1p(4 * omega * count * k / cmax)));
    };
    hp bracket = root(7, pmax, kappa);
    bracket += root(9, w, out * r3[0]);
    bracket += root(1, delta, out * r3[1]);
    const hp tau = 1 / boost::multiprecision::sqrt(n);
    const hp term2 = 8 * tau * cmax / boost::multiprecision::sqrt(hp(ns)) * bracket;
    const hp term3 = 4 * (cmax / 2) * boost::multiprecision::sqrt(2 * boost::multiprecision::log(4 / hp(epsConf)) / ns);

    CHECK(r.term2 == Approx(static_cast<double>(term2)).epsilon(1e-12));
    CHECK(r.term3 == Approx(static_cast<double>(term3)).epsilon(1e-13));
    CHECK(r.constants.kappa.log() == Approx(static_cast<double>(boost::multiprecision::log(kappa))).epsilon(1e-13));
}

TEST_CASE("geb_bound monotonicity grids", "[geb]")
{
    const MeasurementModel m = fixed_model(3, 6, 7);
    const LossSpec l = ssim_loss(0.5);
    auto t = [&](const NetworkConfig& c, double y = 1.5, std::int64_t ns = 200, double e = 0.05) {
        return geb_bound(c, m, l, ns, e, y).total;
    };
    for (Variant v : {Variant::CgNet, Variant::DrCgNet}) {
        const NetworkConfig base = v == Variant::CgNet ? small_cgnet(6, 2, 2) : small_drcgnet(6, 2, 2);
        for (int k = 1; k < 5; ++k) {
            NetworkConfig lo = base, hi = base;
            lo.K = k;
            hi.K = k + 1;
            CHECK(t(lo) <= t(hi));
            lo = base;
            hi = base;
            lo.J = k;
            hi.J = k + 1;
            CHECK(t(lo) <= t(hi));
        }
        double prev = 0.0;
        for (double y : {0.0, 0.1, 1.0, 2.0, 10.0}) {
            const double cur = t(base, y);
            CHECK(cur >= prev);
            prev = cur;
        }
        prev = 0.0;
        for (double z : {3.0, 4.0, 6.0, 10.0}) {
            NetworkConfig c = base;
            c.bounds.zInf = z;
            if (v == Variant::DrCgNet) c.bounds.b = z;
            const double cur = t(c);
            CHECK(cur >= prev);
            prev = cur;
        }
        prev = 0.0;
        for (double p : {4.0, 5.0, 8.0, 20.0}) {
            NetworkConfig c = base;
            c.spectrum.pMax = p;
            const double cur = t(c);
            CHECK(cur >= prev);
            prev = cur;
        }
        prev = 0.0;
        for (double s : {1.0, 1.5, 3.0}) {
            NetworkConfig c = base;
            if (v == Variant::CgNet) {
                c.mu *= s;
            } else {
                c.delta *= s;
                for (double& w : c.weightBounds) w *= s;
            }
            const double cur = t(c);
            CHECK(cur >= prev);
            prev = cur;
        }
        prev = 1e300;
        for (std::int64_t ns : {1LL, 10LL, 100LL, 1000LL}) {
            const double cur = t(base, 1.5, ns);
            CHECK(cur <= prev);
            prev = cur;
        }
        prev = 1e300;
        for (double e : {0.01, 0.05, 0.2, 0.9}) {
            const double cur = t(base, 1.5, 200, e);
            CHECK(cur <= prev);
            prev = cur;
        }
    }
    // D grows with Lc; weights ≥ 1 keep every product nondecreasing.
    double prev = 0.0;
    for (int lc = 1; lc <= 4; ++lc) {
        NetworkConfig c = small_drcgnet(6, 2, 2);
        c.Lc = lc;
        c.filters.assign(lc + 1, 2);
        c.filters.front() = c.filters.back() = 1;
        c.kernels.assign(lc, 3);
        c.weightBounds.assign(lc, 1.2);
        const double cur = t(c);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("sample_complexity", "[geb]")
{
    const NetworkConfig c = small_drcgnet(4, 1, 2);
    const MeasurementModel m = fixed_model(2, 4, 8);
    const LossSpec l = mae_loss(4, 1.0);
    const BoundReport one = geb_bound(c, m, l, 1, 0.05, 1.0);
    CHECK(sample_complexity(c, m, l, one.term2 + one.term3, 0.05, 1.0) == 1);
    CHECK(sample_complexity(c, m, l, 10.0 * (one.term2 + one.term3), 0.05, 1.0) == 1);

    const double g = 0.1 * (one.term2 + one.term3);
    const std::int64_t ns = sample_complexity(c, m, l, g, 0.05, 1.0);
    const BoundReport at = geb_bound(c, m, l, ns, 0.05, 1.0);
    const BoundReport before = geb_bound(c, m, l, ns - 1, 0.05, 1.0);
    CHECK(at.term2 + at.term3 <= g);
    CHECK(before.term2 + before.term3 > g);

    const std::int64_t ns2 = sample_complexity(c, m, l, 0.5 * g, 0.05, 1.0);
    CHECK(std::abs(ns2 - 4 * ns) <= 4);
    CHECK_THROWS_AS(sample_complexity(c, m, l, 0.0, 0.05, 1.0), InvalidArgument);
    CHECK_THROWS(sample_complexity(c, m, l, 1e-30, 0.05, 1.0));
}

TEST_CASE("bound report JSON", "[geb]")
{
    const NetworkConfig c = small_drcgnet(4, 1, 2);
    const BoundReport r = geb_bound(c, fixed_model(2, 4, 9), mae_loss(4, 1.0), 30, 0.05, 0.0);
    const json j = to_json(r);
    CHECK(j.at("constants").at("ln_kappa") == "-inf");
    CHECK(j.at("inputs").at("dim_P") == 7);
    CHECK(j.at("constants").at("ln_kappa_kdj").size() == 1);
    CHECK(j.at("constants").at("ln_kappa_kdj")[0].size() == 2);
    CHECK(j.at("constants").at("ln_kappa_kdj")[0][0].size() == 3);
}

TEST_CASE("fit_loglog recovers exact power laws", "[geb]")
{
    std::vector<double> xs{1, 2, 4, 8, 16}, ys;
    for (double x : xs) ys.push_back(3.0 * std::pow(x, 1.7));
    const LogLogFit f = fit_loglog(xs, ys);
    CHECK(f.slope == Approx(1.7).epsilon(1e-13));
    CHECK(f.rSquared == Approx(1.0));
    CHECK_THROWS_AS(fit_loglog({1, 1}, {1, 2}), InvalidArgument);
    CHECK(split_kj(12) == std::pair<int, int>{3, 4});
    CHECK(split_kj(64) == std::pair<int, int>{8, 8});
    CHECK(split_kj(7) == std::pair<int, int>{1, 7});
}

TEST_CASE("scaling_fit rejects degenerate sweeps", "[geb]")
{
    SweepSpec s;
    s.base = drcgnet_reference_config(8, 1, 1);
    s.m = 4;
    s.values = {4, 16, 64};
    CHECK_THROWS_AS(scaling_fit(s), InvalidArgument);
    s.values = {4, 5, 6, 7};
    CHECK_THROWS_AS(scaling_fit(s), InvalidArgument);
}

TEST_CASE("scaling in Ns is exactly -1/2", "[geb]")
{
    SweepSpec s;
    s.axis = ScalingAxis::Ns;
    s.base = drcgnet_reference_config(8, 2, 2);
    s.m = 4;
    s.values = {1e2, 1e3, 1e4, 1e5, 1e6};
    const ScalingFit f = scaling_fit(s);
    CHECK(std::abs(f.exponent + 0.5) <= 1e-6);
}

TEST_CASE("DR-CG-Net term2 grows like (KJ)^(3/2)", "[geb]")
{
    SweepSpec s;
    s.axis = ScalingAxis::KJ;
    s.base = drcgnet_reference_config(8, 1, 1);
    s.m = 4;
    s.seed = kSeed;
    s.values = {4, 16, 64, 256};
    const ScalingFit f = scaling_fit(s);
    INFO("exponent " << f.exponent);
    CHECK(std::abs(f.exponent - 1.5) <= 0.1);
}

TEST_CASE("CG-Net term2 grows like n after the sqrt(ln n) division", "[geb][corollary]")
{
    SweepSpec s;
    s.axis = ScalingAxis::N;
    s.base = cgnet_reference_config(4, 2, 2);
    s.seed = kSeed;
    s.loss = ssim_loss(1.0);
    s.values = {4, 8, 16, 32, 64};
    const ScalingFit f = scaling_fit(s);
    INFO("exponent " << f.exponent);
    CHECK(std::abs(f.exponent - 1.0) <= 0.1);
}

TEST_CASE("comparator ratio is linear in n", "[geb]")
{
    CHECK(cgnet_comparator(8, 4, 16, 100) / drcgnet_comparator(8, 4, 16, 100) == Approx(8.0));
    const LogLogFit f = observation_fit({4, 8, 16, 32, 64}, 64, 1e4);
    CHECK(std::abs(f.slope - 1.0) <= 0.05);
}
