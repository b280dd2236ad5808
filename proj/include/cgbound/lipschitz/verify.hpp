#pragma once

// Randomized certification of the Lipschitz and boundedness inequalities.
// Each trial samples admissible inputs, evaluates both sides and records
// whether LHS ≤ RHS(1 + 1e-9) + 1e-12.

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/json_io.hpp"
#include "cgbound/core/linalg.hpp"
#include "cgbound/core/random.hpp"
#include "cgbound/core/tikhonov.hpp"
#include "cgbound/lipschitz/constants.hpp"
#include "cgbound/network/forward.hpp"
#include "cgbound/network/parameters.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

namespace cgbound {

enum class VerifyTarget {
    Lemma1,
    Lemma2,
    Lemma3,
    Cor3,
    Prop1,
    Prop2,
    Prop3_2,
    Prop3_Inf,
    Prop4,
    Thm4,
    Thm1Dominance,
    AppC,
    AppE_bound,
    AppE_lip,
};

inline const std::vector<VerifyTarget>& all_verify_targets()
{
    static const std::vector<VerifyTarget> all{
        VerifyTarget::Lemma1,   VerifyTarget::Lemma2,    VerifyTarget::Lemma3, VerifyTarget::Cor3,
        VerifyTarget::Prop1,    VerifyTarget::Prop2,     VerifyTarget::Prop3_2, VerifyTarget::Prop3_Inf,
        VerifyTarget::Prop4,    VerifyTarget::Thm4,      VerifyTarget::Thm1Dominance, VerifyTarget::AppC,
        VerifyTarget::AppE_bound, VerifyTarget::AppE_lip,
    };
    return all;
}

inline std::string to_string(VerifyTarget t)
{
    switch (t) {
    case VerifyTarget::Lemma1: return "Lemma1";
    case VerifyTarget::Lemma2: return "Lemma2";
    case VerifyTarget::Lemma3: return "Lemma3";
    case VerifyTarget::Cor3: return "Cor3";
    case VerifyTarget::Prop1: return "Prop1";
    case VerifyTarget::Prop2: return "Prop2";
    case VerifyTarget::Prop3_2: return "Prop3-2";
    case VerifyTarget::Prop3_Inf: return "Prop3-inf";
    case VerifyTarget::Prop4: return "Prop4";
    case VerifyTarget::Thm4: return "Thm4";
    case VerifyTarget::Thm1Dominance: return "Thm1Dominance";
    case VerifyTarget::AppC: return "AppC";
    case VerifyTarget::AppE_bound: return "AppE_bound";
    case VerifyTarget::AppE_lip: return "AppE_lip";
    }
    return "?";
}

inline VerifyTarget verify_target_from_string(const std::string& s)
{
    for (VerifyTarget t : all_verify_targets())
        if (to_string(t) == s) return t;
    throw InvalidArgument("unknown verification target '" + s + "'");
}

/// Trial dimension caps.
struct VerifyDims {
    int maxN = 12;
    int maxM = 6;
    int maxKJ = 12;
};

/// Outcome of one trial. rhsLog is ln(RHS); RHS values past double range are
/// compared in log space.
struct TrialOutcome {
    double lhs = 0.0;
    double rhsLog = -INFINITY;
    bool holds = true;
    double tightness = 0.0; // LHS / RHS, 0 when both vanish
};

inline constexpr double kVerifyRelTol = 1e-9;
inline constexpr double kVerifyAbsTol = 1e-12;

inline TrialOutcome judge(double lhs, LogReal rhs)
{
    TrialOutcome o;
    o.lhs = lhs;
    o.rhsLog = rhs.log();
    if (!std::isfinite(lhs)) {
        o.holds = false;
        o.tightness = INFINITY;
        return o;
    }
    const double r = rhs.value(); // +inf beyond range, which any finite LHS satisfies
    o.holds = lhs <= r * (1.0 + kVerifyRelTol) + kVerifyAbsTol;
    if (lhs <= 0.0) o.tightness = 0.0;
    else if (rhs.is_zero()) o.tightness = INFINITY;
    else o.tightness = std::exp(std::log(lhs) - rhs.log());
    return o;
}

inline TrialOutcome judge(double lhs, double rhs)
{
    return judge(lhs, LogReal(std::max(0.0, rhs)));
}

/// Combines several inequalities checked in one trial: holds iff all hold,
/// tightness is the largest.
inline TrialOutcome judge_all(const std::vector<TrialOutcome>& parts)
{
    TrialOutcome o;
    for (const TrialOutcome& p : parts) {
        o.holds = o.holds && p.holds;
        if (p.tightness >= o.tightness) {
            o.tightness = p.tightness;
            o.lhs = p.lhs;
            o.rhsLog = p.rhsLog;
        }
    }
    return o;
}

struct VerificationReport {
    std::string target;
    int trials = 0;
    int passes = 0;
    double medianTightness = 0.0;
    double maxTightness = 0.0;
    std::uint64_t seed = 0;
    std::vector<int> failedTrials; // first few, for reproduction

    bool all_pass() const noexcept { return passes == trials; }
};

inline json to_json(const VerificationReport& r)
{
    json j;
    j["target"] = r.target;
    j["trials"] = r.trials;
    j["passes"] = r.passes;
    j["median_tightness"] = r.medianTightness;
    j["max_tightness"] = std::isfinite(r.maxTightness) ? json(r.maxTightness) : json("inf");
    j["seed"] = r.seed;
    j["failed_trials"] = r.failedTrials;
    return j;
}

namespace detail {

inline Vector signed_scale(Rng& rng, Eigen::Index n, double zInf)
{
    if (uniform(rng, 0.0, 1.0) < 0.2) {
        Vector z(n);
        for (Eigen::Index i = 0; i < n; ++i) z(i) = uniform(rng, 0.0, 1.0) < 0.5 ? -zInf : zInf;
        return z;
    }
    return uniform_vector(rng, n, -zInf, zInf);
}

inline Vector nonneg_scale(Rng& rng, Eigen::Index n, double zInf)
{
    if (uniform(rng, 0.0, 1.0) < 0.2) {
        Vector z(n);
        for (Eigen::Index i = 0; i < n; ++i) z(i) = uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : zInf;
        return z;
    }
    return uniform_vector(rng, n, 0.0, zInf);
}

/// ‖z₁ − z₂‖ either generic or zero (z₂ = z₁).
inline Vector second_scale(Rng& rng, const Vector& z1, Vector fresh)
{
    return uniform(rng, 0.0, 1.0) < 0.1 ? z1 : fresh;
}

inline MeasurementModel sample_model(Rng& rng, int m, int n)
{
    const double sd = uniform(rng, 0.2, 1.5) / std::sqrt(static_cast<double>(m));
    return MeasurementModel(gaussian_matrix(rng, m, n, sd * std::pow(10.0, uniform(rng, -1.0, 1.0))));
}

inline Vector sample_measurement(Rng& rng, int m)
{
    Vector y = gaussian_vector(rng, m);
    const double nrm = y.norm();
    if (nrm == 0.0) return y;
    return y * (uniform(rng, 0.1, 3.0) / nrm);
}

inline SpectrumBounds sample_spectrum(Rng& rng)
{
    SpectrumBounds sb;
    sb.pMax = uniform(rng, 0.5, 4.0);
    sb.pMin = sb.pMax / uniform(rng, 1.0, 20.0);
    return sb;
}

inline CovStructure sample_structure(Rng& rng)
{
    const CovStructure all[] = {CovStructure::ScaledIdentity, CovStructure::Diagonal, CovStructure::Tridiagonal,
                                CovStructure::Full};
    return all[uniform_int(rng, 0, 3)];
}

/// P̃ relative to P: equal, a convex blend with a fresh draw, or independent.
inline SpdMatrix second_covariance(Rng& rng, const SpdMatrix& p, CovStructure s, const SpectrumBounds& sb)
{
    const double pick = uniform(rng, 0.0, 1.0);
    if (pick < 0.15) return p;
    const SpdMatrix fresh = sample_covariance(rng, s, p.n(), sb);
    if (pick < 0.5) {
        const double t = uniform(rng, 0.0, 1.0);
        return SpdMatrix((1.0 - t) * p.P() + t * fresh.P());
    }
    return fresh;
}

inline NetworkConfig sample_network_config(Rng& rng, const VerifyDims& dims)
{
    NetworkConfig c;
    c.variant = uniform(rng, 0.0, 1.0) < 0.5 ? Variant::CgNet : Variant::DrCgNet;
    c.n = uniform_int(rng, 1, dims.maxN);
    do {
        c.K = uniform_int(rng, 1, 4);
        c.J = uniform_int(rng, 1, 4);
    } while (c.K * c.J > dims.maxKJ);
    c.bounds.zInf = uniform(rng, 0.5, 3.0);
    c.bounds.cMax = uniform(rng, 0.5, 2.0);
    c.bounds.xi = uniform(rng, 0.5, 2.0);
    c.spectrum = sample_spectrum(rng);
    c.covStructure = sample_structure(rng);
    if (c.variant == Variant::CgNet) {
        c.bounds.a = uniform(rng, 0.2, 1.0);
        c.bounds.b = std::max(c.bounds.a, uniform(rng, 0.5, 1.0) * c.bounds.zInf);
        c.mu = uniform(rng, 0.1, 5.0);
    } else {
        c.bounds.a = 0.0;
        c.bounds.b = c.bounds.zInf;
        c.Lc = uniform_int(rng, 1, 3);
        c.filters.assign(static_cast<std::size_t>(c.Lc + 1), 1);
        for (int l = 1; l < c.Lc; ++l) c.filters[static_cast<std::size_t>(l)] = uniform_int(rng, 1, 3);
        c.kernels.assign(static_cast<std::size_t>(c.Lc), 3);
        c.weightBounds.clear();
        for (int l = 0; l < c.Lc; ++l) c.weightBounds.push_back(uniform(rng, 0.2, 1.5));
        c.delta = uniform(rng, 0.1, 2.0);
    }
    return c;
}

inline void copy_block(StepParams& dst, const StepParams& src, int d, const NetworkConfig& cfg)
{
    if (cfg.variant == Variant::CgNet) {
        if (d == 1) dst.B = src.B;
        else dst.mu = src.mu;
    } else {
        if (d <= cfg.Lc) dst.W[static_cast<std::size_t>(d - 1)] = src.W[static_cast<std::size_t>(d - 1)];
        else dst.delta = src.delta;
    }
}

/// Θ̃ relative to Θ: equal, blend, one block of one step replaced, or independent.
/// P̃ follows its own choice so both the ‖ΔP‖ and ‖Δθ‖ channels get exercised.
inline ParameterSet second_parameters(Rng& rng, const ParameterSet& a, const NetworkConfig& cfg)
{
    const double pick = uniform(rng, 0.0, 1.0);
    if (pick < 0.1) return a;
    const ParameterSet fresh = sample_parameters(cfg, rng);
    if (pick < 0.35) return blend(a, fresh, uniform(rng, 0.0, 1.0));
    if (pick < 0.7) {
        ParameterSet out = a;
        const int k = uniform_int(rng, 0, cfg.K - 1), j = uniform_int(rng, 0, cfg.J - 1);
        const int d = uniform_int(rng, 1, cfg.D());
        copy_block(out.theta[k][j], fresh.theta[k][j], d, cfg);
        if (uniform(rng, 0.0, 1.0) < 0.3) out.P = fresh.P;
        return out;
    }
    return fresh;
}

inline LogReal parameter_term(const std::vector<std::vector<std::vector<LogReal>>>& coeff, const ParameterSet& a,
                              const ParameterSet& b, const NetworkConfig& cfg)
{
    LogReal sum;
    for (int k = 0; k < cfg.K; ++k)
        for (int j = 0; j < cfg.J; ++j)
            for (int d = 1; d <= cfg.D(); ++d)
                sum += coeff[k][j][d - 1] * LogReal(block_distance(a.theta[k][j], b.theta[k][j], d, cfg));
    return sum;
}

inline Matrix gram_z(const MeasurementModel& model, const Vector& z)
{
    const Matrix az = scale_columns(model.A(), z);
    return az.transpose() * az;
}

// Shared setup of the Tikhonov targets.
struct TikhonovDraw {
    MeasurementModel model;
    double zInf = 0.0;
    SpectrumBounds sb;
    CovStructure structure = CovStructure::Full;
    Vector z1, z2, y;
    SpdMatrix p, pt;
};

inline TikhonovDraw draw_tikhonov(Rng& rng, const VerifyDims& dims)
{
    TikhonovDraw d;
    const int n = uniform_int(rng, 1, dims.maxN), m = uniform_int(rng, 1, dims.maxM);
    d.model = sample_model(rng, m, n);
    d.zInf = uniform(rng, 0.5, 3.0);
    d.sb = sample_spectrum(rng);
    d.structure = sample_structure(rng);
    d.z1 = signed_scale(rng, n, d.zInf);
    d.z2 = second_scale(rng, d.z1, signed_scale(rng, n, d.zInf));
    d.y = sample_measurement(rng, m);
    d.p = sample_covariance(rng, d.structure, n, d.sb);
    d.pt = second_covariance(rng, d.p, d.structure, d.sb);
    return d;
}

inline TrialOutcome trial_lemma1(Rng& rng, const VerifyDims& dims)
{
    const TikhonovDraw d = draw_tikhonov(rng, dims);
    const Matrix m = gram_z(d.model, d.z1) + d.p.inverse();
    return judge(spectral_norm(m.inverse()), d.p.pMax());
}

inline TrialOutcome trial_lemma2(Rng& rng, const VerifyDims& dims)
{
    const TikhonovDraw d = draw_tikhonov(rng, dims);
    const double lhs = spectral_norm(gram_z(d.model, d.z2) - gram_z(d.model, d.z1));
    const double a2 = d.model.norm2();
    return judge(lhs, 2.0 * d.zInf * a2 * a2 * max_abs(d.z1 - d.z2));
}

inline TrialOutcome trial_lemma3(Rng& rng, const VerifyDims& dims)
{
    const TikhonovDraw d = draw_tikhonov(rng, dims);
    const double lhs = spectral_norm(d.pt.inverse() - d.p.inverse());
    return judge(lhs, d.p.pMinInv() * d.pt.pMinInv() * spectral_norm(d.p.P() - d.pt.P()));
}

inline TrialOutcome trial_cor3(Rng& rng, const VerifyDims& dims)
{
    const TikhonovDraw d = draw_tikhonov(rng, dims);
    const Matrix m1 = (gram_z(d.model, d.z1) + d.p.inverse()).inverse();
    const Matrix m2 = (gram_z(d.model, d.z2) + d.pt.inverse()).inverse();
    const double a2 = d.model.norm2();
    const double rhs = 2.0 * d.zInf * a2 * a2 * d.p.pMax() * d.pt.pMax() * max_abs(d.z1 - d.z2)
                     + d.p.cond() * d.pt.cond() * spectral_norm(d.p.P() - d.pt.P());
    return judge(spectral_norm(m1 - m2), rhs);
}

inline TrialOutcome trial_prop2(Rng& rng, const VerifyDims& dims)
{
    const TikhonovDraw d = draw_tikhonov(rng, dims);
    const Vector u1 = tikhonov_solve(d.model, d.z1, d.y, d.p);
    const Vector u2 = tikhonov_solve(d.model, d.z2, d.y, d.pt);
    const TikhonovConstants tc = tikhonov_instance_constants(d.y.norm(), d.zInf, d.p, d.pt, d.model);
    return judge((u1 - u2).norm(), tc.c1 * max_abs(d.z1 - d.z2) + tc.c2 * spectral_norm(d.p.P() - d.pt.P()));
}

inline TrialOutcome trial_prop3(Rng& rng, const VerifyDims& dims, bool infNorm)
{
    const TikhonovDraw d = draw_tikhonov(rng, dims);
    const Vector u = tikhonov_solve(d.model, d.z1, d.y, d.p);
    const double zi = max_abs(d.z1);
    if (infNorm) return judge(max_abs(u), zi * d.p.pMax() * d.model.normInf() * max_abs(d.y));
    return judge(u.norm(), zi * d.p.pMax() * d.model.norm2() * d.y.norm());
}

inline TrialOutcome trial_appc(Rng& rng, const VerifyDims& dims)
{
    const TikhonovDraw d = draw_tikhonov(rng, dims);
    const Vector u1 = tikhonov_solve(d.model, d.z1, d.y, d.p);
    const Vector u2 = tikhonov_solve(d.model, d.z2, d.y, d.pt);
    const double lhs = (datafit_grad(d.z1, u1, d.y, d.model) - datafit_grad(d.z2, u2, d.y, d.model)).norm();
    const DatafitConstants c = datafit_grad_constants(d.zInf, d.sb.pMax, d.y.norm(), d.model);
    return judge(lhs, c.Lz * (d.z1 - d.z2).norm() + c.Lu * (u1 - u2).norm());
}

// Shared setup of the network targets.
struct NetworkDraw {
    NetworkConfig cfg;
    MeasurementModel model;
    Vector y;
    ParameterSet a, b;
};

inline NetworkDraw draw_network(Rng& rng, const VerifyDims& dims)
{
    NetworkDraw d;
    d.cfg = sample_network_config(rng, dims);
    const int m = uniform_int(rng, 1, dims.maxM);
    d.model = sample_model(rng, m, d.cfg.n);
    d.y = sample_measurement(rng, m);
    d.a = sample_parameters(d.cfg, rng);
    d.b = second_parameters(rng, d.a, d.cfg);
    return d;
}

inline TrialOutcome trial_prop1(Rng& rng, const VerifyDims& dims)
{
    const NetworkDraw d = draw_network(rng, dims);
    const NetworkConfig& cfg = d.cfg;
    const Vector z1 = nonneg_scale(rng, cfg.n, cfg.bounds.zInf);
    const Vector z2 = second_scale(rng, z1, nonneg_scale(rng, cfg.n, cfg.bounds.zInf));
    const Vector u1 = tikhonov_solve(d.model, z1, d.y, d.a.P);
    const Vector u2 = tikhonov_solve(d.model, z2, d.y, d.b.P);
    const int k = uniform_int(rng, 0, cfg.K - 1);
    const Vector lhsA = scale_mapping(z1, u1, d.y, d.model, d.a.theta[k], cfg);
    const Vector lhsB = scale_mapping(z2, u2, d.y, d.model, d.b.theta[k], cfg);

    const LayerAggregate agg = aggregate_step(step_constants(cfg, d.model, d.y.norm()), cfg.J);
    LogReal rhs = agg.rHat1 * LogReal((z1 - z2).norm()) + agg.rHat2 * LogReal((u1 - u2).norm());
    for (int j = 0; j < cfg.J; ++j)
        for (int dd = 1; dd <= cfg.D(); ++dd)
            rhs += agg.rHat3[j][dd - 1] * LogReal(block_distance(d.a.theta[k][j], d.b.theta[k][j], dd, cfg));
    return judge((lhsA - lhsB).norm(), rhs);
}

inline TrialOutcome trial_prop4(Rng& rng, const VerifyDims& dims)
{
    const NetworkDraw d = draw_network(rng, dims);
    const NetworkConfig& cfg = d.cfg;
    const ForwardTrace ta = forward(d.y, d.model, d.a, cfg), tb = forward(d.y, d.model, d.b, cfg);
    const Vector& za = ta.zk[cfg.K - 1][cfg.J - 1];
    const Vector& zb = tb.zk[cfg.K - 1][cfg.J - 1];
    const AggregateConstants ac = instance_network_constants(cfg, d.model, d.y, d.a.P, d.b.P);
    const LogReal rhs = ac.cHat1 * LogReal(spectral_norm(d.a.P.P() - d.b.P.P())) + parameter_term(ac.cHat2, d.a, d.b, cfg);
    return judge((za - zb).norm(), rhs);
}

inline TrialOutcome trial_thm4(Rng& rng, const VerifyDims& dims)
{
    const NetworkDraw d = draw_network(rng, dims);
    const NetworkConfig& cfg = d.cfg;
    const Vector ca = forward_output(d.y, d.model, d.a, cfg), cb = forward_output(d.y, d.model, d.b, cfg);
    const AggregateConstants ac = instance_network_constants(cfg, d.model, d.y, d.a.P, d.b.P);
    const LogReal rhs =
        ac.kappa * LogReal(spectral_norm(d.a.P.P() - d.b.P.P())) + parameter_term(ac.kappaKdj, d.a, d.b, cfg);
    return judge((ca - cb).norm(), rhs);
}

/// Worst-case κ, κ_kdj (y_max = ‖y‖₂) dominate their instance forms.
inline TrialOutcome trial_thm1_dominance(Rng& rng, const VerifyDims& dims)
{
    const NetworkDraw d = draw_network(rng, dims);
    const NetworkConfig& cfg = d.cfg;
    const AggregateConstants inst = instance_network_constants(cfg, d.model, d.y, d.a.P, d.b.P);
    const AggregateConstants worst = network_constants(cfg, d.model, d.y.norm());
    auto part = [](LogReal lhs, LogReal rhs) {
        TrialOutcome o;
        o.lhs = lhs.value();
        o.rhsLog = rhs.log();
        if (lhs.is_zero()) return o;
        const double diff = lhs.log() - rhs.log();
        o.tightness = rhs.is_zero() ? INFINITY : std::exp(diff);
        o.holds = diff <= std::log1p(kVerifyRelTol) || lhs.value() <= kVerifyAbsTol;
        return o;
    };
    std::vector<TrialOutcome> parts{part(inst.kappa, worst.kappa)};
    for (std::size_t k = 0; k < inst.kappaKdj.size(); ++k)
        for (std::size_t j = 0; j < inst.kappaKdj[k].size(); ++j)
            for (std::size_t dd = 0; dd < inst.kappaKdj[k][j].size(); ++dd)
                parts.push_back(part(inst.kappaKdj[k][j][dd], worst.kappaKdj[k][j][dd]));
    return judge_all(parts);
}

// Fully connected stack with dims d_1..d_{T+1} and ‖W_t‖₂ ≤ ϖ_t.
struct FcDraw {
    std::vector<Matrix> w1, w2;
    std::vector<double> bounds;
    Vector x1, x2;
    int activation = 0; // 0 ReLU, 1 leaky ReLU, 2 tanh; all 1-Lipschitz with ‖σ(x)‖ ≤ ‖x‖
    double leak = 0.0;
};

inline Vector activate(const Vector& x, int kind, double leak)
{
    switch (kind) {
    case 0: return x.cwiseMax(0.0);
    case 1: return x.unaryExpr([leak](double v) { return v >= 0.0 ? v : leak * v; });
    default: return x.array().tanh().matrix();
    }
}

inline Vector fc_forward(const std::vector<Matrix>& w, const Vector& x, int kind, double leak)
{
    Vector h = w[0] * x;
    for (std::size_t t = 1; t < w.size(); ++t) h = w[t] * activate(h, kind, leak);
    return h;
}

inline FcDraw draw_fc(Rng& rng, const VerifyDims& dims)
{
    FcDraw d;
    const int T = uniform_int(rng, 1, 5);
    std::vector<int> widths;
    for (int t = 0; t <= T; ++t) widths.push_back(uniform_int(rng, 1, dims.maxN));
    for (int t = 0; t < T; ++t) {
        const double bound = uniform(rng, 0.1, 2.0);
        d.bounds.push_back(bound);
        auto draw = [&] {
            Matrix g = gaussian_matrix(rng, widths[t + 1], widths[t]);
            const double s = spectral_norm(g);
            const double r = uniform(rng, 0.0, 1.0) < 0.3 ? 1.0 : uniform(rng, 0.0, 1.0);
            return s > 0.0 ? Matrix(g * (bound * r / s)) : g;
        };
        d.w1.push_back(draw());
        d.w2.push_back(uniform(rng, 0.0, 1.0) < 0.2 ? d.w1.back() : draw());
    }
    d.x1 = gaussian_vector(rng, widths[0], uniform(rng, 0.1, 3.0));
    d.x2 = uniform(rng, 0.0, 1.0) < 0.1 ? d.x1 : gaussian_vector(rng, widths[0], uniform(rng, 0.1, 3.0));
    d.activation = uniform_int(rng, 0, 2);
    d.leak = uniform(rng, 0.0, 1.0);
    return d;
}

inline TrialOutcome trial_appe_bound(Rng& rng, const VerifyDims& dims)
{
    const FcDraw d = draw_fc(rng, dims);
    double prod = 1.0;
    for (double w : d.bounds) prod *= w;
    const Vector out = activate(fc_forward(d.w1, d.x1, d.activation, d.leak), d.activation, d.leak);
    return judge(out.norm(), prod * d.x1.norm());
}

inline TrialOutcome trial_appe_lip(Rng& rng, const VerifyDims& dims)
{
    const FcDraw d = draw_fc(rng, dims);
    const FcLipschitz c = fc_lipschitz(d.bounds, 1.0, d.x1.norm());
    double rhs = c.inputCoeff * (d.x1 - d.x2).norm();
    for (std::size_t t = 0; t < d.w1.size(); ++t) rhs += c.weightCoeffs[t] * spectral_norm(d.w1[t] - d.w2[t]);
    const Vector o1 = fc_forward(d.w1, d.x1, d.activation, d.leak), o2 = fc_forward(d.w2, d.x2, d.activation, d.leak);
    return judge((o1 - o2).norm(), rhs);
}

} // namespace detail

/// One trial of `target` with its own stream.
inline TrialOutcome run_trial(VerifyTarget target, Rng& rng, const VerifyDims& dims)
{
    using namespace detail;
    switch (target) {
    case VerifyTarget::Lemma1: return trial_lemma1(rng, dims);
    case VerifyTarget::Lemma2: return trial_lemma2(rng, dims);
    case VerifyTarget::Lemma3: return trial_lemma3(rng, dims);
    case VerifyTarget::Cor3: return trial_cor3(rng, dims);
    case VerifyTarget::Prop1: return trial_prop1(rng, dims);
    case VerifyTarget::Prop2: return trial_prop2(rng, dims);
    case VerifyTarget::Prop3_2: return trial_prop3(rng, dims, false);
    case VerifyTarget::Prop3_Inf: return trial_prop3(rng, dims, true);
    case VerifyTarget::Prop4: return trial_prop4(rng, dims);
    case VerifyTarget::Thm4: return trial_thm4(rng, dims);
    case VerifyTarget::Thm1Dominance: return trial_thm1_dominance(rng, dims);
    case VerifyTarget::AppC: return trial_appc(rng, dims);
    case VerifyTarget::AppE_bound: return trial_appe_bound(rng, dims);
    case VerifyTarget::AppE_lip: return trial_appe_lip(rng, dims);
    }
    throw InvalidArgument("unknown verification target");
}

/// Stream index of (target, trial), so targets never share draws.
inline std::uint64_t trial_stream(VerifyTarget target, int trial)
{
    return (static_cast<std::uint64_t>(target) << 40) ^ static_cast<std::uint64_t>(trial);
}

inline VerificationReport verify_lipschitz(VerifyTarget target, int trials, std::uint64_t seed,
                                           const VerifyDims& dims = {}, unsigned workers = 0)
{
    if (trials < 1) throw InvalidArgument("verify_lipschitz: trials must be >= 1");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(trials));

    std::vector<TrialOutcome> out(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int t = next++; t < trials; t = next++) {
            Rng rng = make_stream(seed, trial_stream(target, t));
            out[static_cast<std::size_t>(t)] = run_trial(target, rng, dims);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    VerificationReport r;
    r.target = to_string(target);
    r.trials = trials;
    r.seed = seed;
    std::vector<double> tight;
    tight.reserve(out.size());
    for (int t = 0; t < trials; ++t) {
        const TrialOutcome& o = out[static_cast<std::size_t>(t)];
        if (o.holds) ++r.passes;
        else if (r.failedTrials.size() < 10) r.failedTrials.push_back(t);
        tight.push_back(o.tightness);
    }
    std::sort(tight.begin(), tight.end());
    const std::size_t mid = tight.size() / 2;
    r.medianTightness = tight.size() % 2 ? tight[mid] : 0.5 * (tight[mid - 1] + tight[mid]);
    r.maxTightness = tight.back();
    return r;
}

} // namespace cgbound
