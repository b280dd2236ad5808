#pragma once

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"
#include "cgbound/core/types.hpp"
#include "cgbound/lipschitz/log_real.hpp"
#include "cgbound/network/config.hpp"
#include "cgbound/network/scale_updates.hpp"

#include <cmath>
#include <vector>

namespace cgbound {

/// Per-step constants of the scale-update Lipschitz condition:
/// ‖g(z₁,u₁;ϑ) − g(z₂,u₂;ϑ̃)‖ ≤ r₁‖z₁−z₂‖ + r₂‖u₁−u₂‖ + Σ_d r₃[d−1]‖θ_d − θ̃_d‖.
struct StepConstants {
    double r1 = 0.0;
    double r2 = 0.0;
    std::vector<double> r3; // indexed by d − 1
};

/// Constants of one complete scale mapping 𝒵_k^{(J)}.
struct LayerAggregate {
    LogReal rHat1;
    LogReal rHat2;
    std::vector<std::vector<LogReal>> rHat3; // [j − 1][d − 1]
};

struct TikhonovConstants {
    double c1 = 0.0;
    double c2 = 0.0;
};

struct AggregateConstants {
    StepConstants step;
    LogReal rHat1;
    LogReal rHat2;
    std::vector<std::vector<LogReal>> rHat3;             // [j][d]
    double c1 = 0.0;
    double c2 = 0.0;
    double outFactor = 0.0;                              // c₁ + (bound on ‖U_K‖∞ per unit z∞)
    LogReal cHat1;
    std::vector<std::vector<std::vector<LogReal>>> cHat2;    // [k][j][d]
    LogReal kappa;
    std::vector<std::vector<std::vector<LogReal>>> kappaKdj; // [k][j][d]
};

/// (z∞ p_max y ‖A‖₂ ‖A‖∞)², the z-coefficient of the data-fidelity gradient.
inline double datafit_z_coefficient(double zInf, double pMax, double yNorm2, const MeasurementModel& model)
{
    const double t = zInf * pMax * yNorm2 * model.norm2() * model.normInf();
    return t * t;
}

/// y ‖A‖₂ (1 + z∞² p_max ‖A‖₂ (‖A‖₂ + ‖A‖∞)), its u-coefficient.
inline double datafit_u_coefficient(double zInf, double pMax, double yNorm2, const MeasurementModel& model)
{
    const double a2 = model.norm2(), ai = model.normInf();
    return yNorm2 * a2 * (1.0 + zInf * zInf * pMax * a2 * (a2 + ai));
}

struct DatafitConstants {
    double Lz = 0.0;
    double Lu = 0.0;
};

/// Lipschitz coefficients of A_uᵀ(A_u z − y) in z and u for u a Tikhonov image.
inline DatafitConstants datafit_grad_constants(double zInf, double pMax, double yNorm2, const MeasurementModel& model)
{
    return {datafit_z_coefficient(zInf, pMax, yNorm2, model), datafit_u_coefficient(zInf, pMax, yNorm2, model)};
}

inline StepConstants step_constants(const NetworkConfig& cfg, const MeasurementModel& model, double yMax)
{
    if (!(yMax >= 0.0)) throw InvalidArgument("step_constants: yMax must be nonnegative");
    const double zInf = cfg.bounds.zInf, pMax = cfg.spectrum.pMax;
    const double fz = datafit_z_coefficient(zInf, pMax, yMax, model);
    const double fu = datafit_u_coefficient(zInf, pMax, yMax, model);
    StepConstants s;
    if (cfg.variant == Variant::CgNet) {
        const PriorConstants pc = exp_prior_constants(cfg.bounds.a, cfg.bounds.b);
        s.r1 = 1.0 + pMax * (fz + cfg.mu * pc.tauH);
        s.r2 = pMax * fu;
        s.r3 = {cfg.bounds.xi, pMax * pc.hMax};
    } else {
        double prodW = 1.0;
        for (double w : cfg.weightBounds) prodW *= w;
        s.r1 = 1.0 + cfg.delta * fz + prodW;
        s.r2 = cfg.delta * fu;
        const double sq = std::sqrt(static_cast<double>(cfg.n)) * zInf;
        for (int d = 1; d <= cfg.Lc; ++d) {
            double others = 1.0;
            for (int l = 1; l <= cfg.Lc; ++l)
                if (l != d) others *= cfg.weightBounds[static_cast<std::size_t>(l - 1)];
            s.r3.push_back(sq * others);
        }
        s.r3.push_back(cfg.bounds.xi);
    }
    return s;
}

/// Composition of J steps; steps[j − 1] holds the constants of step j.
/// r̂₂ is kept as the explicit sum Σ_j r₂^{(j−1)} ∏_{ℓ=j}^{J−1} r₁^{(ℓ)}.
inline LayerAggregate aggregate_step(const std::vector<StepConstants>& steps)
{
    if (steps.empty()) throw InvalidArgument("aggregate_step: J must be >= 1");
    const std::size_t J = steps.size();
    // tail[j] = ∏_{ℓ=j}^{J−1} r₁ of steps ℓ (0-based), tail[J] = 1.
    std::vector<LogReal> tail(J + 1, LogReal::one());
    for (std::size_t j = J; j-- > 0;) tail[j] = tail[j + 1] * LogReal(steps[j].r1);
    LayerAggregate out;
    out.rHat1 = tail[0];
    out.rHat3.resize(J);
    for (std::size_t j = 0; j < J; ++j) {
        out.rHat2 += LogReal(steps[j].r2) * tail[j + 1];
        for (double r3 : steps[j].r3) out.rHat3[j].push_back(LogReal(r3) * tail[j + 1]);
    }
    return out;
}

inline LayerAggregate aggregate_step(const StepConstants& rc, int J)
{
    if (J < 1) throw InvalidArgument("aggregate_step: J must be >= 1");
    return aggregate_step(std::vector<StepConstants>(static_cast<std::size_t>(J), rc));
}

/// Worst-case Tikhonov constants over the spectrum-bounded set, y_max ← yNorm2.
inline TikhonovConstants tikhonov_constants(double yNorm2, double zInf, double pMax, double pMin,
                                            const MeasurementModel& model)
{
    if (!(pMin > 0.0) || !(pMin <= pMax)) throw InvalidArgument("tikhonov_constants: need 0 < pMin <= pMax");
    const double a2 = model.norm2();
    const double ratio = pMax / pMin;
    return {pMax * yNorm2 * a2 * (1.0 + 2.0 * zInf * zInf * pMax * a2 * a2), zInf * yNorm2 * a2 * ratio * ratio};
}

/// Tikhonov constants for a specific pair (P, P̃).
inline TikhonovConstants tikhonov_instance_constants(double yNorm2, double zInf, const SpdMatrix& p,
                                                     const SpdMatrix& pt, const MeasurementModel& model)
{
    const double a2 = model.norm2();
    return {p.pMax() * a2 * yNorm2 * (1.0 + 2.0 * zInf * zInf * pt.pMax() * a2 * a2),
            zInf * a2 * yNorm2 * p.cond() * pt.cond()};
}

/// Network-level constants from per-layer aggregates. outFactor multiplies
/// z∞ in κ: c₁ plus the bound on ‖U_K‖∞ divided by z∞.
inline AggregateConstants compose_network(const std::vector<LayerAggregate>& layers, const TikhonovConstants& tc,
                                          double zInf, double outFactor)
{
    if (layers.empty()) throw InvalidArgument("compose_network: K must be >= 1");
    const std::size_t K = layers.size();
    const LogReal c1(tc.c1), c2(tc.c2);
    // suffix[k] = ∏_{ℓ=k+1}^{K} (r̂_{ℓ,1} + r̂_{ℓ,2} c₁), with 0-based k.
    std::vector<LogReal> suffix(K, LogReal::one());
    for (std::size_t k = K - 1; k-- > 0;)
        suffix[k] = suffix[k + 1] * (layers[k + 1].rHat1 + layers[k + 1].rHat2 * c1);

    AggregateConstants a;
    a.rHat1 = layers[0].rHat1;
    a.rHat2 = layers[0].rHat2;
    a.rHat3 = layers[0].rHat3;
    a.c1 = tc.c1;
    a.c2 = tc.c2;
    a.outFactor = outFactor;
    LogReal sum;
    for (std::size_t k = 0; k < K; ++k) sum += layers[k].rHat2 * suffix[k];
    a.cHat1 = c2 * sum;

    const LogReal front = LogReal(zInf) * LogReal(outFactor);
    a.kappa = front * a.cHat1 + LogReal(zInf) * c2;
    a.cHat2.resize(K);
    a.kappaKdj.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        for (const auto& row : layers[k].rHat3) {
            std::vector<LogReal> c, kk;
            for (LogReal r : row) {
                c.push_back(r * suffix[k]);
                kk.push_back(front * c.back());
            }
            a.cHat2[k].push_back(std::move(c));
            a.kappaKdj[k].push_back(std::move(kk));
        }
    }
    return a;
}

/// Worst-case constants over the hypothesis class for data with ‖y‖₂ ≤ yMax.
inline AggregateConstants network_constants(const NetworkConfig& cfg, const MeasurementModel& model, double yMax)
{
    cfg.validate();
    const StepConstants s = step_constants(cfg, model, yMax);
    const TikhonovConstants tc = tikhonov_constants(yMax, cfg.bounds.zInf, cfg.spectrum.pMax, cfg.spectrum.pMin, model);
    const std::vector<LayerAggregate> layers(static_cast<std::size_t>(cfg.K), aggregate_step(s, cfg.J));
    AggregateConstants a = compose_network(layers, tc, cfg.bounds.zInf, tc.c1 + cfg.spectrum.pMax * yMax * model.normInf());
    a.step = s;
    return a;
}

/// Constants for one measurement y and covariances (P, P̃), with the step
/// constants taken at y_max = ‖y‖₂.
inline AggregateConstants instance_network_constants(const NetworkConfig& cfg, const MeasurementModel& model,
                                                     const Vector& y, const SpdMatrix& p, const SpdMatrix& pt)
{
    cfg.validate();
    const double yn = y.norm();
    const StepConstants s = step_constants(cfg, model, yn);
    const TikhonovConstants tc = tikhonov_instance_constants(yn, cfg.bounds.zInf, p, pt, model);
    const std::vector<LayerAggregate> layers(static_cast<std::size_t>(cfg.K), aggregate_step(s, cfg.J));
    const double yInf = y.size() ? y.cwiseAbs().maxCoeff() : 0.0;
    AggregateConstants a = compose_network(layers, tc, cfg.bounds.zInf, tc.c1 + p.pMax() * model.normInf() * yInf);
    a.step = s;
    return a;
}

struct FcLipschitz {
    double inputCoeff = 0.0;
    std::vector<double> weightCoeffs; // indexed by t − 1
};

/// Lipschitz coefficients of a T-layer fully connected network with
/// τ-Lipschitz activation and layer norms bounded by ϖ_t.
inline FcLipschitz fc_lipschitz(const std::vector<double>& weightNorms, double tau, double xNorm)
{
    if (weightNorms.empty()) throw InvalidArgument("fc_lipschitz: need T >= 1");
    const int T = static_cast<int>(weightNorms.size());
    FcLipschitz out;
    double prod = 1.0;
    for (double w : weightNorms) prod *= w;
    out.inputCoeff = std::pow(tau, T - 1) * prod;
    for (int t = 1; t <= T; ++t) {
        double others = 1.0;
        for (int s = 1; s <= T; ++s)
            if (s != t) others *= weightNorms[static_cast<std::size_t>(s - 1)];
        out.weightCoeffs.push_back(std::pow(tau, T - t) * others * xNorm);
    }
    return out;
}

} // namespace cgbound
