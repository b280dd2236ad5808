#pragma once

#include "cgbound/core/projections.hpp"
#include "cgbound/core/tikhonov.hpp"
#include "cgbound/network/config.hpp"
#include "cgbound/network/parameters.hpp"
#include "cgbound/network/scale_updates.hpp"

#include <vector>

namespace cgbound {

struct ForwardTrace {
    Vector z0;                           // 𝒵₀
    std::vector<std::vector<Vector>> zk; // zk[k][j] = Z_{k+1}^{(j+1)}
    std::vector<Vector> uk;              // uk[0] = u₀, uk[k] = U_k
    Vector output;                       // ρ_{c_max}(Z_K ⊙ U_K)
};

namespace detail {

inline void check_forward_inputs(const Vector& y, const MeasurementModel& model, const ParameterSet& theta,
                                 const NetworkConfig& cfg)
{
    cfg.validate();
    require_shape(model.n() == cfg.n, "forward: model.n must equal config.n");
    require_shape(y.size() == model.m(), "forward: dim(y) must equal m");
    require_shape(static_cast<int>(theta.theta.size()) == cfg.K, "forward: theta must have K layers");
    for (const auto& layer : theta.theta)
        require_shape(static_cast<int>(layer.size()) == cfg.J, "forward: each layer needs J steps");
    require_shape(theta.P.n() == cfg.n, "forward: P must be n x n");
}

} // namespace detail

/// 𝒵₀ = 𝒫_{0,b}(Âᵀy), Â = A/‖A‖₂, with b = z∞.
inline Vector initial_scale(const Vector& y, const MeasurementModel& model, const SignalBounds& bounds)
{
    if (model.norm2() == 0.0) return Vector::Zero(model.n());
    return mrelu(model.A().transpose() * y / model.norm2(), 0.0, bounds.zInf);
}

/// One scale update Z = 𝒫_{0,z∞}(g(z, u)).
inline Vector scale_update(const Vector& z, const Vector& u, const Vector& y, const MeasurementModel& model,
                           const StepParams& s, const NetworkConfig& cfg)
{
    const Vector g = cfg.variant == Variant::CgNet
        ? cgnet_scale_step(z, u, y, model, s.B, s.mu, cfg.bounds)
        : drcgnet_scale_step(z, u, y, model, s.delta, s.W, cfg.bounds);
    return mrelu(g, 0.0, cfg.bounds.zInf);
}

/// Complete scale mapping 𝒵_k^{(J)}: J updates with u held fixed.
inline Vector scale_mapping(const Vector& z, const Vector& u, const Vector& y, const MeasurementModel& model,
                            const std::vector<StepParams>& layer, const NetworkConfig& cfg)
{
    Vector x = z;
    for (const StepParams& s : layer) x = scale_update(x, u, y, model, s, cfg);
    return x;
}

inline ForwardTrace forward(const Vector& y, const MeasurementModel& model, const ParameterSet& theta,
                            const NetworkConfig& cfg)
{
    detail::check_forward_inputs(y, model, theta, cfg);
    ForwardTrace tr;
    tr.z0 = initial_scale(y, model, cfg.bounds);
    tr.uk.push_back(tikhonov_solve(model, tr.z0, y, theta.P));
    Vector z = tr.z0;
    tr.zk.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        const Vector& u = tr.uk.back();
        for (int j = 0; j < cfg.J; ++j) {
            z = scale_update(z, u, y, model, theta.theta[k][j], cfg);
            tr.zk[k].push_back(z);
        }
        tr.uk.push_back(tikhonov_solve(model, z, y, theta.P));
    }
    tr.output = ball_project(z.cwiseProduct(tr.uk.back()), cfg.bounds.cMax);
    return tr;
}

inline Vector forward_output(const Vector& y, const MeasurementModel& model, const ParameterSet& theta,
                             const NetworkConfig& cfg)
{
    return forward(y, model, theta, cfg).output;
}

enum class U0Mode { Tikhonov, Zero };

/// Generalized compound Gaussian least squares, run as an iterative solver.
/// With U0Mode::Tikhonov and clampOutput this reproduces forward().output.
inline Vector gcgls_run(const Vector& y, const MeasurementModel& model, const NetworkConfig& cfg,
                        const ParameterSet& theta, U0Mode u0Mode = U0Mode::Tikhonov, bool clampOutput = true)
{
    if (cfg.K < 1) throw InvalidArgument("gcgls_run: K must be >= 1");
    detail::check_forward_inputs(y, model, theta, cfg);

    Vector z = initial_scale(y, model, cfg.bounds); // z_1^{(0)}
    Vector u = u0Mode == U0Mode::Tikhonov ? tikhonov_solve(model, z, y, theta.P) : Vector::Zero(model.n());
    for (int k = 1; k <= cfg.K; ++k) {
        for (int j = 1; j <= cfg.J; ++j) z = scale_update(z, u, y, model, theta.theta[k - 1][j - 1], cfg);
        u = tikhonov_solve(model, z, y, theta.P);
    }
    Vector c = z.cwiseProduct(u);
    return clampOutput ? ball_project(c, cfg.bounds.cMax) : c;
}

} // namespace cgbound
