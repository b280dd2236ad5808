#pragma once

#include "cgbound/core/errors.hpp"
#include "cgbound/core/linalg.hpp"
#include "cgbound/core/projections.hpp"
#include "cgbound/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cgbound {

/// A_uᵀ(A_u z − y), the z-gradient of the data-fidelity term.
inline Vector datafit_grad(const Vector& z, const Vector& u, const Vector& y, const MeasurementModel& model)
{
    detail::require_shape(z.size() == model.n() && u.size() == model.n(), "datafit_grad: dim(z), dim(u) must equal n");
    detail::require_shape(y.size() == model.m(), "datafit_grad: dim(y) must equal m");
    const Matrix au = scale_columns(model.A(), u);
    return au.transpose() * (au * z - y);
}

/// μ·[h⁻¹]'(z)⊙h⁻¹(z) for h = exp, i.e. μ·ln(z)/z.
inline Vector exp_prior_grad(const Vector& z, double mu)
{
    if (mu == 0.0) return Vector::Zero(z.size());
    if ((z.array() <= 0.0).any()) throw DomainError("prior gradient: ln(z) needs z > 0");
    return mu * (z.array().log() / z.array()).matrix();
}

/// ∇_z F(u, z; μ) = A_uᵀ(A_u z − y) + μ·ln(z)/z.
inline Vector grad_z_F(const Vector& z, const Vector& u, const Vector& y, const MeasurementModel& model, double mu)
{
    Vector g = datafit_grad(z, u, y, model);
    g += exp_prior_grad(z, mu);
    return g;
}

struct PriorConstants {
    double hMax = 0.0; // max |ln z / z| on [a, b]
    double tauH = 0.0; // max |(1 − ln z) / z²| on [a, b]
};

/// Bound and Lipschitz constant of ln(z)/z on [a, b], a > 0.
inline PriorConstants exp_prior_constants(double a, double b)
{
    if (!(a > 0.0) || !(a <= b)) throw InvalidArgument("exp_prior_constants: need 0 < a <= b");
    auto h = [](double z) { return std::abs(std::log(z) / z); };
    auto dh = [](double z) { return std::abs((1.0 - std::log(z)) / (z * z)); };
    PriorConstants c;
    c.hMax = std::max(h(a), h(b));
    c.tauH = std::max(dh(a), dh(b));
    // Interior extrema: ln z / z peaks at e, its derivative bottoms out at e^{3/2}.
    const double e1 = std::exp(1.0), e15 = std::exp(1.5);
    if (a < e1 && e1 < b) c.hMax = std::max(c.hMax, h(e1));
    if (a < e15 && e15 < b) c.tauH = std::max(c.tauH, dh(e15));
    return c;
}

/// Gradient used by the CG-Net update. The prior term is evaluated at
/// 𝒫_{a,b}(z): iterates entering a layer may sit outside [a, b] (the initial
/// estimate can contain zeros), and on [a, b] the term is bounded by h_max and
/// τ_h-Lipschitz. Inside [a, b] this is exactly grad_z_F.
inline Vector cgnet_gradient(const Vector& z, const Vector& u, const Vector& y, const MeasurementModel& model,
                             double mu, const SignalBounds& bounds)
{
    Vector g = datafit_grad(z, u, y, model);
    if (mu != 0.0) g += exp_prior_grad(mrelu(z, bounds.a, bounds.b), mu);
    return g;
}

/// g(z, u) = 𝒫_{a,b}(z − B ρ_ξ(∇_z F(u, z; μ))).
inline Vector cgnet_scale_step(const Vector& z, const Vector& u, const Vector& y, const MeasurementModel& model,
                               const Matrix& B, double mu, const SignalBounds& bounds)
{
    detail::require_shape(B.rows() == model.n() && B.cols() == model.n(), "cgnet_scale_step: B must be n x n");
    const Vector step = B * ball_project(cgnet_gradient(z, u, y, model, mu, bounds), bounds.xi);
    return mrelu(z - step, bounds.a, bounds.b);
}

/// 𝒱(z) = W_L ReLU(W_{L−1} ⋯ ReLU(W₁ z)); no activation after the last layer.
inline Vector subnet_forward(const std::vector<Matrix>& weights, const Vector& z)
{
    if (weights.empty()) throw ShapeError("subnet_forward: need at least one layer");
    Vector x = z;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].cols() != x.size()) throw ShapeError("subnet_forward: layer " + std::to_string(l + 1) + " shape mismatch");
        x = weights[l] * x;
        if (l + 1 < weights.size()) x = relu(x);
    }
    if (x.size() != z.size()) throw ShapeError("subnet_forward: output size must equal input size");
    return x;
}

/// g(z, u) = z − δ ρ_ξ(A_uᵀ(A_u z − y)) + 𝒱(z). The caller applies 𝒫_{0,z∞}.
inline Vector drcgnet_scale_step(const Vector& z, const Vector& u, const Vector& y, const MeasurementModel& model,
                                 double delta, const std::vector<Matrix>& weights, const SignalBounds& bounds)
{
    const Vector v = z - delta * ball_project(datafit_grad(z, u, y, model), bounds.xi);
    return v + subnet_forward(weights, z);
}

} // namespace cgbound
