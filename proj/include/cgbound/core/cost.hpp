#pragma once

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"
#include "cgbound/core/types.hpp"

#include <functional>

namespace cgbound {

using Regularizer = std::function<double(const Vector&)>;

/// F(u, z) = ½‖y − A(z⊙u)‖₂² + ½ uᵀP⁻¹u + R(z). An empty R counts as zero.
inline double cost_eval(const Vector& u, const Vector& z, const Vector& y, const MeasurementModel& model,
                        const SpdMatrix& p, const Regularizer& reg = {})
{
    detail::require_shape(u.size() == model.n() && z.size() == model.n(), "cost_eval: dim(u), dim(z) must equal n");
    detail::require_shape(y.size() == model.m(), "cost_eval: dim(y) must equal m");
    detail::require_shape(p.n() == model.n(), "cost_eval: P must be n x n");
    const Vector r = y - model.A() * z.cwiseProduct(u);
    double f = 0.5 * r.squaredNorm() + 0.5 * u.dot(p.inverse() * u);
    if (reg) f += reg(z);
    return f;
}

/// R(z) = (μ/2)‖ln z‖₂², the regularizer whose gradient is μ·ln(z)/z.
inline Regularizer log_prior_regularizer(double mu)
{
    return [mu](const Vector& z) {
        if ((z.array() <= 0.0).any()) throw DomainError("log prior: nonpositive scale");
        return 0.5 * mu * z.array().log().square().sum();
    };
}

} // namespace cgbound
