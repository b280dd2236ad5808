#pragma once

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"

#include <cmath>
#include <cstdint>

namespace cgbound {

/// Number of free entries of the covariance family.
inline std::int64_t dim_cov(CovStructure s, std::int64_t n)
{
    if (n < 1) throw InvalidArgument("dim_cov: n must be >= 1");
    switch (s) {
    case CovStructure::ScaledIdentity: return 1;
    case CovStructure::Diagonal: return n;
    case CovStructure::Tridiagonal: return 2 * n - 1;
    case CovStructure::Full: return n * (n + 1) / 2;
    }
    throw InvalidArgument("dim_cov: unknown structure");
}

/// ln of the volumetric covering bound (1 + 2ω/ε)^α for an α-dimensional
/// ball of radius ω.
inline double covering_log_bound(double omega, double alpha, double eps)
{
    if (!(eps > 0.0)) throw InvalidArgument("covering_log_bound: eps must be positive");
    if (!(omega >= 0.0) || !(alpha >= 0.0)) throw InvalidArgument("covering_log_bound: need omega, alpha >= 0");
    if (alpha == 0.0) return 0.0;
    return alpha * std::log1p(2.0 * omega / eps);
}

/// β·√(ln(e(1 + ν/β))), an upper bound on ∫₀^β √(ln(1 + ν/ε)) dε.
inline double dudley_closed_form(double beta, double nu)
{
    if (!(beta > 0.0)) throw InvalidArgument("dudley_closed_form: beta must be positive");
    if (!(nu >= 0.0)) throw InvalidArgument("dudley_closed_form: nu must be nonnegative");
    return beta * std::sqrt(1.0 + std::log1p(nu / beta));
}

} // namespace cgbound
