#pragma once

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"
#include "cgbound/core/linalg.hpp"
#include "cgbound/core/types.hpp"

#include <Eigen/Cholesky>

namespace cgbound {

enum class TikhonovPath { Auto, Primal, Woodbury };

namespace detail {

inline void check_tikhonov_shapes(const MeasurementModel& model, const Vector& z, const Vector& y,
                                  const SpdMatrix& p)
{
    require_shape(z.size() == model.n(), "tikhonov: dim(z) must equal n");
    require_shape(y.size() == model.m(), "tikhonov: dim(y) must equal m");
    require_shape(p.n() == model.n(), "tikhonov: P must be n x n");
}

template <class M>
Vector spd_solve(const M& lhs, const Vector& rhs, const char* what)
{
    Eigen::LLT<Matrix> llt(lhs);
    if (llt.info() != Eigen::Success) throw NumericalError(std::string(what) + ": Cholesky failed");
    Vector x = llt.solve(rhs);
    if (!x.allFinite()) throw NumericalError(std::string(what) + ": non-finite solution");
    return x;
}

} // namespace detail

/// (A_zᵀA_z + P⁻¹)⁻¹ A_zᵀ y via an n x n solve.
inline Vector tikhonov_primal(const MeasurementModel& model, const Vector& z, const Vector& y,
                              const SpdMatrix& p)
{
    detail::check_tikhonov_shapes(model, z, y, p);
    const Matrix az = scale_columns(model.A(), z);
    Matrix lhs = az.transpose() * az + p.inverse();
    lhs = 0.5 * (lhs + lhs.transpose());
    return detail::spd_solve(lhs, az.transpose() * y, "tikhonov_primal");
}

/// P A_zᵀ (I + A_z P A_zᵀ)⁻¹ y via an m x m solve.
inline Vector tikhonov_woodbury(const MeasurementModel& model, const Vector& z, const Vector& y,
                                const SpdMatrix& p)
{
    detail::check_tikhonov_shapes(model, z, y, p);
    const Matrix az = scale_columns(model.A(), z);
    const Matrix pat = p.P() * az.transpose();
    Matrix lhs = Matrix::Identity(model.m(), model.m()) + az * pat;
    lhs = 0.5 * (lhs + lhs.transpose());
    return pat * detail::spd_solve(lhs, y, "tikhonov_woodbury");
}

/// Tikhonov solution T_y(z; P). Auto picks Woodbury when m < n.
inline Vector tikhonov_solve(const MeasurementModel& model, const Vector& z, const Vector& y,
                             const SpdMatrix& p, TikhonovPath path = TikhonovPath::Auto)
{
    if (path == TikhonovPath::Auto)
        path = model.m() < model.n() ? TikhonovPath::Woodbury : TikhonovPath::Primal;
    return path == TikhonovPath::Woodbury ? tikhonov_woodbury(model, z, y, p)
                                          : tikhonov_primal(model, z, y, p);
}

} // namespace cgbound
