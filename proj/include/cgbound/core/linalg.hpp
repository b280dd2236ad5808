#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace cgbound {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Largest singular value. Dense SVD; intended for the desk-scale sizes used
/// here (n <= 64), where it is exact to working precision.
inline double spectral_norm(const Matrix& m)
{
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1 || m.cols() == 1) return m.norm();
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

/// Operator norm induced by the vector infinity norm: max absolute row sum.
inline double inf_norm(const Matrix& m)
{
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Operator norm induced by the vector 1-norm: max absolute column sum.
inline double one_norm(const Matrix& m)
{
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

inline double max_abs(const Vector& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

/// max_ij |M_ij - M_ji|
inline double asymmetry(const Matrix& m)
{
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

/// A_z = A Diag(z), formed by column scaling.
inline Matrix scale_columns(const Matrix& a, const Vector& z)
{
    return a * z.asDiagonal();
}

} // namespace cgbound
