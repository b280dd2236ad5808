#pragma once

#include "cgbound/core/errors.hpp"
#include "cgbound/core/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace cgbound {

enum class CovStructure { ScaledIdentity, Diagonal, Tridiagonal, Full };

inline std::string to_string(CovStructure s)
{
    switch (s) {
    case CovStructure::ScaledIdentity: return "const";
    case CovStructure::Diagonal: return "diag";
    case CovStructure::Tridiagonal: return "tri";
    case CovStructure::Full: return "full";
    }
    return "?";
}

inline CovStructure cov_structure_from_string(const std::string& s)
{
    if (s == "const" || s == "ScaledIdentity") return CovStructure::ScaledIdentity;
    if (s == "diag" || s == "Diagonal") return CovStructure::Diagonal;
    if (s == "tri" || s == "Tridiagonal") return CovStructure::Tridiagonal;
    if (s == "full" || s == "Full") return CovStructure::Full;
    throw InvalidArgument("unknown covariance structure '" + s + "'");
}

/// Learnable parameterization of P_u.
///   ScaledIdentity: lambda (size 1)
///   Diagonal:       lambda (size n)
///   Tridiagonal:    lambda (size n, diagonal of L_tri), lambda2 (size n-1, subdiagonal)
///   Full:           L (n x n, only the lower triangle is read)
struct CovarianceSpec {
    CovStructure structure = CovStructure::ScaledIdentity;
    Eigen::Index n = 1;
    Vector lambda;
    Vector lambda2;
    Matrix L;
    double epsilon = 1e-4;
};

/// Symmetric positive definite matrix with its spectral data cached.
class SpdMatrix {
public:
    SpdMatrix() = default;

    explicit SpdMatrix(const Matrix& p)
    {
        if (p.rows() != p.cols() || p.rows() < 1)
            throw ShapeError("SpdMatrix: matrix must be square and nonempty");
        if (!p.allFinite()) throw InvalidArgument("SpdMatrix: non-finite entries");
        const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
        if (asymmetry(p) > 1e-9 * scale)
            throw InvalidArgument("SpdMatrix: matrix is not symmetric");
        p_ = 0.5 * (p + p.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(p_);
        if (es.info() != Eigen::Success)
            throw NumericalError("SpdMatrix: eigendecomposition failed");
        const Vector& ev = es.eigenvalues();
        if (!(ev(0) > 0.0)) throw InvalidArgument("SpdMatrix: matrix is not positive definite");
        lambdaMin_ = ev(0);
        pMax_ = ev(ev.size() - 1);
        pMinInv_ = 1.0 / lambdaMin_;
        inv_ = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
        inv_ = 0.5 * (inv_ + inv_.transpose());
    }

    const Matrix& P() const noexcept { return p_; }
    const Matrix& inverse() const noexcept { return inv_; }
    Eigen::Index n() const noexcept { return p_.rows(); }
    /// ‖P‖₂
    double pMax() const noexcept { return pMax_; }
    /// ‖P⁻¹‖₂
    double pMinInv() const noexcept { return pMinInv_; }
    double lambdaMin() const noexcept { return lambdaMin_; }
    double cond() const noexcept { return pMax_ / lambdaMin_; }

    /// Membership in {P SPD : ‖P‖₂ ≤ pMax, ‖P⁻¹‖₂ ≤ 1/pMin}, with relative slack.
    /// Eigenvalue error scales with ‖P‖₂, so the lower edge also gets rtol·‖P‖₂.
    bool in_set(double pMin, double pMax, double rtol = 1e-10) const noexcept
    {
        return pMax_ <= pMax * (1.0 + rtol) && lambdaMin_ >= pMin * (1.0 - rtol) - rtol * pMax_;
    }

private:
    Matrix p_;
    Matrix inv_;
    double pMax_ = 0.0;
    double pMinInv_ = 0.0;
    double lambdaMin_ = 0.0;
};

inline Matrix materialize_covariance(const CovarianceSpec& spec)
{
    const Eigen::Index n = spec.n;
    if (n < 1) throw ShapeError("covariance: n must be >= 1");
    if (!(spec.epsilon > 0.0)) throw InvalidArgument("covariance: epsilon must be positive");
    const double eps = spec.epsilon;
    switch (spec.structure) {
    case CovStructure::ScaledIdentity:
        detail::require_shape(spec.lambda.size() == 1, "covariance: ScaledIdentity takes one lambda");
        return std::max(spec.lambda(0), eps) * Matrix::Identity(n, n);
    case CovStructure::Diagonal: {
        detail::require_shape(spec.lambda.size() == n, "covariance: Diagonal takes n lambdas");
        return spec.lambda.cwiseMax(eps).asDiagonal();
    }
    case CovStructure::Tridiagonal: {
        detail::require_shape(spec.lambda.size() == n, "covariance: Tridiagonal lambda1 must have n entries");
        detail::require_shape(spec.lambda2.size() == n - 1,
                              "covariance: Tridiagonal lambda2 must have n-1 entries");
        Matrix lt = Matrix::Zero(n, n);
        lt.diagonal() = spec.lambda;
        for (Eigen::Index i = 0; i + 1 < n; ++i) lt(i + 1, i) = spec.lambda2(i);
        return lt * lt.transpose() + eps * Matrix::Identity(n, n);
    }
    case CovStructure::Full: {
        detail::require_shape(spec.L.rows() == n && spec.L.cols() == n, "covariance: Full takes n x n L");
        Matrix l = spec.L.triangularView<Eigen::Lower>();
        return l * l.transpose() + eps * Matrix::Identity(n, n);
    }
    }
    throw InvalidArgument("covariance: unknown structure");
}

inline SpdMatrix build_covariance(const CovarianceSpec& spec)
{
    return SpdMatrix(materialize_covariance(spec));
}

/// Affine spectrum remap pMin·I + (S − λ_min I)(top − pMin)/(λ_max − λ_min).
/// Maps the spectrum of S onto [pMin, top] while keeping the sparsity pattern,
/// so tridiagonal stays tridiagonal. A flat spectrum maps to top·I.
inline Matrix remap_spectrum(const Matrix& s, double pMin, double top)
{
    if (!(pMin > 0.0) || !(top >= pMin))
        throw InvalidArgument("remap_spectrum: need 0 < pMin <= top");
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
    const Eigen::Index n = s.rows();
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) return top * Matrix::Identity(n, n);
    Matrix out = pMin * Matrix::Identity(n, n)
               + (s - lo * Matrix::Identity(n, n)) * ((top - pMin) / (hi - lo));
    return 0.5 * (out + out.transpose());
}

} // namespace cgbound
