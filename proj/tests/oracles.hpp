#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

/// ‖M‖₂ as sqrt(λ_max(MᵀM)), via the symmetric eigensolver rather than SVD.
inline double spectral_norm(const Eigen::MatrixXd& m)
{
    const Eigen::MatrixXd g = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Tikhonov solution by LU on the normal equations with an LU-inverted P.
inline Eigen::VectorXd tikhonov(const Eigen::MatrixXd& a, const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                                const Eigen::MatrixXd& p)
{
    Eigen::MatrixXd az(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) az.col(j) = a.col(j) * z(j);
    const Eigen::MatrixXd pinv = p.fullPivLu().inverse();
    return (az.transpose() * az + pinv).fullPivLu().solve(az.transpose() * y);
}

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb)
{
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of a smooth integrand on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10)
{
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return detail::adaptive(f, a, b, fa, fm, fb, detail::simpson(a, b, fa, fm, fb), tol, 50);
}

/// ∫₀^β √(ln(1 + ν/ε)) dε. The substitution ε = β t² removes the endpoint
/// singularity: the integrand becomes 2βt·√(ln(1 + ν/(βt²))), which is
/// continuous on [0, 1] and vanishes at t = 0.
inline double dudley_integral(double beta, double nu, double tol = 1e-10)
{
    auto g = [beta, nu](double t) {
        if (t <= 0.0) return 0.0;
        return 2.0 * beta * t * std::sqrt(std::log1p(nu / (beta * t * t)));
    };
    return integrate(g, 0.0, 1.0, tol);
}

/// Greedy ε-cover of a grid discretization of [lo, hi]^dim in the ℓ₂ norm.
/// Returns the number of centers used (an upper bound on the covering number
/// of the grid, which approximates the box from inside).
inline std::size_t greedy_cover_count(int dim, double lo, double hi, double eps, int gridPerAxis)
{
    std::vector<std::vector<double>> pts;
    std::vector<double> axis(static_cast<std::size_t>(gridPerAxis));
    for (int i = 0; i < gridPerAxis; ++i) axis[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (gridPerAxis - 1);
    if (dim == 1) {
        for (double x : axis) pts.push_back({x});
    } else {
        for (double x : axis)
            for (double y : axis) pts.push_back({x, y});
    }
    std::vector<bool> covered(pts.size(), false);
    std::size_t centers = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (covered[i]) continue;
        ++centers;
        for (std::size_t k = i; k < pts.size(); ++k) {
            double d2 = 0.0;
            for (int c = 0; c < dim; ++c) d2 += (pts[k][c] - pts[i][c]) * (pts[k][c] - pts[i][c]);
            if (d2 <= eps * eps) covered[k] = true;
        }
    }
    return centers;
}

} // namespace oracle
