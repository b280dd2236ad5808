#pragma once

#include "cgbound/core/errors.hpp"
#include "cgbound/core/linalg.hpp"

#include <cmath>
#include <string>

namespace cgbound {

/// y = A(z ⊙ u) + ν with ν ~ N(0, σ² I). Operator norms are cached at
/// construction; the matrix is immutable afterwards.
class MeasurementModel {
public:
    MeasurementModel() = default;

    explicit MeasurementModel(Matrix a, double sigma = 0.0)
        : a_(std::move(a)), sigma_(sigma)
    {
        if (a_.rows() < 1 || a_.cols() < 1)
            throw ShapeError("measurement matrix must be at least 1x1");
        if (!(sigma_ >= 0.0) || !std::isfinite(sigma_))
            throw InvalidArgument("noise level sigma must be finite and nonnegative");
        if (!a_.allFinite())
            throw InvalidArgument("measurement matrix has non-finite entries");
        norm2_ = spectral_norm(a_);
        normInf_ = inf_norm(a_);
    }

    const Matrix& A() const noexcept { return a_; }
    double sigma() const noexcept { return sigma_; }
    double norm2() const noexcept { return norm2_; }
    double normInf() const noexcept { return normInf_; }
    Eigen::Index m() const noexcept { return a_.rows(); }
    Eigen::Index n() const noexcept { return a_.cols(); }

private:
    Matrix a_;
    double sigma_ = 0.0;
    double norm2_ = 0.0;
    double normInf_ = 0.0;
};

/// Signal-side bounds: ‖c‖₂ ≤ cMax, ‖z‖∞ ≤ zInf, gradient ball radius ξ and
/// the scale clamp interval [a, b].
struct SignalBounds {
    double cMax = 1.0;
    double zInf = std::exp(3.0);
    double xi = 1.0;
    double a = 1.0;
    double b = std::exp(3.0);

    void validate() const
    {
        if (!(cMax > 0.0)) throw InvalidArgument("cMax must be positive");
        if (!(zInf > 0.0)) throw InvalidArgument("zInf must be positive");
        if (!(xi > 0.0)) throw InvalidArgument("xi must be positive");
        if (!(a <= b)) throw InvalidArgument("scale interval requires a <= b");
    }
};

} // namespace cgbound
