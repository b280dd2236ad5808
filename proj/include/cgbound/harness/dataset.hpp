#pragma once

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"
#include "cgbound/core/parallel.hpp"
#include "cgbound/core/random.hpp"
#include "cgbound/core/types.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace cgbound {

/// Synthetic compound-Gaussian data: c = z⊙u with z = clamp(exp χ, a, b),
/// χ ~ N(0, I), u ~ N(0, Σ_u), and y = Ac + σν.
struct CgDataSpec {
    MeasurementModel model;
    SpdMatrix sigmaU;
    double a = 1.0;
    double b = std::exp(3.0);
    double cMax = 1.0;
    std::int64_t Ns = 64;
    std::uint64_t seed = 1;

    void validate() const
    {
        if (Ns < 1) throw InvalidArgument("dataset: Ns must be >= 1");
        if (!(a > 0.0) || !(a <= b)) throw InvalidArgument("dataset: need 0 < a <= b");
        if (!(cMax > 0.0)) throw InvalidArgument("dataset: cMax must be positive");
        if (sigmaU.n() != model.n()) throw ShapeError("dataset: Sigma_u must be n x n");
    }
};

struct CgSample {
    Vector y;
    Vector c;
    Vector z;
    Vector u;
};

/// Sample i of the stream (seed, i). Oversized c are pulled back onto the
/// c_max sphere by shrinking u alone, which keeps z inside [a, b].
inline CgSample draw_cg_sample(const CgDataSpec& spec, const Eigen::MatrixXd& sigmaChol, std::uint64_t i)
{
    Rng rng = make_stream(spec.seed, i);
    const Eigen::Index n = spec.model.n();
    CgSample s;
    s.z = gaussian_vector(rng, n).array().exp().cwiseMax(spec.a).cwiseMin(spec.b).matrix();
    s.u = sigmaChol * gaussian_vector(rng, n);
    s.c = s.z.cwiseProduct(s.u);
    const double norm = s.c.norm();
    if (norm > spec.cMax) {
        const double shrink = spec.cMax / norm;
        s.u *= shrink;
        s.c = s.z.cwiseProduct(s.u);
    }
    s.y = spec.model.A() * s.c;
    if (spec.model.sigma() > 0.0) s.y += gaussian_vector(rng, spec.model.m(), spec.model.sigma());
    return s;
}

inline Eigen::MatrixXd covariance_factor(const SpdMatrix& s)
{
    Eigen::LLT<Eigen::MatrixXd> llt(s.P());
    if (llt.info() != Eigen::Success) throw NumericalError("dataset: Sigma_u is not positive definite");
    return llt.matrixL();
}

/// Deterministic in spec.seed and independent of the worker count.
inline std::vector<CgSample> generate_cg_dataset(const CgDataSpec& spec, unsigned workers = 0)
{
    spec.validate();
    const Eigen::MatrixXd l = covariance_factor(spec.sigmaU);
    std::vector<CgSample> out(static_cast<std::size_t>(spec.Ns));
    parallel_for(out.size(), workers, [&](std::size_t i) { out[i] = draw_cg_sample(spec, l, i); });
    return out;
}

} // namespace cgbound
