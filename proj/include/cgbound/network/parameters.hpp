#pragma once

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"
#include "cgbound/core/random.hpp"
#include "cgbound/network/config.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace cgbound {

/// Parameters θ_{k,1..D}^{(j)} of one scale update.
/// CG-Net uses B (d = 1) and mu (d = 2); DR-CG-Net uses W[0..Lc-1]
/// (d = 1..Lc) and delta (d = Lc+1).
struct StepParams {
    Matrix B;
    double mu = 0.0;
    std::vector<Matrix> W;
    double delta = 0.0;
};

struct ParameterSet {
    SpdMatrix P;
    std::vector<std::vector<StepParams>> theta; // [k][j]
};

/// ‖θ_d − θ̃_d‖_(d): spectral norm for matrix blocks, |·| for scalars.
inline double block_distance(const StepParams& a, const StepParams& b, int d, const NetworkConfig& cfg)
{
    if (cfg.variant == Variant::CgNet) {
        if (d == 1) return spectral_norm(a.B - b.B);
        if (d == 2) return std::abs(a.mu - b.mu);
    } else {
        if (d >= 1 && d <= cfg.Lc) return spectral_norm(a.W[d - 1] - b.W[d - 1]);
        if (d == cfg.Lc + 1) return std::abs(a.delta - b.delta);
    }
    throw InvalidArgument("block_distance: block index out of range");
}

/// ‖θ_d‖_(d)
inline double block_norm(const StepParams& a, int d, const NetworkConfig& cfg)
{
    if (cfg.variant == Variant::CgNet) {
        if (d == 1) return spectral_norm(a.B);
        if (d == 2) return std::abs(a.mu);
    } else {
        if (d >= 1 && d <= cfg.Lc) return spectral_norm(a.W[d - 1]);
        if (d == cfg.Lc + 1) return std::abs(a.delta);
    }
    throw InvalidArgument("block_norm: block index out of range");
}

/// ω_d
inline double block_radius(int d, const NetworkConfig& cfg)
{
    if (cfg.variant == Variant::CgNet) {
        if (d == 1) return cfg.spectrum.pMax;
        if (d == 2) return cfg.mu;
    } else {
        if (d >= 1 && d <= cfg.Lc) return cfg.weightBounds[d - 1];
        if (d == cfg.Lc + 1) return cfg.delta;
    }
    throw InvalidArgument("block_radius: block index out of range");
}

/// Every violated constraint, as human-readable strings. Empty means valid.
inline std::vector<std::string> parameter_violations(const ParameterSet& ps, const NetworkConfig& cfg,
                                                     double rtol = 1e-10)
{
    std::vector<std::string> out;
    const auto n = static_cast<Eigen::Index>(cfg.n);
    if (ps.P.n() != n) out.push_back("P has wrong dimension");
    else if (!ps.P.in_set(cfg.spectrum.pMin, cfg.spectrum.pMax, rtol)) out.push_back("P outside the spectrum bounds");
    if (static_cast<int>(ps.theta.size()) != cfg.K) {
        out.push_back("theta must have K layers");
        return out;
    }
    for (int k = 0; k < cfg.K; ++k) {
        if (static_cast<int>(ps.theta[k].size()) != cfg.J) {
            out.push_back("theta[" + std::to_string(k) + "] must have J steps");
            continue;
        }
        for (int j = 0; j < cfg.J; ++j) {
            const StepParams& s = ps.theta[k][j];
            const std::string tag = "theta[" + std::to_string(k) + "][" + std::to_string(j) + "]";
            if (cfg.variant == Variant::CgNet) {
                if (s.B.rows() != n || s.B.cols() != n) {
                    out.push_back(tag + ".B has wrong shape");
                    continue;
                }
                if (asymmetry(s.B) > 1e-9 * std::max(1.0, s.B.cwiseAbs().maxCoeff()))
                    out.push_back(tag + ".B is not symmetric");
            } else {
                if (static_cast<int>(s.W.size()) != cfg.Lc) {
                    out.push_back(tag + ".W must have Lc matrices");
                    continue;
                }
                bool shapes = true;
                for (int l = 1; l <= cfg.Lc; ++l) {
                    const Matrix& w = s.W[l - 1];
                    if (w.rows() != n * cfg.filters[l] || w.cols() != n * cfg.filters[l - 1]) {
                        out.push_back(tag + ".W[" + std::to_string(l) + "] has wrong shape");
                        shapes = false;
                    }
                }
                if (!shapes) continue;
            }
            for (int d = 1; d <= cfg.D(); ++d)
                if (block_norm(s, d, cfg) > block_radius(d, cfg) * (1.0 + rtol))
                    out.push_back(tag + " block " + std::to_string(d) + " outside its ball");
        }
    }
    return out;
}

inline bool parameters_valid(const ParameterSet& ps, const NetworkConfig& cfg)
{
    return parameter_violations(ps, cfg).empty();
}

namespace detail {

/// Random matrix with the sparsity of `s`, remapped to spectrum [pMin, top].
inline Matrix sample_structured_spd(Rng& rng, CovStructure s, Eigen::Index n, double pMin, double top)
{
    switch (s) {
    case CovStructure::ScaledIdentity:
        return top * Matrix::Identity(n, n);
    case CovStructure::Diagonal: {
        if (n == 1) return top * Matrix::Identity(1, 1);
        return remap_spectrum(uniform_vector(rng, n, 0.0, 1.0).asDiagonal(), pMin, top);
    }
    case CovStructure::Tridiagonal: {
        if (n == 1) return top * Matrix::Identity(1, 1);
        Matrix lt = Matrix::Zero(n, n);
        lt.diagonal() = gaussian_vector(rng, n);
        for (Eigen::Index i = 0; i + 1 < n; ++i) lt(i + 1, i) = uniform(rng, -1.0, 1.0);
        return remap_spectrum(lt * lt.transpose(), pMin, top);
    }
    case CovStructure::Full: {
        if (n == 1) return top * Matrix::Identity(1, 1);
        const Matrix g = gaussian_matrix(rng, n, n);
        return remap_spectrum(g * g.transpose(), pMin, top);
    }
    }
    throw InvalidArgument("unknown covariance structure");
}

/// Spectral top drawn uniformly from [pMin, pMax] (uniform radius within the set).
inline double sample_top(Rng& rng, const SpectrumBounds& sb)
{
    return sb.pMin + uniform(rng, 0.0, 1.0) * (sb.pMax - sb.pMin);
}

inline Matrix sample_ball_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double radius)
{
    const Matrix g = gaussian_matrix(rng, rows, cols);
    const double nrm = spectral_norm(g);
    if (nrm == 0.0) return Matrix::Zero(rows, cols);
    return g * (radius * uniform(rng, 0.0, 1.0) / nrm);
}

} // namespace detail

inline SpdMatrix sample_covariance(Rng& rng, CovStructure s, Eigen::Index n, const SpectrumBounds& sb)
{
    return SpdMatrix(detail::sample_structured_spd(rng, s, n, sb.pMin, detail::sample_top(rng, sb)));
}

inline StepParams sample_step(Rng& rng, const NetworkConfig& cfg)
{
    const auto n = static_cast<Eigen::Index>(cfg.n);
    StepParams s;
    if (cfg.variant == Variant::CgNet) {
        s.B = detail::sample_structured_spd(rng, CovStructure::Full, n, cfg.spectrum.pMin,
                                            detail::sample_top(rng, cfg.spectrum));
        s.mu = uniform(rng, -cfg.mu, cfg.mu);
    } else {
        for (int l = 1; l <= cfg.Lc; ++l)
            s.W.push_back(detail::sample_ball_matrix(rng, n * cfg.filters[l], n * cfg.filters[l - 1],
                                                     cfg.weightBounds[l - 1]));
        s.delta = uniform(rng, -cfg.delta, cfg.delta);
    }
    return s;
}

inline ParameterSet sample_parameters(const NetworkConfig& cfg, Rng& rng)
{
    cfg.validate();
    ParameterSet ps;
    ps.P = sample_covariance(rng, cfg.covStructure, cfg.n, cfg.spectrum);
    ps.theta.assign(cfg.K, std::vector<StepParams>(cfg.J));
    for (int k = 0; k < cfg.K; ++k)
        for (int j = 0; j < cfg.J; ++j) ps.theta[k][j] = sample_step(rng, cfg);
    return ps;
}

/// Deterministic in (cfg, seed).
inline ParameterSet sample_parameters(const NetworkConfig& cfg, std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0);
    return sample_parameters(cfg, rng);
}

/// (1 − t)·a + t·b blockwise. Every admissible set here is convex, so the
/// result stays admissible and keeps the covariance structure.
inline StepParams blend(const StepParams& a, const StepParams& b, double t)
{
    StepParams s;
    if (a.B.size() > 0) s.B = (1.0 - t) * a.B + t * b.B;
    s.mu = (1.0 - t) * a.mu + t * b.mu;
    for (std::size_t l = 0; l < a.W.size(); ++l) s.W.push_back((1.0 - t) * a.W[l] + t * b.W[l]);
    s.delta = (1.0 - t) * a.delta + t * b.delta;
    return s;
}

inline ParameterSet blend(const ParameterSet& a, const ParameterSet& b, double t)
{
    ParameterSet out;
    out.P = SpdMatrix((1.0 - t) * a.P.P() + t * b.P.P());
    out.theta = a.theta;
    for (std::size_t k = 0; k < a.theta.size(); ++k)
        for (std::size_t j = 0; j < a.theta[k].size(); ++j) out.theta[k][j] = blend(a.theta[k][j], b.theta[k][j], t);
    return out;
}

} // namespace cgbound
