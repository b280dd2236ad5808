#pragma once

#include "cgbound/core/errors.hpp"
#include "cgbound/core/json_io.hpp"
#include "cgbound/core/random.hpp"
#include "cgbound/core/types.hpp"
#include "cgbound/geb/bound.hpp"
#include "cgbound/network/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cgbound {

enum class ScalingAxis { N, KJ, KJLc, Ns };

inline std::string to_string(ScalingAxis a)
{
    switch (a) {
    case ScalingAxis::N: return "n";
    case ScalingAxis::KJ: return "KJ";
    case ScalingAxis::KJLc: return "KJLc";
    case ScalingAxis::Ns: return "Ns";
    }
    return "?";
}

inline ScalingAxis scaling_axis_from_string(const std::string& s)
{
    if (s == "n") return ScalingAxis::N;
    if (s == "KJ") return ScalingAxis::KJ;
    if (s == "KJLc") return ScalingAxis::KJLc;
    if (s == "Ns") return ScalingAxis::Ns;
    throw InvalidArgument("unknown sweep axis '" + s + "'");
}

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rSquared = 0.0;
};

/// Least-squares line through (ln x, ln y).
inline LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size()) throw ShapeError("fit_loglog: xs and ys differ in length");
    if (xs.size() < 2) throw InvalidArgument("fit_loglog: need at least two points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("fit_loglog: values must be positive");
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx, dy = std::log(ys[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw InvalidArgument("fit_loglog: x values are all equal");
    LogLogFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.rSquared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return f;
}

struct SweepSpec {
    ScalingAxis axis = ScalingAxis::KJ;
    std::vector<double> values;
    NetworkConfig base;
    /// Measurement rows; 0 means m = max(1, n/2).
    int m = 0;
    std::uint64_t seed = 1;
    std::int64_t Ns = 1000;
    double epsConf = 0.05;
    /// Empty means MAE at each point's n.
    std::optional<LossSpec> loss;
    YMaxMode yMaxMode = YMaxMode::Noiseless;
    double sigma = 0.0;
};

struct ScalingPoint {
    double axisValue = 0.0;
    int n = 0, m = 0, K = 0, J = 0, Lc = 0;
    std::int64_t Ns = 0;
    double yMax = 0.0;
    double term2 = 0.0;
    double term3 = 0.0;
    double total = 0.0;
    double correction = 1.0; // divided out of term2 before the fit
    double r = 0.0;          // ln y_max + ln‖A‖₂ + ln‖A‖∞
};

struct ScalingFit {
    double exponent = 0.0;
    double rSquared = 0.0;
    ScalingAxis sweepAxis = ScalingAxis::KJ;
    std::vector<ScalingPoint> points;
};

/// K·J split with K the largest divisor of s not above √s.
inline std::pair<int, int> split_kj(std::int64_t s)
{
    if (s < 1) throw InvalidArgument("split_kj: KJ must be >= 1");
    std::int64_t k = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(s))));
    while (k > 1 && s % k != 0) --k;
    return {static_cast<int>(k), static_cast<int>(s / k)};
}

/// Gaussian measurement matrix with N(0, 1/m) entries, fixed by (seed, n).
inline MeasurementModel sweep_model(std::uint64_t seed, int m, int n, double sigma)
{
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(n) * 1000003ULL + static_cast<std::uint64_t>(m));
    return MeasurementModel(gaussian_matrix(rng, m, n, 1.0 / std::sqrt(static_cast<double>(m))), sigma);
}

inline double r_diagnostic(double yMax, const MeasurementModel& model)
{
    return std::log(yMax) + std::log(model.norm2()) + std::log(model.normInf());
}

namespace detail {

inline bool is_integer(double v)
{
    return v >= 1.0 && std::floor(v) == v;
}

/// Config with Lc = lc, inner filters and kernels copied from the base.
inline NetworkConfig with_depth(NetworkConfig c, int lc)
{
    const int f = c.Lc > 1 ? c.filters[1] : 1;
    const int k = c.kernels.empty() ? 3 : c.kernels.front();
    const double w = c.weightBounds.empty() ? 1.0 : c.weightBounds.front();
    c.Lc = lc;
    c.filters.assign(static_cast<std::size_t>(lc + 1), f);
    c.filters.front() = 1;
    c.filters.back() = 1;
    c.kernels.assign(static_cast<std::size_t>(lc), k);
    c.weightBounds.assign(static_cast<std::size_t>(lc), w);
    return c;
}

} // namespace detail

inline ScalingPoint scaling_point(const SweepSpec& spec, double value)
{
    NetworkConfig cfg = spec.base;
    std::int64_t ns = spec.Ns;
    switch (spec.axis) {
    case ScalingAxis::N: cfg.n = static_cast<int>(value); break;
    case ScalingAxis::KJ: {
        const auto [k, j] = split_kj(static_cast<std::int64_t>(value));
        cfg.K = k;
        cfg.J = j;
        break;
    }
    case ScalingAxis::KJLc: {
        if (cfg.variant != Variant::DrCgNet) throw InvalidArgument("scaling: KJLc axis needs DR-CG-Net");
        const std::int64_t kj = static_cast<std::int64_t>(cfg.K) * cfg.J;
        const auto v = static_cast<std::int64_t>(value);
        if (v % kj != 0) throw InvalidArgument("scaling: KJLc values must be multiples of K*J");
        cfg = detail::with_depth(cfg, static_cast<int>(v / kj));
        break;
    }
    case ScalingAxis::Ns: ns = static_cast<std::int64_t>(value); break;
    }
    const int m = spec.m > 0 ? spec.m : std::max(1, cfg.n / 2);
    const MeasurementModel model = sweep_model(spec.seed, m, cfg.n, spec.sigma);
    const LossSpec loss = spec.loss ? *spec.loss : mae_loss(cfg.n, cfg.bounds.cMax);
    if (spec.yMaxMode == YMaxMode::Dataset) throw InvalidArgument("scaling: sweeps estimate y_max from the model");
    const double yMax = ymax_estimate(model, cfg.bounds.cMax, spec.yMaxMode);
    const BoundReport b = geb_bound(cfg, model, loss, ns, spec.epsConf, yMax);

    ScalingPoint p;
    p.axisValue = value;
    p.n = cfg.n;
    p.m = m;
    p.K = cfg.K;
    p.J = cfg.J;
    p.Lc = cfg.variant == Variant::DrCgNet ? cfg.Lc : 0;
    p.Ns = ns;
    p.yMax = yMax;
    p.term2 = b.term2;
    p.term3 = b.term3;
    p.total = b.total;
    if (spec.axis == ScalingAxis::N)
        p.correction = std::sqrt(std::log(static_cast<double>(cfg.n)));
    else if (spec.axis != ScalingAxis::Ns)
        p.correction = std::sqrt(std::log(static_cast<double>(m)) + std::log(static_cast<double>(cfg.n)));
    if (!(p.correction > 0.0)) p.correction = 1.0;
    p.r = yMax > 0.0 ? r_diagnostic(yMax, model) : -std::numeric_limits<double>::infinity();
    return p;
}

/// Slope of ln(term2 / correction) against ln(axis value).
inline ScalingFit scaling_fit(const SweepSpec& spec)
{
    if (spec.values.size() < 4) throw InvalidArgument("scaling_fit: sweep needs at least 4 points");
    for (double v : spec.values)
        if (!detail::is_integer(v)) throw InvalidArgument("scaling_fit: axis values must be positive integers");
    const auto [lo, hi] = std::minmax_element(spec.values.begin(), spec.values.end());
    if (*hi < 10.0 * *lo) throw InvalidArgument("scaling_fit: sweep must span at least one decade");
    if (spec.axis == ScalingAxis::N && *lo < 2.0) throw InvalidArgument("scaling_fit: n axis needs n >= 2");

    ScalingFit fit;
    fit.sweepAxis = spec.axis;
    std::vector<double> xs, ys;
    for (double v : spec.values) {
        fit.points.push_back(scaling_point(spec, v));
        xs.push_back(v);
        ys.push_back(fit.points.back().term2 / fit.points.back().correction);
    }
    const LogLogFit f = fit_loglog(xs, ys);
    fit.exponent = f.slope;
    fit.rSquared = f.rSquared;
    return fit;
}

/// Dominant CG-Net expression n√(S³(ln m + ln n)/N_s), S = KJ.
inline double cgnet_comparator(double n, double m, double s, double ns)
{
    return n * std::sqrt(s * s * s * (std::log(m) + std::log(n)) / ns);
}

/// Dominant DR-CG-Net expression √(S³(ln m + ln n)/N_s), S = KJL_c.
inline double drcgnet_comparator(double n, double m, double s, double ns)
{
    return std::sqrt(s * s * s * (std::log(m) + std::log(n)) / ns);
}

/// Log-log slope in n of the comparator ratio at matched network size S.
inline LogLogFit observation_fit(const std::vector<double>& ns, double size, double numSamples)
{
    std::vector<double> ratio;
    for (double n : ns) {
        const double m = std::max(1.0, std::floor(n / 2.0));
        if (!(std::log(m) + std::log(n) > 0.0)) throw InvalidArgument("observation_fit: ln m + ln n must be positive");
        ratio.push_back(cgnet_comparator(n, m, size, numSamples) / drcgnet_comparator(n, m, size, numSamples));
    }
    return fit_loglog(ns, ratio);
}

inline json to_json(const ScalingPoint& p)
{
    return {{"axis", p.axisValue}, {"n", p.n},           {"m", p.m},         {"K", p.K},
            {"J", p.J},            {"Lc", p.Lc},         {"Ns", p.Ns},       {"y_max", p.yMax},
            {"term2", p.term2},    {"term3", p.term3},   {"total", p.total}, {"correction", p.correction},
            {"r", p.r}};
}

inline json to_json(const ScalingFit& f)
{
    json pts = json::array();
    for (const auto& p : f.points) pts.push_back(to_json(p));
    return {{"axis", to_string(f.sweepAxis)}, {"exponent", f.exponent}, {"r_squared", f.rSquared}, {"points", pts}};
}

/// Fixed-format CSV for plotting.
inline std::string sweep_csv(const ScalingFit& f)
{
    std::string out = "#v1\naxis,term2,term3,total\n";
    char buf[160];
    for (const auto& p : f.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.axisValue, p.term2, p.term3, p.total);
        out += buf;
    }
    return out;
}

} // namespace cgbound
