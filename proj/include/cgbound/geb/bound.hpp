#pragma once

#include "cgbound/core/errors.hpp"
#include "cgbound/core/json_io.hpp"
#include "cgbound/core/types.hpp"
#include "cgbound/geb/covering.hpp"
#include "cgbound/lipschitz/constants.hpp"
#include "cgbound/network/config.hpp"
#include "cgbound/network/parameters.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cgbound {

enum class LossName { MAE, SsimExternal };

inline std::string to_string(LossName l)
{
    return l == LossName::MAE ? "mae" : "ssim-external";
}

inline LossName loss_name_from_string(const std::string& s)
{
    if (s == "mae" || s == "MAE") return LossName::MAE;
    if (s == "ssim-external" || s == "ssim" || s == "SSIM-external") return LossName::SsimExternal;
    throw InvalidArgument("unknown loss '" + s + "'");
}

/// Loss with Lipschitz constant τ and bound c.
struct LossSpec {
    LossName name = LossName::MAE;
    double tau = 0.0;
    double c = 0.0;
};

/// Mean absolute error (1/n)‖x − x'‖₁ on the c_max ball.
inline LossSpec mae_loss(int n, double cMax)
{
    if (n < 1 || !(cMax > 0.0)) throw InvalidArgument("mae_loss: need n >= 1 and cMax > 0");
    const double s = std::sqrt(static_cast<double>(n));
    return {LossName::MAE, 1.0 / s, cMax / s};
}

/// SSIM loss, bounded by 2. Its Lipschitz constant is only known to exist, so
/// it has to be supplied.
inline LossSpec ssim_loss(std::optional<double> tau)
{
    if (!tau) throw ConfigError("/loss/tau", "SSIM loss needs a user-supplied Lipschitz constant");
    if (!(*tau > 0.0)) throw ConfigError("/loss/tau", "must be positive");
    return {LossName::SsimExternal, *tau, 2.0};
}

inline void validate(const LossSpec& l)
{
    if (!(l.tau > 0.0) || !std::isfinite(l.tau)) throw InvalidArgument("loss: tau must be positive and finite");
    if (!(l.c > 0.0) || !std::isfinite(l.c)) throw InvalidArgument("loss: c must be positive and finite");
}

struct BoundInputs {
    std::int64_t Ns = 1;
    double epsConf = 0.05;
    double yMax = 0.0;
    std::int64_t dimP = 1;
    std::vector<double> alpha; // α_d
    std::vector<double> omega; // ω_d
};

struct BoundReport {
    double term1 = 0.0;
    double term2 = 0.0;
    double term3 = 0.0;
    double total = 0.0;
    AggregateConstants constants;
    BoundInputs inputs;
    LossSpec loss;
};

/// Free-parameter count α_d of block d.
inline double block_dimension(int d, const NetworkConfig& cfg)
{
    if (cfg.variant == Variant::CgNet) {
        if (d == 1) return 0.5 * cfg.n * (cfg.n + 1.0);
        if (d == 2) return 1.0;
    } else {
        if (d >= 1 && d <= cfg.Lc)
            return static_cast<double>(cfg.filters[d - 1]) * cfg.filters[d] * cfg.kernels[d - 1] * cfg.kernels[d - 1];
        if (d == cfg.Lc + 1) return 1.0;
    }
    throw InvalidArgument("block_dimension: block index out of range");
}

namespace detail {

/// √(α(1 + ln(1 + 4ω(KJD+1)κ/c_max))), computed without forming κ.
inline double entropy_root(double alpha, double omega, double count, LogReal kappa, double cMax)
{
    if (alpha == 0.0) return 0.0;
    const LogReal arg = LogReal(4.0 * omega * count / cMax) * kappa;
    return std::sqrt(alpha * (1.0 + log1p(arg)));
}

} // namespace detail

inline double confidence_term(const LossSpec& loss, std::int64_t Ns, double epsConf)
{
    return 4.0 * loss.c * std::sqrt(2.0 * std::log(4.0 / epsConf) / static_cast<double>(Ns));
}

/// Generalization bound for the hypothesis class of `cfg`, assembled term by
/// term from the network constants.
inline BoundReport geb_bound(const NetworkConfig& cfg, const MeasurementModel& model, const LossSpec& loss,
                             std::int64_t Ns, double epsConf, double yMax, double empiricalLoss = 0.0)
{
    cfg.validate();
    validate(loss);
    if (Ns < 1) throw InvalidArgument("geb_bound: Ns must be >= 1");
    if (!(epsConf > 0.0 && epsConf < 1.0)) throw InvalidArgument("geb_bound: epsConf must lie in (0, 1)");
    if (!(yMax >= 0.0)) throw InvalidArgument("geb_bound: yMax must be nonnegative");
    if (model.n() != cfg.n) throw ShapeError("geb_bound: model.n must equal config.n");

    BoundReport r;
    r.loss = loss;
    r.constants = network_constants(cfg, model, yMax);
    r.inputs.Ns = Ns;
    r.inputs.epsConf = epsConf;
    r.inputs.yMax = yMax;
    r.inputs.dimP = dim_cov(cfg.covStructure, cfg.n);
    for (int d = 1; d <= cfg.D(); ++d) {
        r.inputs.alpha.push_back(block_dimension(d, cfg));
        r.inputs.omega.push_back(block_radius(d, cfg));
    }

    const double count = static_cast<double>(cfg.K) * cfg.J * cfg.D() + 1.0;
    const double cMax = cfg.bounds.cMax;
    double bracket = detail::entropy_root(static_cast<double>(r.inputs.dimP), cfg.spectrum.pMax, count,
                                          r.constants.kappa, cMax);
    for (int k = 0; k < cfg.K; ++k)
        for (int j = 0; j < cfg.J; ++j)
            for (int d = 0; d < cfg.D(); ++d)
                bracket += detail::entropy_root(r.inputs.alpha[d], r.inputs.omega[d], count,
                                                r.constants.kappaKdj[k][j][d], cMax);

    r.term1 = empiricalLoss;
    r.term2 = 8.0 * loss.tau * cMax / std::sqrt(static_cast<double>(Ns)) * bracket;
    r.term3 = confidence_term(loss, Ns, epsConf);
    r.total = r.term1 + r.term2 + r.term3;
    return r;
}

enum class YMaxMode { Noiseless, WhiteNoise, Dataset };

inline std::string to_string(YMaxMode m)
{
    switch (m) {
    case YMaxMode::Noiseless: return "noiseless";
    case YMaxMode::WhiteNoise: return "white-noise";
    case YMaxMode::Dataset: return "dataset";
    }
    return "?";
}

inline YMaxMode ymax_mode_from_string(const std::string& s)
{
    if (s == "noiseless") return YMaxMode::Noiseless;
    if (s == "white-noise") return YMaxMode::WhiteNoise;
    if (s == "dataset") return YMaxMode::Dataset;
    throw InvalidArgument("unknown yMax mode '" + s + "'");
}

/// Gaussian quantile used for the noisy y_max bound.
inline constexpr double kNoiseQuantile = 6.11;

inline double ymax_estimate(const MeasurementModel& model, double cMax, YMaxMode mode,
                            const std::vector<Vector>& dataset = {})
{
    switch (mode) {
    case YMaxMode::Noiseless: return cMax * model.norm2();
    case YMaxMode::WhiteNoise: return cMax * model.norm2() + kNoiseQuantile * model.sigma();
    case YMaxMode::Dataset: {
        if (dataset.empty()) throw InvalidArgument("ymax_estimate: dataset mode needs a nonempty dataset");
        double best = 0.0;
        for (const Vector& y : dataset) best = std::max(best, y.norm());
        return best;
    }
    }
    throw InvalidArgument("ymax_estimate: unknown mode");
}

/// Smallest N_s with term2 + term3 ≤ gap, by bisection on [1, 2⁶²].
inline std::int64_t sample_complexity(const NetworkConfig& cfg, const MeasurementModel& model, const LossSpec& loss,
                                      double gap, double epsConf, double yMax)
{
    if (!(gap > 0.0)) throw InvalidArgument("sample_complexity: gap must be positive");
    auto value = [&](std::int64_t ns) {
        const BoundReport r = geb_bound(cfg, model, loss, ns, epsConf, yMax);
        return r.term2 + r.term3;
    };
    std::int64_t lo = 1, hi = std::int64_t{1} << 62;
    if (value(lo) <= gap) return 1;
    if (value(hi) > gap) throw NumericalError("sample_complexity: gap not reached below 2^62 samples");
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (value(mid) <= gap ? hi : lo) = mid;
    }
    return hi;
}

inline json log_real_json(LogReal x)
{
    return x.is_zero() ? json("-inf") : json(x.log());
}

/// Constants serialize by natural log; they overflow double for deep networks.
inline json to_json(const AggregateConstants& a)
{
    json j;
    j["r1"] = a.step.r1;
    j["r2"] = a.step.r2;
    j["r3"] = a.step.r3;
    j["c1"] = a.c1;
    j["c2"] = a.c2;
    j["ln_rHat1"] = log_real_json(a.rHat1);
    j["ln_rHat2"] = log_real_json(a.rHat2);
    j["ln_cHat1"] = log_real_json(a.cHat1);
    j["ln_kappa"] = log_real_json(a.kappa);
    json kdj = json::array();
    for (const auto& k : a.kappaKdj) {
        json jk = json::array();
        for (const auto& jj : k) {
            json jd = json::array();
            for (LogReal x : jj) jd.push_back(log_real_json(x));
            jk.push_back(std::move(jd));
        }
        kdj.push_back(std::move(jk));
    }
    j["ln_kappa_kdj"] = std::move(kdj);
    return j;
}

inline json to_json(const BoundReport& r)
{
    json j;
    j["term1"] = r.term1;
    j["term2"] = r.term2;
    j["term3"] = r.term3;
    j["total"] = r.total;
    j["loss"] = {{"name", to_string(r.loss.name)}, {"tau", r.loss.tau}, {"c", r.loss.c}};
    j["inputs"] = {{"Ns", r.inputs.Ns},         {"eps_conf", r.inputs.epsConf}, {"y_max", r.inputs.yMax},
                   {"dim_P", r.inputs.dimP},    {"alpha", r.inputs.alpha},      {"omega", r.inputs.omega}};
    j["constants"] = to_json(r.constants);
    return j;
}

} // namespace cgbound
