#pragma once

// Report configuration. Top-level sections:
//   seed     integer, root of every derived stream
//   model    {m, n, sigma, scale, seed, A}       measurement model
//   network  network_config_from_json schema     hypothesis class
//   bounds   {epsConf, yMax, targetGap}          bound assembly
//   loss     {name, tau}                         mae | ssim-external
//   dataset  {Ns, testDraws, a, b, sigmaU, runs} synthetic data and gap runs
//   verify   {targets, trials, seed, maxN, maxM, maxKJ}
//   sweep    [{name, axis, values, network, m, Ns, epsConf, loss, yMax, sigma, seed}]
// Each entry of dataset.runs is merge-patched over {model, network, loss,
// dataset} and may add name and thetaSeed.

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"
#include "cgbound/core/json_io.hpp"
#include "cgbound/core/random.hpp"
#include "cgbound/core/types.hpp"
#include "cgbound/geb/bound.hpp"
#include "cgbound/geb/scaling.hpp"
#include "cgbound/lipschitz/verify.hpp"
#include "cgbound/network/config.hpp"
#include "cgbound/network/json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cgbound {

struct ModelSpec {
    int m = 4;
    int n = 8;
    double sigma = 0.0;
    double scale = 1.0; // entries ~ N(0, scale²/m)
    std::uint64_t seed = 1;
    std::optional<Matrix> A;
};

inline MeasurementModel build_model(const ModelSpec& s)
{
    if (s.A) return MeasurementModel(*s.A, s.sigma);
    Rng rng = make_stream(s.seed, 0);
    return MeasurementModel(gaussian_matrix(rng, s.m, s.n, s.scale / std::sqrt(static_cast<double>(s.m))), s.sigma);
}

struct LossConfig {
    LossName name = LossName::MAE;
    std::optional<double> tau;
};

inline LossSpec resolve_loss(const LossConfig& l, const NetworkConfig& cfg)
{
    return l.name == LossName::MAE ? mae_loss(cfg.n, cfg.bounds.cMax) : ssim_loss(l.tau);
}

/// y_max source: a fixed number or an estimate mode.
struct YMaxSetting {
    YMaxMode mode = YMaxMode::WhiteNoise;
    std::optional<double> value;
};

struct BoundSettings {
    double epsConf = 0.05;
    YMaxSetting yMax;
    std::optional<double> targetGap;
};

struct DatasetSettings {
    std::int64_t Ns = 64;
    std::int64_t testDraws = 10000;
    double a = 1.0;
    double b = std::exp(3.0);
    double sigmaUScale = 1.0; // Σ_u = scale·I unless sigmaU is given
    std::optional<Matrix> sigmaU;
};

struct GapRunConfig {
    std::string name;
    ModelSpec model;
    NetworkConfig network;
    LossConfig loss;
    DatasetSettings dataset;
    std::uint64_t thetaSeed = 0;
    std::uint64_t trainSeed = 0;
    std::uint64_t testSeed = 0;
};

struct VerifySettings {
    std::vector<VerifyTarget> targets;
    int trials = 10000;
    std::uint64_t seed = 1;
    VerifyDims dims;
};

struct SweepEntry {
    std::string name;
    SweepSpec spec;
};

struct ReportConfig {
    std::uint64_t seed = 1;
    ModelSpec model;
    NetworkConfig network;
    BoundSettings bounds;
    LossConfig loss;
    DatasetSettings dataset;
    std::vector<GapRunConfig> runs;
    std::optional<VerifySettings> verify;
    std::vector<SweepEntry> sweeps;
};

namespace detail {

inline std::uint64_t seed_field(const JsonSection& s, const std::string& key, std::uint64_t dflt)
{
    if (!s.has(key)) return dflt;
    const json& v = s.raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(s.path(key), "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

inline int positive_int(const JsonSection& s, const std::string& key, long long dflt)
{
    const long long v = s.integer(key, dflt);
    if (v < 1 || v > (1LL << 30)) throw ConfigError(s.path(key), "must be a positive integer");
    return static_cast<int>(v);
}

inline double positive_number(const JsonSection& s, const std::string& key, double dflt)
{
    const double v = s.number(key, dflt);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(s.path(key), "must be positive and finite");
    return v;
}

inline double eps_conf_field(const JsonSection& s, const std::string& key, double dflt)
{
    const double e = s.number(key, dflt);
    if (!(e > 0.0 && e < 1.0)) throw ConfigError(s.path(key), "must lie in (0, 1)");
    return e;
}

/// Wraps a parse step so library errors carry the field location.
template <class F>
auto at_path(const std::string& where, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(where.empty() ? "/" : where, e.what());
    }
}

} // namespace detail

inline ModelSpec model_spec_from_json(const JsonSection& s, int networkN, std::uint64_t seedDefault)
{
    s.only({"m", "n", "sigma", "scale", "seed", "A"});
    ModelSpec m;
    m.n = detail::positive_int(s, "n", networkN);
    m.m = detail::positive_int(s, "m", std::max(1, m.n / 2));
    m.sigma = s.number("sigma", 0.0);
    if (!(m.sigma >= 0.0)) throw ConfigError(s.path("sigma"), "must be nonnegative");
    m.scale = detail::positive_number(s, "scale", 1.0);
    m.seed = detail::seed_field(s, "seed", seedDefault);
    if (s.has("A")) {
        m.A = matrix_from_json(s.raw("A"), s.path("A"));
        if (s.has("n") && m.A->cols() != m.n) throw ConfigError(s.path("n"), "does not match the columns of A");
        if (s.has("m") && m.A->rows() != m.m) throw ConfigError(s.path("m"), "does not match the rows of A");
        m.m = static_cast<int>(m.A->rows());
        m.n = static_cast<int>(m.A->cols());
    }
    if (m.n != networkN) throw ConfigError(s.path("n"), "model n must equal network n");
    return m;
}

inline LossConfig loss_config_from_json(const JsonSection& s)
{
    s.only({"name", "tau"});
    LossConfig l;
    l.name = detail::at_path(s.path("name"), [&] { return loss_name_from_string(s.string("name", "mae")); });
    if (s.has("tau")) l.tau = s.number("tau");
    if (l.name == LossName::SsimExternal) ssim_loss(l.tau); // refuses a missing or bad τ
    else if (l.tau) throw ConfigError(s.path("tau"), "MAE fixes tau = 1/sqrt(n)");
    return l;
}

inline YMaxSetting ymax_from_json(const JsonSection& s, const std::string& key, YMaxSetting dflt)
{
    if (!s.has(key)) return dflt;
    const json& v = s.raw(key);
    YMaxSetting y;
    if (v.is_number()) {
        y.value = v.get<double>();
        if (!(*y.value >= 0.0)) throw ConfigError(s.path(key), "must be nonnegative");
        return y;
    }
    if (!v.is_string()) throw ConfigError(s.path(key), "expected a number or a mode string");
    y.mode = detail::at_path(s.path(key), [&] { return ymax_mode_from_string(v.get<std::string>()); });
    return y;
}

inline BoundSettings bound_settings_from_json(const JsonSection& s)
{
    s.only({"epsConf", "yMax", "targetGap"});
    BoundSettings b;
    b.epsConf = detail::eps_conf_field(s, "epsConf", 0.05);
    b.yMax = ymax_from_json(s, "yMax", b.yMax);
    if (s.has("targetGap")) b.targetGap = detail::positive_number(s, "targetGap", 1.0);
    return b;
}

inline DatasetSettings dataset_settings_from_json(const JsonSection& s, int n)
{
    s.only({"Ns", "testDraws", "a", "b", "sigmaU", "runs"});
    DatasetSettings d;
    d.Ns = detail::positive_int(s, "Ns", d.Ns);
    d.testDraws = detail::positive_int(s, "testDraws", d.testDraws);
    d.a = detail::positive_number(s, "a", d.a);
    d.b = s.number("b", d.b);
    if (!(d.a <= d.b)) throw ConfigError(s.path("b"), "need a <= b");
    if (s.has("sigmaU")) {
        const json& v = s.raw("sigmaU");
        if (v.is_number()) {
            d.sigmaUScale = detail::positive_number(s, "sigmaU", 1.0);
        } else {
            d.sigmaU = matrix_from_json(v, s.path("sigmaU"));
            if (d.sigmaU->rows() != n || d.sigmaU->cols() != n) throw ConfigError(s.path("sigmaU"), "must be n x n");
            detail::at_path(s.path("sigmaU"), [&] { return SpdMatrix(*d.sigmaU); });
        }
    }
    return d;
}

inline SpdMatrix sigma_u(const DatasetSettings& d, int n)
{
    return d.sigmaU ? SpdMatrix(*d.sigmaU) : SpdMatrix(d.sigmaUScale * Matrix::Identity(n, n));
}

inline VerifySettings verify_settings_from_json(const JsonSection& s, std::uint64_t seedDefault)
{
    s.only({"targets", "trials", "seed", "maxN", "maxM", "maxKJ"});
    VerifySettings v;
    if (!s.has("targets") || (s.raw("targets").is_string() && s.raw("targets").get<std::string>() == "all")) {
        v.targets = all_verify_targets();
    } else {
        const json& t = s.raw("targets");
        if (!t.is_array()) throw ConfigError(s.path("targets"), "expected \"all\" or an array of target names");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string w = s.path("targets") + "/" + std::to_string(i);
            if (!t[i].is_string()) throw ConfigError(w, "expected a target name");
            v.targets.push_back(detail::at_path(w, [&] { return verify_target_from_string(t[i].get<std::string>()); }));
        }
    }
    v.trials = detail::positive_int(s, "trials", v.trials);
    v.seed = detail::seed_field(s, "seed", seedDefault);
    v.dims.maxN = detail::positive_int(s, "maxN", v.dims.maxN);
    v.dims.maxM = detail::positive_int(s, "maxM", v.dims.maxM);
    v.dims.maxKJ = detail::positive_int(s, "maxKJ", v.dims.maxKJ);
    return v;
}

inline SweepEntry sweep_entry_from_json(const JsonSection& s, std::uint64_t seedDefault)
{
    s.only({"name", "axis", "values", "network", "m", "Ns", "epsConf", "loss", "yMax", "sigma", "seed"});
    SweepEntry e;
    e.name = s.string("name");
    for (char ch : e.name)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
            throw ConfigError(s.path("name"), "use letters, digits, '-' and '_' only");
    SweepSpec& sp = e.spec;
    sp.axis = detail::at_path(s.path("axis"), [&] { return scaling_axis_from_string(s.string("axis")); });
    sp.values = s.numbers("values");
    sp.base = s.has("network") ? network_config_from_json(s.section("network"))
                               : network_config_from_json(JsonSection(json::object(), s.path("network")));
    sp.m = static_cast<int>(s.integer("m", 0));
    if (sp.m < 0) throw ConfigError(s.path("m"), "must be nonnegative");
    sp.Ns = detail::positive_int(s, "Ns", 1000);
    sp.epsConf = detail::eps_conf_field(s, "epsConf", 0.05);
    if (s.has("loss")) {
        const LossConfig l = loss_config_from_json(s.section("loss"));
        if (l.name == LossName::SsimExternal) sp.loss = ssim_loss(l.tau);
    }
    const YMaxSetting y = ymax_from_json(s, "yMax", {YMaxMode::Noiseless, std::nullopt});
    if (y.value || y.mode == YMaxMode::Dataset)
        throw ConfigError(s.path("yMax"), "sweeps take \"noiseless\" or \"white-noise\"");
    sp.yMaxMode = y.mode;
    sp.sigma = s.number("sigma", 0.0);
    if (!(sp.sigma >= 0.0)) throw ConfigError(s.path("sigma"), "must be nonnegative");
    sp.seed = detail::seed_field(s, "seed", seedDefault);
    // Surface degenerate sweeps now instead of mid-report.
    if (sp.values.size() < 4) throw ConfigError(s.path("values"), "a sweep needs at least 4 points");
    for (std::size_t i = 0; i < sp.values.size(); ++i)
        if (!(sp.values[i] >= 1.0) || std::floor(sp.values[i]) != sp.values[i])
            throw ConfigError(s.path("values") + "/" + std::to_string(i), "must be a positive integer");
    const auto [lo, hi] = std::minmax_element(sp.values.begin(), sp.values.end());
    if (*hi < 10.0 * *lo) throw ConfigError(s.path("values"), "a sweep must span at least one decade");
    if (sp.axis == ScalingAxis::KJLc && sp.base.variant != Variant::DrCgNet)
        throw ConfigError(s.path("axis"), "the KJLc axis needs DR-CG-Net");
    return e;
}

namespace detail {

inline GapRunConfig gap_run_from_json(const json& merged, const std::string& where, std::uint64_t rootSeed,
                                      std::size_t index)
{
    GapRunConfig r;
    const JsonSection top(merged, where);
    r.name = top.string("name", "run" + std::to_string(index));
    r.network = network_config_from_json(top.section("network"));
    const std::uint64_t base = splitmix64(rootSeed ^ splitmix64(index + 1));
    r.model = model_spec_from_json(top.section("model"), r.network.n, splitmix64(base + 1));
    r.loss = loss_config_from_json(top.section("loss"));
    if (r.loss.name != LossName::MAE)
        throw ConfigError(top.path("loss") + "/name", "empirical gaps need the MAE loss");
    r.dataset = dataset_settings_from_json(top.section("dataset"), r.network.n);
    r.thetaSeed = seed_field(top, "thetaSeed", splitmix64(base + 2));
    r.trainSeed = splitmix64(base + 3);
    r.testSeed = splitmix64(base + 4);
    return r;
}

} // namespace detail

/// Parses and validates everything before any computation starts.
inline ReportConfig report_config_from_json(const json& j)
{
    const JsonSection top(j, "");
    top.only({"description", "seed", "model", "network", "bounds", "loss", "dataset", "verify", "sweep"});
    auto sectionOrEmpty = [&](const char* key) -> json {
        if (!top.has(key)) return json::object();
        if (!top.raw(key).is_object()) throw ConfigError(top.path(key), "expected an object");
        return top.raw(key);
    };

    ReportConfig c;
    c.seed = detail::seed_field(top, "seed", 1);
    const json network = sectionOrEmpty("network");
    const json model = sectionOrEmpty("model");
    const json loss = sectionOrEmpty("loss");
    json dataset = sectionOrEmpty("dataset");

    c.network = network_config_from_json(JsonSection(network, "/network"));
    c.model = model_spec_from_json(JsonSection(model, "/model"), c.network.n, splitmix64(c.seed));
    c.loss = loss_config_from_json(JsonSection(loss, "/loss"));
    c.dataset = dataset_settings_from_json(JsonSection(dataset, "/dataset"), c.network.n);
    c.bounds = bound_settings_from_json(JsonSection(sectionOrEmpty("bounds"), "/bounds"));
    if (c.bounds.yMax.mode == YMaxMode::Dataset && c.loss.name != LossName::MAE && !c.bounds.yMax.value)
        throw ConfigError("/bounds/yMax", "dataset mode draws samples and needs the MAE loss");
    if (top.has("verify")) c.verify = verify_settings_from_json(top.section("verify"), c.seed);

    json runs = json::array();
    if (dataset.contains("runs")) {
        runs = dataset.at("runs");
        if (!runs.is_array()) throw ConfigError("/dataset/runs", "expected an array");
        dataset.erase("runs");
    }
    const json base{{"model", model}, {"network", network}, {"loss", loss}, {"dataset", dataset}};
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string w = "/dataset/runs/" + std::to_string(i);
        if (!runs[i].is_object()) throw ConfigError(w, "expected an object");
        JsonSection(runs[i], w).only({"name", "model", "network", "loss", "dataset", "thetaSeed"});
        if (runs[i].contains("dataset") && runs[i].at("dataset").contains("runs"))
            throw ConfigError(w + "/dataset/runs", "runs do not nest");
        json merged = base;
        merged.merge_patch(runs[i]);
        c.runs.push_back(detail::gap_run_from_json(merged, w, c.seed, i));
    }

    if (top.has("sweep")) {
        const json& sw = top.raw("sweep");
        if (!sw.is_array()) throw ConfigError("/sweep", "expected an array of sweeps");
        for (std::size_t i = 0; i < sw.size(); ++i) {
            c.sweeps.push_back(sweep_entry_from_json(JsonSection(sw[i], "/sweep/" + std::to_string(i)), c.seed));
            for (std::size_t k = 0; k + 1 < c.sweeps.size(); ++k)
                if (c.sweeps[k].name == c.sweeps.back().name)
                    throw ConfigError("/sweep/" + std::to_string(i) + "/name", "duplicate sweep name");
        }
    }
    return c;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("JSON parse error: ") + e.what());
    }
}

inline ReportConfig load_report_config(const std::string& path)
{
    return report_config_from_json(read_json_file(path));
}

} // namespace cgbound
