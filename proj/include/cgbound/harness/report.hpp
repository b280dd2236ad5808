#pragma once

#include "cgbound/core/errors.hpp"
#include "cgbound/core/json_io.hpp"
#include "cgbound/geb/bound.hpp"
#include "cgbound/geb/scaling.hpp"
#include "cgbound/harness/config.hpp"
#include "cgbound/harness/dataset.hpp"
#include "cgbound/harness/gap.hpp"
#include "cgbound/lipschitz/verify.hpp"
#include "cgbound/network/json.hpp"
#include "cgbound/network/parameters.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace cgbound {

/// Process exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSuiteFailure = 2;

struct ReportResult {
    json report;
    std::vector<std::pair<std::string, std::string>> csv; // (file name, contents)
    bool verifyOk = true;
    bool gapsOk = true;

    bool ok() const { return verifyOk && gapsOk; }
    int exit_code() const { return ok() ? kExitOk : kExitSuiteFailure; }
};

inline CgDataSpec data_spec(const MeasurementModel& model, const NetworkConfig& cfg, const DatasetSettings& d,
                            std::uint64_t seed)
{
    CgDataSpec s;
    s.model = model;
    s.sigmaU = sigma_u(d, cfg.n);
    s.a = d.a;
    s.b = d.b;
    s.cMax = cfg.bounds.cMax;
    s.Ns = d.Ns;
    s.seed = seed;
    return s;
}

inline double resolve_ymax(const YMaxSetting& y, const MeasurementModel& model, const NetworkConfig& cfg,
                           const CgDataSpec& train, unsigned workers)
{
    if (y.value) return *y.value;
    if (y.mode != YMaxMode::Dataset) return ymax_estimate(model, cfg.bounds.cMax, y.mode);
    std::vector<Vector> ys;
    for (const CgSample& s : generate_cg_dataset(train, workers)) ys.push_back(s.y);
    return ymax_estimate(model, cfg.bounds.cMax, YMaxMode::Dataset, ys);
}

struct BaseBound {
    MeasurementModel model;
    BoundReport bound;
};

/// Bound for the top-level model and network at dataset.Ns.
inline BaseBound base_bound(const ReportConfig& c, unsigned workers = 0)
{
    BaseBound out;
    out.model = build_model(c.model);
    const CgDataSpec train = data_spec(out.model, c.network, c.dataset, splitmix64(c.seed ^ 0xb0b0ULL));
    const double yMax = resolve_ymax(c.bounds.yMax, out.model, c.network, train, workers);
    out.bound = geb_bound(c.network, out.model, resolve_loss(c.loss, c.network), c.dataset.Ns, c.bounds.epsConf,
                          yMax);
    return out;
}

inline std::string gaps_csv(const std::vector<std::string>& names, const std::vector<GapReport>& gaps)
{
    std::string out = "#v1\nname,Ns,train_loss,test_loss,empirical_gap,bound_total,holds\n";
    char buf[256];
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const GapReport& g = gaps[i];
        std::snprintf(buf, sizeof buf, "%s,%lld,%.17g,%.17g,%.17g,%.17g,%d\n", names[i].c_str(),
                      static_cast<long long>(g.Ns), g.trainLoss, g.testLoss, g.empiricalGap, g.boundTotal,
                      g.holds ? 1 : 0);
        out += buf;
    }
    return out;
}

/// Runs every configured section. The JSON has no timestamps or host
/// details, so (config, seed) fixes it byte for byte.
inline ReportResult run_report(const ReportConfig& c, unsigned workers = 0)
{
    ReportResult res;
    json& rep = res.report;
    rep["seed"] = c.seed;

    // Bound for the base configuration.
    {
        const BaseBound base = base_bound(c, workers);
        const MeasurementModel& model = base.model;
        const double yMax = base.bound.inputs.yMax;
        json jb = to_json(base.bound);
        jb["network"] = to_json(c.network);
        jb["model"] = {{"m", model.m()}, {"n", model.n()}, {"sigma", model.sigma()},
                       {"norm2", model.norm2()}, {"normInf", model.normInf()}};
        if (yMax > 0.0) jb["r"] = r_diagnostic(yMax, model);
        if (c.bounds.targetGap) {
            try {
                jb["sample_complexity"] = sample_complexity(c.network, model, base.bound.loss, *c.bounds.targetGap,
                                                            c.bounds.epsConf, yMax);
            } catch (const NumericalError& e) {
                jb["sample_complexity"] = e.what();
            }
        }
        rep["bound"] = std::move(jb);
    }

    if (c.verify) {
        json jv = json::array();
        for (VerifyTarget t : c.verify->targets) {
            const VerificationReport v = verify_lipschitz(t, c.verify->trials, c.verify->seed, c.verify->dims, workers);
            res.verifyOk = res.verifyOk && v.all_pass();
            jv.push_back(to_json(v));
        }
        rep["verify"] = std::move(jv);
    }

    {
        json jg = json::array();
        std::vector<std::string> names;
        std::vector<GapReport> gaps;
        for (const GapRunConfig& r : c.runs) {
            const MeasurementModel model = build_model(r.model);
            const CgDataSpec train = data_spec(model, r.network, r.dataset, r.trainSeed);
            const double yMax = resolve_ymax(c.bounds.yMax, model, r.network, train, workers);
            const ParameterSet theta = sample_parameters(r.network, r.thetaSeed);
            const GapReport g = empirical_gap(theta, r.network, resolve_loss(r.loss, r.network), train,
                                              r.dataset.testDraws, r.testSeed, c.bounds.epsConf, yMax, workers);
            res.gapsOk = res.gapsOk && g.holds;
            json jr = to_json(g);
            jr["name"] = r.name;
            jr["network"] = to_json(r.network);
            jg.push_back(std::move(jr));
            names.push_back(r.name);
            gaps.push_back(g);
        }
        rep["gaps"] = std::move(jg);
        if (!c.runs.empty()) res.csv.emplace_back("gaps.csv", gaps_csv(names, gaps));
    }

    {
        json js = json::array();
        for (const SweepEntry& s : c.sweeps) {
            const ScalingFit f = scaling_fit(s.spec);
            json jf = to_json(f);
            jf["name"] = s.name;
            jf["variant"] = to_string(s.spec.base.variant);
            js.push_back(std::move(jf));
            res.csv.emplace_back("sweep_" + s.name + ".csv", sweep_csv(f));
        }
        rep["sweeps"] = std::move(js);
    }

    rep["status"] = {{"verify", res.verifyOk}, {"gaps", res.gapsOk}, {"ok", res.ok()}};
    return res;
}

/// Writes report.json and the CSV files into `dir`.
inline void write_report(const ReportResult& r, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error("cannot write " + (dir / name).string());
        out << text;
    };
    put("report.json", r.report.dump(2) + "\n");
    for (const auto& [name, text] : r.csv) put(name, text);
}

} // namespace cgbound
