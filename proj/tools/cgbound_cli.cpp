// cgbound: command-line front end for the solver, bound and report code.

#include "cgbound/cgbound.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

using namespace cgbound;

namespace {

ReportConfig load_or_default(const std::string& path)
{
    return path.empty() ? report_config_from_json(json::object()) : load_report_config(path);
}

/// One sample from the configured data distribution plus a random admissible
/// hypothesis, as used by `solve` and `forward`.
struct Instance {
    MeasurementModel model;
    CgSample sample;
    ParameterSet theta;
};

Instance make_instance(const ReportConfig& c, std::uint64_t seed, std::uint64_t thetaSeed)
{
    Instance in;
    in.model = build_model(c.model);
    CgDataSpec spec = data_spec(in.model, c.network, c.dataset, seed);
    spec.Ns = 1;
    in.sample = generate_cg_dataset(spec, 1).front();
    in.theta = sample_parameters(c.network, thetaSeed);
    return in;
}

void print_bound_table(const BoundReport& b, const NetworkConfig& cfg)
{
    auto row = [](const char* k, double v) { std::printf("  %-14s %16.8g\n", k, v); };
    std::printf("%s  n=%d K=%d J=%d  P:%s\n", to_string(cfg.variant).c_str(), cfg.n, cfg.K, cfg.J,
                to_string(cfg.covStructure).c_str());
    row("Ns", static_cast<double>(b.inputs.Ns));
    row("epsConf", b.inputs.epsConf);
    row("y_max", b.inputs.yMax);
    row("tau", b.loss.tau);
    row("c", b.loss.c);
    row("ln kappa", b.constants.kappa.is_zero() ? -INFINITY : b.constants.kappa.log());
    row("term1", b.term1);
    row("term2", b.term2);
    row("term3", b.term3);
    row("total", b.total);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Generalization bounds for unrolled compound-Gaussian networks"};
    app.require_subcommand(1);
    unsigned workers = 0;
    app.add_option("--workers", workers, "Worker threads, 0 = all cores")->capture_default_str();

    std::string configPath;
    std::uint64_t seed = 1, thetaSeed = 2;
    std::string u0 = "tikhonov";
    bool noClamp = false;

    auto* solve = app.add_subcommand("solve", "Run the iterative solver on one synthetic instance");
    solve->add_option("--config", configPath, "Config JSON (defaults apply when omitted)");
    solve->add_option("--seed", seed, "Sample seed")->capture_default_str();
    solve->add_option("--theta-seed", thetaSeed, "Parameter seed")->capture_default_str();
    solve->add_option("--u0", u0, "Initial u: tikhonov or zero")
        ->check(CLI::IsMember({"tikhonov", "zero"}))
        ->capture_default_str();
    solve->add_flag("--no-clamp", noClamp, "Skip the final projection onto the c_max ball");

    auto* fwd = app.add_subcommand("forward", "Print the full forward trace on one synthetic instance");
    fwd->add_option("--config", configPath, "Config JSON (defaults apply when omitted)");
    fwd->add_option("--seed", seed, "Sample seed")->capture_default_str();
    fwd->add_option("--theta-seed", thetaSeed, "Parameter seed")->capture_default_str();

    bool jsonOnly = false;
    std::int64_t nsOverride = 0;
    auto* bound = app.add_subcommand("bound", "Print the generalization bound for a config");
    bound->add_option("--config", configPath, "Config JSON (defaults apply when omitted)");
    bound->add_option("--Ns", nsOverride, "Training-set size, overrides dataset.Ns");
    bound->add_flag("--json", jsonOnly, "Print only the JSON report");

    std::vector<std::string> targets;
    int trials = 10000;
    std::uint64_t verifySeed = 20241014;
    VerifyDims dims;
    auto* verify = app.add_subcommand("verify", "Randomized certification of the Lipschitz inequalities");
    verify->add_option("--target", targets, "Target name, repeatable (default: all)");
    verify->add_option("--trials", trials, "Trials per target")->capture_default_str()->check(CLI::PositiveNumber);
    verify->add_option("--seed", verifySeed, "Seed")->capture_default_str();
    verify->add_option("--max-n", dims.maxN, "Largest n")->capture_default_str();
    verify->add_option("--max-m", dims.maxM, "Largest m")->capture_default_str();
    verify->add_option("--max-kj", dims.maxKJ, "Largest K*J")->capture_default_str();

    std::string sweepName;
    auto* sweep = app.add_subcommand("sweep", "Emit CSV (axis, term2, term3, total) for a configured sweep");
    sweep->add_option("--config", configPath, "Config JSON with a sweep section")->required();
    sweep->add_option("--name", sweepName, "Sweep name (default: first)");

    std::string reportConfig, outDir = "report_out";
    auto* report = app.add_subcommand("report", "Run every section of a config and write JSON and CSV");
    report->add_option("config", reportConfig, "Config JSON")->required();
    report->add_option("--out", outDir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*solve || *fwd) {
            const ReportConfig c = load_or_default(configPath);
            const Instance in = make_instance(c, seed, thetaSeed);
            if (*solve) {
                const Vector chat = gcgls_run(in.sample.y, in.model, c.network, in.theta,
                                              u0 == "zero" ? U0Mode::Zero : U0Mode::Tikhonov, !noClamp);
                const json out{{"y", to_json(in.sample.y)}, {"c_true", to_json(in.sample.c)},
                               {"c_hat", to_json(chat)}, {"mae", mae(chat, in.sample.c)}};
                std::cout << out.dump(2) << "\n";
            } else {
                json out = to_json(forward(in.sample.y, in.model, in.theta, c.network));
                out["c_true"] = to_json(in.sample.c);
                std::cout << out.dump(2) << "\n";
            }
            return kExitOk;
        }

        if (*bound) {
            ReportConfig c = load_or_default(configPath);
            if (nsOverride != 0) {
                if (nsOverride < 1) throw ConfigError("--Ns", "must be >= 1");
                c.dataset.Ns = nsOverride;
            }
            const BoundReport b = base_bound(c, workers).bound;
            std::cout << to_json(b).dump(2) << "\n";
            if (!jsonOnly) print_bound_table(b, c.network);
            return kExitOk;
        }

        if (*verify) {
            std::vector<VerifyTarget> list;
            for (const std::string& t : targets) {
                try {
                    list.push_back(verify_target_from_string(t));
                } catch (const InvalidArgument& e) {
                    throw ConfigError("--target", e.what());
                }
            }
            if (list.empty()) list = all_verify_targets();
            json out = json::array();
            bool ok = true;
            for (VerifyTarget t : list) {
                const VerificationReport r = verify_lipschitz(t, trials, verifySeed, dims, workers);
                ok = ok && r.all_pass();
                out.push_back(to_json(r));
                std::fprintf(stderr, "%-14s %6d/%-6d %s\n", r.target.c_str(), r.passes, r.trials,
                             r.all_pass() ? "pass" : "FAIL");
            }
            std::cout << out.dump(2) << "\n";
            return ok ? kExitOk : kExitSuiteFailure;
        }

        if (*sweep) {
            const ReportConfig c = load_report_config(configPath);
            if (c.sweeps.empty()) throw ConfigError("/sweep", "config has no sweeps");
            const SweepEntry* chosen = &c.sweeps.front();
            if (!sweepName.empty()) {
                chosen = nullptr;
                for (const SweepEntry& s : c.sweeps)
                    if (s.name == sweepName) chosen = &s;
                if (!chosen) throw ConfigError("--name", "no sweep named '" + sweepName + "'");
            }
            const ScalingFit f = scaling_fit(chosen->spec);
            std::cout << sweep_csv(f);
            std::fprintf(stderr, "%s: exponent %.6f, r^2 %.6f\n", chosen->name.c_str(), f.exponent, f.rSquared);
            return kExitOk;
        }

        if (*report) {
            const ReportConfig c = load_report_config(reportConfig);
            const ReportResult r = run_report(c, workers);
            write_report(r, outDir);
            for (const json& v : r.report.value("verify", json::array()))
                std::fprintf(stderr, "verify %-14s %s\n", v.at("target").get<std::string>().c_str(),
                             v.at("passes") == v.at("trials") ? "pass" : "FAIL");
            std::size_t held = 0;
            for (const json& g : r.report.at("gaps")) held += g.at("holds").get<bool>() ? 1 : 0;
            std::fprintf(stderr, "gaps   %zu/%zu under the bound\n", held, r.report.at("gaps").size());
            std::fprintf(stderr, "wrote %s/report.json\n", outDir.c_str());
            return r.exit_code();
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error at %s\n", e.what());
        return kExitValidation;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitValidation;
    } catch (const ShapeError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSuiteFailure;
    }
    return kExitOk;
}
