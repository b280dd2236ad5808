#pragma once

#include "cgbound/core/json_io.hpp"
#include "cgbound/network/config.hpp"
#include "cgbound/network/forward.hpp"
#include "cgbound/network/parameters.hpp"

#include <string>

namespace cgbound {

inline json to_json(const SignalBounds& b)
{
    return json{{"cMax", b.cMax}, {"zInf", b.zInf}, {"xi", b.xi}, {"a", b.a}, {"b", b.b}};
}

inline SignalBounds signal_bounds_from_json(const JsonSection& s, SignalBounds b = {})
{
    s.only({"cMax", "zInf", "xi", "a", "b"});
    b.cMax = s.number("cMax", b.cMax);
    b.zInf = s.number("zInf", b.zInf);
    b.xi = s.number("xi", b.xi);
    b.a = s.number("a", b.a);
    b.b = s.number("b", b.b);
    return b;
}

inline json to_json(const NetworkConfig& c)
{
    json j{{"variant", to_string(c.variant)}, {"n", c.n}, {"K", c.K}, {"J", c.J},
           {"covStructure", to_string(c.covStructure)}, {"epsilon", c.epsilon},
           {"pMin", c.spectrum.pMin}, {"pMax", c.spectrum.pMax}, {"bounds", to_json(c.bounds)}};
    if (c.variant == Variant::CgNet) {
        j["mu"] = c.mu;
        j["h"] = c.hName;
    } else {
        j["Lc"] = c.Lc;
        j["filters"] = c.filters;
        j["kernels"] = c.kernels;
        j["weightBounds"] = c.weightBounds;
        j["delta"] = c.delta;
    }
    return j;
}

/// Unspecified fields take the reference defaults of the chosen variant.
inline NetworkConfig network_config_from_json(const JsonSection& s)
{
    s.only({"variant", "n", "K", "J", "covStructure", "epsilon", "pMin", "pMax", "bounds", "mu", "h", "Lc",
            "filters", "kernels", "weightBounds", "delta"});
    Variant v;
    try {
        v = variant_from_string(s.string("variant", "cgnet"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(s.path("variant"), e.what());
    }
    const int n = static_cast<int>(s.integer("n", 8));
    const int K = static_cast<int>(s.integer("K", 2));
    const int J = static_cast<int>(s.integer("J", 2));
    const double eps = s.number("epsilon", 1e-4);
    if (!(eps > 0.0)) throw ConfigError(s.path("epsilon"), "must be positive");
    NetworkConfig c = v == Variant::CgNet ? cgnet_reference_config(n, K, J, eps) : drcgnet_reference_config(n, K, J, eps);
    if (s.has("covStructure")) {
        try {
            c.covStructure = cov_structure_from_string(s.string("covStructure"));
        } catch (const InvalidArgument& e) {
            throw ConfigError(s.path("covStructure"), e.what());
        }
    }
    c.spectrum.pMin = s.number("pMin", c.spectrum.pMin);
    c.spectrum.pMax = s.number("pMax", c.spectrum.pMax);
    if (s.has("bounds")) c.bounds = signal_bounds_from_json(s.section("bounds"), c.bounds);
    c.mu = s.number("mu", c.mu);
    c.hName = s.string("h", c.hName);
    if (s.has("Lc")) c.Lc = static_cast<int>(s.integer("Lc"));
    if (s.has("filters")) c.filters = s.integers("filters");
    if (s.has("kernels")) c.kernels = s.integers("kernels");
    if (s.has("weightBounds")) c.weightBounds = s.numbers("weightBounds");
    c.delta = s.number("delta", c.delta);
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(s.where().empty() ? "/" : s.where(), e.what());
    }
    return c;
}

inline json to_json(const StepParams& s, const NetworkConfig& c)
{
    if (c.variant == Variant::CgNet) return json{{"B", to_json(s.B)}, {"mu", s.mu}};
    json w = json::array();
    for (const Matrix& m : s.W) w.push_back(to_json(m));
    return json{{"W", std::move(w)}, {"delta", s.delta}};
}

inline json to_json(const ParameterSet& p, const NetworkConfig& c)
{
    json layers = json::array();
    for (const auto& layer : p.theta) {
        json steps = json::array();
        for (const auto& s : layer) steps.push_back(to_json(s, c));
        layers.push_back(std::move(steps));
    }
    return json{{"P", to_json(p.P.P())}, {"theta", std::move(layers)}};
}

inline ParameterSet parameter_set_from_json(const JsonSection& s, const NetworkConfig& c)
{
    s.only({"P", "theta"});
    ParameterSet p;
    s.require("P");
    try {
        p.P = SpdMatrix(matrix_from_json(s.raw("P"), s.path("P")));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(s.path("P"), e.what());
    }
    s.require("theta");
    const json& layers = s.raw("theta");
    if (!layers.is_array()) throw ConfigError(s.path("theta"), "expected an array of layers");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string wk = s.path("theta") + "/" + std::to_string(k);
        if (!layers[k].is_array()) throw ConfigError(wk, "expected an array of steps");
        std::vector<StepParams> steps;
        for (std::size_t j = 0; j < layers[k].size(); ++j) {
            JsonSection st(layers[k][j], wk + "/" + std::to_string(j));
            StepParams sp;
            if (c.variant == Variant::CgNet) {
                st.only({"B", "mu"});
                st.require("B");
                sp.B = matrix_from_json(st.raw("B"), st.path("B"));
                sp.mu = st.number("mu");
            } else {
                st.only({"W", "delta"});
                st.require("W");
                const json& w = st.raw("W");
                if (!w.is_array()) throw ConfigError(st.path("W"), "expected an array of matrices");
                for (std::size_t l = 0; l < w.size(); ++l)
                    sp.W.push_back(matrix_from_json(w[l], st.path("W") + "/" + std::to_string(l)));
                sp.delta = st.number("delta");
            }
            steps.push_back(std::move(sp));
        }
        p.theta.push_back(std::move(steps));
    }
    const auto bad = parameter_violations(p, c);
    if (!bad.empty()) throw ConfigError(s.where().empty() ? "/" : s.where(), bad.front());
    return p;
}

inline json to_json(const ForwardTrace& t)
{
    json zk = json::array();
    for (const auto& layer : t.zk) {
        json steps = json::array();
        for (const auto& z : layer) steps.push_back(to_json(z));
        zk.push_back(std::move(steps));
    }
    json uk = json::array();
    for (const auto& u : t.uk) uk.push_back(to_json(u));
    return json{{"z0", to_json(t.z0)}, {"zk", std::move(zk)}, {"uk", std::move(uk)}, {"output", to_json(t.output)}};
}

} // namespace cgbound
