#pragma once

#include "cgbound/core/errors.hpp"
#include "cgbound/core/json_io.hpp"
#include "cgbound/core/parallel.hpp"
#include "cgbound/geb/bound.hpp"
#include "cgbound/harness/dataset.hpp"
#include "cgbound/network/forward.hpp"
#include "cgbound/network/parameters.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace cgbound {

struct GapReport {
    double trainLoss = 0.0;
    double testLoss = 0.0;
    double stdError = 0.0; // of the Monte-Carlo test loss
    double empiricalGap = 0.0;
    double boundTotal = 0.0; // term2 + term3: the bound on the gap itself
    BoundReport bound;
    double yMax = 0.0;
    std::int64_t yMaxExceeded = 0; // samples with ‖y‖₂ > yMax
    double maxLoss = 0.0;
    bool holds = false;
    std::int64_t trials = 0;
    std::int64_t Ns = 0;
    std::uint64_t seed = 0;
};

/// (1/n)‖x̂ − x‖₁.
inline double mae(const Vector& xhat, const Vector& x)
{
    return (xhat - x).cwiseAbs().sum() / static_cast<double>(x.size());
}

inline double loss_value(const LossSpec& loss, const Vector& xhat, const Vector& x)
{
    if (loss.name != LossName::MAE)
        throw ConfigError("/loss/name", "SSIM is computed outside this library; empirical gaps need the MAE loss");
    return mae(xhat, x);
}

namespace detail {

struct LossStats {
    double mean = 0.0;
    double stdError = 0.0;
    double maxLoss = 0.0;
    std::int64_t exceeded = 0;
};

inline LossStats dataset_loss(const ParameterSet& theta, const NetworkConfig& cfg, const LossSpec& loss,
                              const CgDataSpec& spec, double yMax, unsigned workers)
{
    const Eigen::MatrixXd l = covariance_factor(spec.sigmaU);
    const auto count = static_cast<std::size_t>(spec.Ns);
    std::vector<double> values(count), norms(count);
    parallel_for(count, workers, [&](std::size_t i) {
        const CgSample s = draw_cg_sample(spec, l, i);
        values[i] = loss_value(loss, forward_output(s.y, spec.model, theta, cfg), s.c);
        norms[i] = s.y.norm();
    });
    // Sequential sums keep the result independent of the worker count.
    LossStats st;
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sum += values[i];
        st.maxLoss = std::max(st.maxLoss, values[i]);
        if (norms[i] > yMax) ++st.exceeded;
    }
    st.mean = sum / static_cast<double>(count);
    for (double v : values) sq += (v - st.mean) * (v - st.mean);
    if (count > 1) st.stdError = std::sqrt(sq / static_cast<double>(count - 1) / static_cast<double>(count));
    return st;
}

} // namespace detail

/// Train and Monte-Carlo test loss of the fixed hypothesis ĉ(·; Θ), compared
/// against the bound on |𝓛 − 𝓛_S|. Test draws come from (seed, i), train
/// draws from (trainSpec.seed, i).
inline GapReport empirical_gap(const ParameterSet& theta, const NetworkConfig& cfg, const LossSpec& loss,
                               const CgDataSpec& trainSpec, std::int64_t testDraws, std::uint64_t seed,
                               double epsConf, double yMax, unsigned workers = 0)
{
    if (loss.name == LossName::SsimExternal && !(loss.tau > 0.0))
        throw ConfigError("/loss/tau", "SSIM loss needs a user-supplied Lipschitz constant");
    if (loss.name != LossName::MAE)
        throw ConfigError("/loss/name", "SSIM is computed outside this library; empirical gaps need the MAE loss");
    if (testDraws < 1) throw InvalidArgument("empirical_gap: testDraws must be >= 1");
    trainSpec.validate();
    if (!parameters_valid(theta, cfg)) throw InvalidArgument("empirical_gap: parameters are not admissible");

    CgDataSpec testSpec = trainSpec;
    testSpec.Ns = testDraws;
    testSpec.seed = seed;

    const detail::LossStats train = detail::dataset_loss(theta, cfg, loss, trainSpec, yMax, workers);
    const detail::LossStats test = detail::dataset_loss(theta, cfg, loss, testSpec, yMax, workers);

    GapReport g;
    g.trainLoss = train.mean;
    g.testLoss = test.mean;
    g.stdError = test.stdError;
    g.empiricalGap = std::abs(test.mean - train.mean);
    g.bound = geb_bound(cfg, trainSpec.model, loss, trainSpec.Ns, epsConf, yMax, train.mean);
    g.boundTotal = g.bound.term2 + g.bound.term3;
    g.yMax = yMax;
    g.yMaxExceeded = train.exceeded + test.exceeded;
    g.maxLoss = std::max(train.maxLoss, test.maxLoss);
    g.holds = g.empiricalGap <= g.boundTotal;
    g.trials = testDraws;
    g.Ns = trainSpec.Ns;
    g.seed = seed;
    return g;
}

inline json to_json(const GapReport& g)
{
    return {{"train_loss", g.trainLoss},   {"test_loss", g.testLoss},         {"std_error", g.stdError},
            {"empirical_gap", g.empiricalGap}, {"bound_total", g.boundTotal}, {"term2", g.bound.term2},
            {"term3", g.bound.term3},       {"y_max", g.yMax},                {"y_max_exceeded", g.yMaxExceeded},
            {"max_loss", g.maxLoss},        {"holds", g.holds},               {"trials", g.trials},
            {"Ns", g.Ns},                   {"seed", g.seed}};
}

} // namespace cgbound
