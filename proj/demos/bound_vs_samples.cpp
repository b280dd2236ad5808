// Prints bound terms and one measured gap as the training set grows, for a
// desk-scale DR-CG-Net on a random Gaussian measurement matrix.

#include "cgbound/cgbound.hpp"

#include <cstdio>

using namespace cgbound;

int main()
{
    const NetworkConfig cfg = drcgnet_reference_config(8, 2, 2);
    const MeasurementModel model = sweep_model(20241014, 4, 8, 0.01);
    const LossSpec loss = mae_loss(cfg.n, cfg.bounds.cMax);
    const double yMax = ymax_estimate(model, cfg.bounds.cMax, YMaxMode::WhiteNoise);
    const ParameterSet theta = sample_parameters(cfg, 5);

    CgDataSpec spec;
    spec.model = model;
    spec.sigmaU = SpdMatrix(Matrix::Identity(cfg.n, cfg.n));
    spec.seed = 11;

    std::printf("%8s %12s %12s %12s %12s\n", "Ns", "term2", "term3", "bound", "gap");
    for (std::int64_t ns : {16, 64, 256, 1024, 4096}) {
        spec.Ns = ns;
        const GapReport g = empirical_gap(theta, cfg, loss, spec, 4000, 12, 0.05, yMax);
        std::printf("%8lld %12.5g %12.5g %12.5g %12.5g\n", static_cast<long long>(ns), g.bound.term2, g.bound.term3,
                    g.boundTotal, g.empiricalGap);
    }
    const std::int64_t need = sample_complexity(cfg, model, loss, 1.0, 0.05, yMax);
    std::printf("samples for a bound of 1.0: %lld\n", static_cast<long long>(need));
}
