#pragma once

#include "cgbound/core/covariance.hpp"
#include "cgbound/core/errors.hpp"
#include "cgbound/core/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cgbound {

enum class Variant { CgNet, DrCgNet };

inline std::string to_string(Variant v)
{
    return v == Variant::CgNet ? "cgnet" : "drcgnet";
}

inline Variant variant_from_string(const std::string& s)
{
    if (s == "cgnet" || s == "CgNet" || s == "CG-Net") return Variant::CgNet;
    if (s == "drcgnet" || s == "DrCgNet" || s == "DR-CG-Net") return Variant::DrCgNet;
    throw InvalidArgument("unknown network variant '" + s + "'");
}

/// Spectrum bounds of the admissible covariance set: p_min ≤ λ(P) ≤ p_max.
struct SpectrumBounds {
    double pMin = 1e-4;
    double pMax = 1e4;
};

struct NetworkConfig {
    Variant variant = Variant::CgNet;
    int n = 8;
    int K = 2;
    int J = 2;
    SignalBounds bounds;
    CovStructure covStructure = CovStructure::ScaledIdentity;
    double epsilon = 1e-4;
    SpectrumBounds spectrum;

    // CG-Net: bound on |μ| and the scale nonlinearity h (only exp is supported).
    double mu = 1e4;
    std::string hName = "exp";

    // DR-CG-Net: filters f_0..f_Lc (f_0 = f_Lc = 1), kernels k_1..k_Lc,
    // weight bounds w_1..w_Lc and the step bound δ.
    int Lc = 2;
    std::vector<int> filters{1, 2, 1};
    std::vector<int> kernels{3, 3};
    std::vector<double> weightBounds{1.5, 1.5};
    double delta = 1.0;

    /// Number of parameter blocks per scale update.
    int D() const { return variant == Variant::CgNet ? 2 : Lc + 1; }

    void validate() const
    {
        if (n < 1) throw InvalidArgument("network: n must be >= 1");
        if (K < 1) throw InvalidArgument("network: K must be >= 1");
        if (J < 1) throw InvalidArgument("network: J must be >= 1");
        bounds.validate();
        if (!(epsilon > 0.0)) throw InvalidArgument("network: epsilon must be positive");
        if (!(spectrum.pMin > 0.0) || !(spectrum.pMin <= spectrum.pMax))
            throw InvalidArgument("network: need 0 < pMin <= pMax");
        if (variant == Variant::CgNet) {
            if (!(mu > 0.0)) throw InvalidArgument("network: mu bound must be positive");
            if (hName != "exp") throw InvalidArgument("network: only h = exp is supported");
            if (!(bounds.a > 0.0)) throw InvalidArgument("network: CG-Net needs a > 0 for ln(z)");
        } else {
            if (Lc < 1) throw InvalidArgument("network: Lc must be >= 1");
            if (static_cast<int>(filters.size()) != Lc + 1)
                throw InvalidArgument("network: filters must list f_0..f_Lc");
            if (static_cast<int>(kernels.size()) != Lc)
                throw InvalidArgument("network: kernels must list k_1..k_Lc");
            if (static_cast<int>(weightBounds.size()) != Lc)
                throw InvalidArgument("network: weightBounds must list w_1..w_Lc");
            if (filters.front() != 1 || filters.back() != 1)
                throw InvalidArgument("network: f_0 and f_Lc must equal 1");
            for (int f : filters)
                if (f < 1) throw InvalidArgument("network: filter counts must be positive");
            for (int k : kernels)
                if (k < 1) throw InvalidArgument("network: kernel sizes must be positive");
            for (double w : weightBounds)
                if (!(w > 0.0)) throw InvalidArgument("network: weight bounds must be positive");
            if (!(delta > 0.0)) throw InvalidArgument("network: delta bound must be positive");
        }
    }
};

/// The CG-Net defaults used throughout: h = exp on [1, e³], ξ = 1, z∞ = e³,
/// c_max = 1, p_max = 1/ε, p_min = ε, |μ| ≤ 1/ε, scaled-identity P.
inline NetworkConfig cgnet_reference_config(int n, int K, int J, double eps = 1e-4)
{
    NetworkConfig c;
    c.variant = Variant::CgNet;
    c.n = n;
    c.K = K;
    c.J = J;
    c.epsilon = eps;
    c.spectrum = {eps, 1.0 / eps};
    c.mu = 1.0 / eps;
    c.covStructure = CovStructure::ScaledIdentity;
    return c;
}

inline NetworkConfig drcgnet_reference_config(int n, int K, int J, double eps = 1e-4)
{
    NetworkConfig c;
    c.variant = Variant::DrCgNet;
    c.n = n;
    c.K = K;
    c.J = J;
    c.epsilon = eps;
    c.spectrum = {eps, 1.0 / eps};
    c.covStructure = CovStructure::Tridiagonal;
    return c;
}

} // namespace cgbound
