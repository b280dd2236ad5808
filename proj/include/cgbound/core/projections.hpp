#pragma once

#include "cgbound/core/errors.hpp"
#include "cgbound/core/linalg.hpp"

namespace cgbound {

/// mReLU: a + ReLU(x − a) − ReLU(x − b), i.e. a componentwise clamp to [a, b].
inline Vector mrelu(const Vector& x, double a, double b)
{
    if (!(a <= b)) throw InvalidArgument("mrelu: invalid interval, a > b");
    return x.cwiseMax(a).cwiseMin(b);
}

/// Projection onto the Euclidean ball of radius b: v / max{1, ‖v‖₂ / b}.
inline Vector ball_project(const Vector& v, double b)
{
    if (!(b > 0.0)) throw InvalidArgument("ball_project: radius must be positive");
    const double nrm = v.norm();
    if (nrm <= b) return v;
    return v * (b / nrm);
}

inline Vector relu(const Vector& x)
{
    return x.cwiseMax(0.0);
}

} // namespace cgbound
