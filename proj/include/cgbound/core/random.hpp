#pragma once

#include "cgbound/core/linalg.hpp"

#include <cstdint>
#include <random>

namespace cgbound {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for item `index` of a run seeded with `seed`.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index)
{
    const std::uint64_t s = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return Rng(seq);
}

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double stddev = 1.0)
{
    std::normal_distribution<double> nd(0.0, stddev);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
    return m;
}

inline Vector gaussian_vector(Rng& rng, Eigen::Index n, double stddev = 1.0)
{
    return gaussian_matrix(rng, n, 1, stddev);
}

inline Vector uniform_vector(Rng& rng, Eigen::Index n, double lo, double hi)
{
    std::uniform_real_distribution<double> ud(lo, hi);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = ud(rng);
    return v;
}

} // namespace cgbound
