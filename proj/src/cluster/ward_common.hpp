#pragma once

// Helpers shared by the serial and OpenMP Ward kernels. Both kernels keep a
// dense n x n matrix of squared distances indexed by slot; a merge writes the
// new cluster into the lower slot and retires the higher one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "riskyish/cluster.hpp"

namespace riskyish::cluster::detail {

struct WardState {
    std::size_t n = 0;
    std::vector<double> d2;            // n*n, symmetric
    std::vector<std::size_t> cluster;  // slot -> current cluster id
    std::vector<std::size_t> size;     // slot -> cardinality
    std::vector<std::size_t> active;   // live slots, ascending

    double& at(std::size_t a, std::size_t b) { return d2[a * n + b]; }
    double at(std::size_t a, std::size_t b) const { return d2[a * n + b]; }
};

inline WardState init_state(const CondensedDistanceMatrix& distances) {
    WardState s;
    s.n = distances.n();
    s.d2.assign(s.n * s.n, 0.0);
    for (std::size_t i = 0; i < s.n; ++i) {
        for (std::size_t j = i + 1; j < s.n; ++j) {
            const double d = distances.at(i, j);
            s.at(i, j) = s.at(j, i) = d * d;
        }
    }
    s.cluster.resize(s.n);
    s.size.assign(s.n, 1);
    s.active.resize(s.n);
    for (std::size_t i = 0; i < s.n; ++i) s.cluster[i] = s.active[i] = i;
    return s;
}

inline double tie_bound(double minimum) {
    return minimum + kTieTolerance * std::max(1.0, minimum);
}

inline std::uint64_t pair_key(std::size_t id_a, std::size_t id_b) {
    const auto lo = static_cast<std::uint64_t>(std::min(id_a, id_b));
    const auto hi = static_cast<std::uint64_t>(std::max(id_a, id_b));
    return (lo << 32) | hi;
}

/// Lance-Williams Ward update of the squared distance to slot k after
/// merging slots a and b.
inline double ward_update(double d2_ak, double d2_bk, double d2_ab, double na, double nb, double nk) {
    const double v = ((na + nk) * d2_ak + (nb + nk) * d2_bk - nk * d2_ab) / (na + nb + nk);
    return v > 0.0 ? v : 0.0;
}

/// Heights of a Ward linkage are non-decreasing in exact arithmetic; only
/// rounding between tied merges can invert them.
inline double monotone_height(double height, double previous) {
    if (height >= previous) return height;
    if (previous - height <= 1e-9 * std::max(1.0, previous)) return previous;
    throw std::logic_error("ward linkage produced a height inversion");
}

} // namespace riskyish::cluster::detail
