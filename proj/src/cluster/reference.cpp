// Serial reference kernels. Kept deliberately plain: the OpenMP kernels in
// kernels.cpp are tested for bit-identical output against these.

#include <cmath>
#include <limits>

#include "riskyish/cluster.hpp"
#include "ward_common.hpp"

namespace riskyish::cluster::reference {

CondensedDistanceMatrix pairwise_distances(std::span<const ScoreVector> vectors) {
    const std::size_t n = vectors.size();
    if (n < 2) throw Error(ErrorKind::insufficient_data, "pairwise distances need at least 2 vectors");
    const std::size_t dim = vectors[0].size();
    for (const auto& v : vectors) {
        if (v.size() != dim) throw Error(ErrorKind::validation, "vector length mismatch");
    }
    std::vector<double> d(n * (n - 1) / 2);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double ss = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double diff = vectors[i][c] - vectors[j][c];
                ss += diff * diff;
            }
            d[idx++] = std::sqrt(ss);
        }
    }
    return CondensedDistanceMatrix(n, std::move(d));
}

Linkage ward_linkage(const CondensedDistanceMatrix& distances) {
    const std::size_t n = distances.n();
    if (n < 2) throw Error(ErrorKind::insufficient_data, "ward linkage needs at least 2 items");

    auto s = detail::init_state(distances);
    std::vector<std::size_t> slot_of(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) slot_of[i] = i;

    Linkage linkage{n, {}};
    linkage.steps.reserve(n - 1);
    double previous = 0.0;

    for (std::size_t t = 0; t + 1 < n; ++t) {
        const std::size_t live = s.active.size();

        double minimum = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < live; ++p) {
            for (std::size_t q = p + 1; q < live; ++q) {
                minimum = std::min(minimum, s.at(s.active[p], s.active[q]));
            }
        }
        const double bound = detail::tie_bound(minimum);
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::size_t p = 0; p < live; ++p) {
            for (std::size_t q = p + 1; q < live; ++q) {
                const std::size_t a = s.active[p], b = s.active[q];
                if (s.at(a, b) <= bound) best = std::min(best, detail::pair_key(s.cluster[a], s.cluster[b]));
            }
        }

        const std::size_t left = static_cast<std::size_t>(best >> 32);
        const std::size_t right = static_cast<std::size_t>(best & 0xffffffffu);
        std::size_t a = slot_of[left], b = slot_of[right];
        if (a > b) std::swap(a, b);

        const double d2_ab = s.at(a, b);
        const double height = detail::monotone_height(std::sqrt(d2_ab), previous);
        previous = height;
        linkage.steps.push_back({left, right, height, s.size[a] + s.size[b]});

        const auto na = static_cast<double>(s.size[a]);
        const auto nb = static_cast<double>(s.size[b]);
        for (std::size_t k : s.active) {
            if (k == a || k == b) continue;
            const double v = detail::ward_update(s.at(a, k), s.at(b, k), d2_ab, na, nb, static_cast<double>(s.size[k]));
            s.at(a, k) = s.at(k, a) = v;
        }
        s.size[a] += s.size[b];
        s.cluster[a] = n + t;
        slot_of[n + t] = a;
        std::erase(s.active, b);
    }
    return linkage;
}

} // namespace riskyish::cluster::reference
