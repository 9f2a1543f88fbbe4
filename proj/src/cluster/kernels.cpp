#include <cmath>
#include <limits>

#include "riskyish/cluster.hpp"
#include "ward_common.hpp"

namespace riskyish::cluster {

namespace {

// Below this many live clusters the fork/join cost outweighs the scan.
constexpr long kParallelThreshold = 96;

} // namespace

CondensedDistanceMatrix pairwise_distances(std::span<const ScoreVector> vectors) {
    const std::size_t n = vectors.size();
    if (n < 2) throw Error(ErrorKind::insufficient_data, "pairwise distances need at least 2 vectors");
    const std::size_t dim = vectors[0].size();
    for (const auto& v : vectors) {
        if (v.size() != dim) throw Error(ErrorKind::validation, "vector length mismatch");
    }

    // Flatten so the inner loop reads contiguous memory.
    std::vector<double> flat(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        auto src = vectors[i].values();
        std::copy(src.begin(), src.end(), flat.begin() + static_cast<long>(i * dim));
    }

    std::vector<double> d(n * (n - 1) / 2);
    const long rows = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 16) if (rows > kParallelThreshold)
    for (long ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double* xi = flat.data() + i * dim;
        std::size_t idx = CondensedDistanceMatrix::index(n, i, i + 1);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = flat.data() + j * dim;
            double ss = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double diff = xi[c] - xj[c];
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
        const long live = static_cast<long>(s.active.size());
        const std::size_t* act = s.active.data();
        const std::size_t* ids = s.cluster.data();
        const double* d2 = s.d2.data();

        // Two exact reductions (min value, then min id key among ties) keep
        // the choice independent of how pairs are split across threads.
        double minimum = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 8) reduction(min : minimum) if (live > kParallelThreshold)
        for (long p = 0; p < live; ++p) {
            const double* row = d2 + act[p] * n;
            for (long q = p + 1; q < live; ++q) minimum = std::min(minimum, row[act[q]]);
        }

        const double bound = detail::tie_bound(minimum);
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
#pragma omp parallel for schedule(dynamic, 8) reduction(min : best) if (live > kParallelThreshold)
        for (long p = 0; p < live; ++p) {
            const double* row = d2 + act[p] * n;
            for (long q = p + 1; q < live; ++q) {
                if (row[act[q]] <= bound) best = std::min(best, detail::pair_key(ids[act[p]], ids[act[q]]));
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
#pragma omp parallel for schedule(static) if (live > kParallelThreshold)
        for (long p = 0; p < live; ++p) {
            const std::size_t k = act[p];
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

} // namespace riskyish::cluster
