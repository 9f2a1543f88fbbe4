#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskyish/scoring.hpp"

namespace riskyish::cluster {

/// Upper triangle of a symmetric distance matrix, row-major, without the
/// diagonal: (0,1), (0,2), ..., (0,n-1), (1,2), ...
class CondensedDistanceMatrix {
public:
    CondensedDistanceMatrix() = default;
    /// Throws Error(validation) on a length mismatch or a negative entry.
    CondensedDistanceMatrix(std::size_t n, std::vector<double> distances);

    std::size_t n() const noexcept { return n_; }
    std::span<const double> values() const noexcept { return d_; }

    /// Distance between items i and j; 0 when i == j.
    double at(std::size_t i, std::size_t j) const;

    static std::size_t index(std::size_t n, std::size_t i, std::size_t j) {
        return n * i - i * (i + 1) / 2 + (j - i - 1);
    }

    bool operator==(const CondensedDistanceMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

struct MergeStep {
    std::size_t left = 0;   // smaller cluster id
    std::size_t right = 0;  // larger cluster id
    double height = 0.0;
    std::size_t size = 0;

    bool operator==(const MergeStep&) const = default;
};

/// Leaves are ids 0..n-1; step t creates cluster id n+t.
struct Linkage {
    std::size_t n = 0;
    std::vector<MergeStep> steps;

    bool operator==(const Linkage&) const = default;
};

/// Relative tolerance on squared merge distances below which two candidate
/// merges count as tied; ties go to the smallest (min id, max id) pair.
inline constexpr double kTieTolerance = 1e-10;

/// Structural checks: step count, id ranges, single use of each child,
/// sizes, non-decreasing heights.
ValidationReport validate_linkage(const Linkage& linkage);

// OpenMP kernels. Results are bit-identical to the serial reference below
// for any thread count.

/// Euclidean distances between all pairs. Needs >= 2 vectors of equal length.
CondensedDistanceMatrix pairwise_distances(std::span<const ScoreVector> vectors);

/// Ward agglomeration with the Lance-Williams update on squared distances.
Linkage ward_linkage(const CondensedDistanceMatrix& distances);

namespace reference {

CondensedDistanceMatrix pairwise_distances(std::span<const ScoreVector> vectors);
Linkage ward_linkage(const CondensedDistanceMatrix& distances);

} // namespace reference

/// Cluster label per leaf after applying the first n-k merges. Labels are
/// numbered by smallest contained leaf id.
std::vector<std::size_t> cut_k(const Linkage& linkage, std::size_t k);

/// Height of the lowest merge joining each pair of leaves.
CondensedDistanceMatrix cophenetic(const Linkage& linkage);

/// Leaf ids in dendrogram order (the child holding the smaller leaf id first).
std::vector<std::size_t> leaf_order(const Linkage& linkage);

/// Rooted binary Newick tree; branch length = parent height - child height.
std::string to_newick(const Linkage& linkage, std::span<const std::string> leaf_names);

/// Monospaced dendrogram, leaves top to bottom, merge depth proportional to
/// height.
std::string render_ascii(const Linkage& linkage, std::span<const std::string> leaf_names, int width = 48);

std::string linkage_to_json(const Linkage& linkage);
/// Throws Error(validation) if the document is malformed or fails validate_linkage.
Linkage linkage_from_json(const std::string& text);

} // namespace riskyish::cluster
