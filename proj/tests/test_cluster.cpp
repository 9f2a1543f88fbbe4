#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "generators.hpp"
#include "riskyish/cluster.hpp"
#include "ward_oracle.hpp"

using namespace riskyish;
using namespace riskyish::cluster;
using riskyish::testing::Rng;

namespace {

std::vector<ScoreVector> points(std::initializer_list<std::vector<double>> rows) {
    std::vector<ScoreVector> out;
    for (const auto& r : rows) out.emplace_back(r);
    return out;
}

Linkage cluster_points(const std::vector<ScoreVector>& vs) { return ward_linkage(pairwise_distances(vs)); }

} // namespace

TEST_CASE("three points on a line") {
    const auto vs = points({{0}, {1}, {5}});
    const auto d = pairwise_distances(vs);
    CHECK(std::vector<double>(d.values().begin(), d.values().end()) == std::vector<double>{1, 5, 4});

    const auto link = ward_linkage(d);
    REQUIRE(link.steps.size() == 2);
    CHECK(link.steps[0] == MergeStep{0, 1, 1.0, 2});
    CHECK(link.steps[1].left == 2);
    CHECK(link.steps[1].right == 3);
    CHECK(link.steps[1].size == 3);
    CHECK(link.steps[1].height == doctest::Approx(std::sqrt(27.0)).epsilon(1e-12));
    CHECK(link.steps[1].height == doctest::Approx(5.196152).epsilon(1e-7));

    CHECK(cut_k(link, 2) == std::vector<std::size_t>{0, 0, 1});
    CHECK(cut_k(link, 3) == std::vector<std::size_t>{0, 1, 2});
    CHECK(cut_k(link, 1) == std::vector<std::size_t>{0, 0, 0});
    CHECK_THROWS_AS(cut_k(link, 0), Error);
    CHECK_THROWS_AS(cut_k(link, 4), Error);

    const auto coph = cophenetic(link);
    CHECK(coph.at(0, 1) == 1.0);
    CHECK(coph.at(0, 2) == doctest::Approx(std::sqrt(27.0)));
    CHECK(coph.at(1, 2) == doctest::Approx(std::sqrt(27.0)));

    const std::vector<std::string> names{"a", "b", "c"};
    CHECK(to_newick(link, names) == "((a:1,b:1):4.196152,c:5.196152);");
    CHECK(leaf_order(link) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("two identical-distance leaves") {
    const auto link = cluster_points(points({{0, 0}, {2, 0}}));
    REQUIRE(link.steps.size() == 1);
    CHECK(link.steps[0].height == 2.0);
    const std::vector<std::string> names{"a", "b"};
    CHECK(to_newick(link, names) == "(a:2,b:2);");
}

TEST_CASE("all zeros against all fours over 25 dimensions") {
    const auto vs = points({std::vector<double>(25, 0.0), std::vector<double>(25, 4.0)});
    const auto d = pairwise_distances(vs);
    CHECK(d.at(0, 1) == 20.0);
    CHECK(ward_linkage(d).steps[0].height == 20.0);
}

TEST_CASE("condensed matrix validation") {
    CHECK_THROWS_AS(CondensedDistanceMatrix(3, {1, 2}), Error);
    CHECK_THROWS_AS(CondensedDistanceMatrix(2, {-1}), Error);
    CHECK_THROWS_AS(pairwise_distances(points({{1}})), Error);
    CHECK_THROWS_AS(pairwise_distances(points({{1}, {1, 2}})), Error);
    CHECK(CondensedDistanceMatrix::index(4, 1, 3) == 4);
}

TEST_CASE("equidistant ties merge the smallest id pair first") {
    const auto vs = points({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    const auto link = cluster_points(vs);
    CHECK(link.steps[0].left == 0);
    CHECK(link.steps[0].right == 1);
    CHECK(link.steps[1].left == 2);
    CHECK(link.steps[1].right == 3);
    CHECK(link == reference::ward_linkage(reference::pairwise_distances(vs)));
}

TEST_CASE("json round trip and linkage validation") {
    const auto link = cluster_points(points({{0}, {1}, {5}, {9}}));
    CHECK(linkage_from_json(linkage_to_json(link)) == link);
    CHECK(validate_linkage(link).empty());

    Linkage bad = link;
    std::swap(bad.steps[0].height, bad.steps[2].height);
    CHECK_FALSE(validate_linkage(bad).empty());
    bad = link;
    bad.steps[1].left = bad.steps[0].left;
    CHECK_FALSE(validate_linkage(bad).empty());
    CHECK_THROWS_AS(linkage_from_json("{\"n\":3}"), Error);
}

TEST_CASE("newick quotes awkward names") {
    const auto link = cluster_points(points({{0}, {3}}));
    const std::vector<std::string> names{"Smart Fridge", "it's (odd)"};
    CHECK(to_newick(link, names) == "('Smart Fridge':3,'it''s (odd)':3);");
}

TEST_CASE("ascii dendrogram lists every leaf once") {
    const auto link = cluster_points(points({{0}, {1}, {5}, {9}}));
    const std::vector<std::string> names{"alpha", "beta", "gamma", "delta"};
    const auto art = render_ascii(link, names, 32);
    for (const auto& n : names) {
        const auto first = art.find(n);
        REQUIRE(first != std::string::npos);
        CHECK(art.find(n, first + 1) == std::string::npos);
    }
    CHECK(art.find("height 0 ..") != std::string::npos);
}

TEST_CASE("property: linkage matches the definitional oracle") {
    Rng rng(424242);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 11;
        const std::size_t dims = 1 + rng() % 25;
        const auto vs = testing::random_integer_vectors(rng, n, dims);
        const auto got = cluster_points(vs);
        const auto want = testing::ward_oracle(vs);
        REQUIRE(got.steps.size() == want.steps.size());
        const auto members = testing::cluster_members(got);
        for (std::size_t t = 0; t < got.steps.size(); ++t) {
            CAPTURE(trial);
            CAPTURE(t);
            CHECK(got.steps[t].left == want.steps[t].left);
            CHECK(got.steps[t].right == want.steps[t].right);
            CHECK(got.steps[t].size == want.steps[t].size);
            CHECK(std::abs(got.steps[t].height - want.steps[t].height) <= 1e-9);
            const double h2 = got.steps[t].height * got.steps[t].height;
            const double e = testing::delta_ess(vs, members[got.steps[t].left], members[got.steps[t].right]);
            CHECK(std::abs(h2 - 2 * e) <= 1e-9 * std::max(1.0, h2));
        }
    }
}

TEST_CASE("property: monotone heights, ultrametric cophenetic, nested cuts") {
    Rng rng(17);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + rng() % 30;
        const auto vs = testing::random_integer_vectors(rng, n, 1 + rng() % 25);
        const auto link = cluster_points(vs);
        CHECK(validate_linkage(link).empty());
        for (std::size_t t = 1; t < link.steps.size(); ++t) CHECK(link.steps[t].height >= link.steps[t - 1].height);

        const auto c = cophenetic(link);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) CHECK(c.at(i, j) <= std::max(c.at(i, k), c.at(k, j)));

        for (std::size_t k = 1; k < n; ++k) {
            const auto coarse = cut_k(link, k);
            const auto fine = cut_k(link, k + 1);
            CHECK(std::set<std::size_t>(fine.begin(), fine.end()).size() == k + 1);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (fine[i] == fine[j]) CHECK(coarse[i] == coarse[j]);
        }

        const auto order = leaf_order(link);
        std::vector<std::size_t> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> iota(n);
        std::iota(iota.begin(), iota.end(), 0);
        CHECK(sorted == iota);
    }
}

TEST_CASE("property: permuting inputs permutes partitions") {
    Rng rng(8);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 3 + rng() % 15;
        // Real-valued points keep ties away, so the partition is unique.
        std::vector<ScoreVector> vs;
        std::uniform_real_distribution<double> u(0.0, 4.0);
        const std::size_t dims = 1 + rng() % 6;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> v(dims);
            for (auto& x : v) x = u(rng);
            vs.emplace_back(v);
        }
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<ScoreVector> permuted(n);
        for (std::size_t i = 0; i < n; ++i) permuted[i] = vs[perm[i]];

        const auto a = cluster_points(vs);
        const auto b = cluster_points(permuted);
        for (std::size_t t = 0; t < a.steps.size(); ++t) {
            CHECK(a.steps[t].height == doctest::Approx(b.steps[t].height).epsilon(1e-12));
        }
        for (std::size_t k = 1; k <= n; ++k) {
            const auto la = cut_k(a, k);
            const auto lb = cut_k(b, k);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    CHECK((la[perm[i]] == la[perm[j]]) == (lb[i] == lb[j]));
        }
    }
}

TEST_CASE("oracle refuses out-of-range sizes") {
    Rng rng(1);
    CHECK_THROWS_AS(testing::ward_oracle(testing::random_integer_vectors(rng, 1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(testing::ward_oracle(testing::random_integer_vectors(rng, 65, 3)), std::invalid_argument);
}
