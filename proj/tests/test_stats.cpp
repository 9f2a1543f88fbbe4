#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "riskyish/csv.hpp"
#include "riskyish/stats.hpp"

using namespace riskyish;
using namespace riskyish::stats;

namespace {

SampleSet counts(std::string label, std::initializer_list<std::pair<double, int>> spec) {
    SampleSet s{std::move(label), {}};
    for (auto [v, n] : spec) s.values.insert(s.values.end(), static_cast<std::size_t>(n), v);
    return s;
}

SampleSet q1() { return counts("Robotics, AI, or Machine Learning", {{1, 2}, {2, 22}, {3, 4}}); }
SampleSet q2() { return counts("Autonomous Entities", {{1, 2}, {2, 19}, {3, 7}}); }
SampleSet q3() { return counts("Professional Experience", {{1, 4}, {2, 11}, {3, 13}}); }

std::string fixture(const char* name) { return testing::read_file(std::string(RISKYISH_FIXTURES) + "/" + name); }

// Same moments with long double and two-pass central sums.
struct Moments {
    long double mean, std, skew, kurt;
};

Moments moments_ld(const std::vector<double>& xs) {
    const long double n = static_cast<long double>(xs.size());
    long double sum = 0;
    for (double x : xs) sum += x;
    const long double mean = sum / n;
    long double m2 = 0, m3 = 0, m4 = 0;
    for (double x : xs) {
        const long double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const long double std = std::sqrt(m2 * n / (n - 1));
    const long double g1 = m3 / std::pow(m2, 1.5L);
    const long double skew = std::sqrt(n * (n - 1)) / (n - 2) * g1;
    const long double g2 = m4 / (m2 * m2) - 3;
    const long double kurt = (n - 1) / ((n - 2) * (n - 3)) * ((n + 1) * g2 + 6);
    return {mean, std, skew, kurt};
}

std::vector<StatsRow> rows_from_table(const std::string& tsv) {
    std::istringstream in(tsv);
    std::string line;
    std::getline(in, line);
    std::vector<StatsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, '\t')) cells.push_back(cell);
        REQUIRE(cells.size() == 9);
        StatsRow row;
        row.label = cells[0];
        row.stats.count = std::stoul(cells[1]);
        row.stats.mean = std::stod(cells[2]);
        row.stats.std = std::stod(cells[3]);
        row.stats.min = std::stod(cells[4]);
        row.stats.q25 = std::stod(cells[5]);
        row.stats.median = std::stod(cells[6]);
        row.stats.q75 = std::stod(cells[7]);
        row.stats.max = std::stod(cells[8]);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("background question moments") {
    const auto a = describe(q1());
    CHECK(a.count == 28);
    CHECK(a.mean == doctest::Approx(2.071428571).epsilon(1e-9));
    CHECK(*a.std == doctest::Approx(0.465758754).epsilon(1e-9));
    CHECK(*a.skew == doctest::Approx(0.290030894).epsilon(1e-9));
    CHECK(*a.kurtosis == doctest::Approx(2.151104196).epsilon(1e-9));
    CHECK(a.min == 1);
    CHECK(a.q25 == 2);
    CHECK(a.median == 2);
    CHECK(a.q75 == 2);
    CHECK(a.max == 3);

    const auto b = describe(q2());
    CHECK(b.mean == doctest::Approx(2.178571429).epsilon(1e-9));
    CHECK(*b.std == doctest::Approx(0.547964005).epsilon(1e-9));
    CHECK(*b.skew == doctest::Approx(0.120590576).epsilon(1e-9));
    CHECK(*b.kurtosis == doctest::Approx(0.261059747).epsilon(1e-9));
    CHECK(b.q75 == 2.25);

    const auto c = describe(q3());
    CHECK(c.mean == doctest::Approx(2.321428571).epsilon(1e-9));
    CHECK(*c.std == doctest::Approx(0.722832465).epsilon(1e-9));
    CHECK(*c.skew == doctest::Approx(-0.58436131).epsilon(1e-9));
    CHECK(*c.kurtosis == doctest::Approx(-0.810460178).epsilon(1e-9));
    CHECK(c.q75 == 3);
}

TEST_CASE("percentile interpolation") {
    const std::vector<double> xs{1, 2, 3, 4};
    CHECK(percentile(xs, 0.5) == 2.5);
    CHECK(percentile(xs, 0.0) == 1);
    CHECK(percentile(xs, 1.0) == 4);
    CHECK(percentile(xs, 0.25) == 1.75);
    const std::vector<double> one{7};
    CHECK(percentile(one, 0.3) == 7);
    CHECK_THROWS_AS(percentile(xs, 1.5), Error);
}

TEST_CASE("frequency tables") {
    const auto f1 = frequency_table(q1());
    CHECK(f1.at(1) == Frequency{2, 7.14});
    CHECK(f1.at(2) == Frequency{22, 78.57});
    CHECK(f1.at(3) == Frequency{4, 14.29});

    const auto f3 = frequency_table(q3());
    CHECK(f3.at(1) == Frequency{4, 14.29});
    CHECK(f3.at(2) == Frequency{11, 39.29});
    CHECK(f3.at(3) == Frequency{13, 46.43});
}

TEST_CASE("degenerate samples leave moments undefined") {
    const auto constant = describe({"c", {2, 2, 2, 2, 2}});
    CHECK(constant.mean == 2);
    CHECK(*constant.std == 0);
    CHECK_FALSE(constant.skew.has_value());
    CHECK_FALSE(constant.kurtosis.has_value());

    const auto single = describe({"s", {3}});
    CHECK_FALSE(single.std.has_value());
    const auto three = describe({"t", {1, 2, 4}});
    CHECK(three.skew.has_value());
    CHECK_FALSE(three.kurtosis.has_value());

    CHECK_THROWS_AS(describe({"e", {}}), Error);
    CHECK(format_number(std::nullopt, 8) == "undefined");
}

TEST_CASE("parse_responses_csv matches the counts") {
    const auto sets = parse_responses_csv(fixture("ethnographic.csv"));
    REQUIRE(sets.size() == 3);
    CHECK(sets[0].label == "Robotics, AI, or Machine Learning");
    CHECK(describe(sets[0]).mean == describe(q1()).mean);
    CHECK(*describe(sets[2]).kurtosis == doctest::Approx(*describe(q3()).kurtosis).epsilon(1e-12));
    CHECK_THROWS_AS(parse_responses_csv("q\n1\nx\n"), Error);

    const auto skipped = parse_responses_csv("a,b\n1,\n2,3\n,4\n");
    CHECK(skipped[0].values == std::vector<double>{1, 2});
    CHECK(skipped[1].values == std::vector<double>{3, 4});
}

TEST_CASE("property: affine and permutation invariance") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> level(0, 4);
    std::uniform_int_distribution<int> size(4, 60);
    for (int trial = 0; trial < 300; ++trial) {
        SampleSet s{"x", {}};
        const int n = size(rng);
        for (int i = 0; i < n; ++i) s.values.push_back(level(rng));
        const auto base = describe(s);
        if (!base.kurtosis) continue;

        const double a = 0.5 + static_cast<double>(trial % 7), b = -3.0 + trial % 5;
        SampleSet t = s;
        for (auto& v : t.values) v = a * v + b;
        const auto moved = describe(t);
        CHECK(moved.mean == doctest::Approx(a * base.mean + b).epsilon(1e-12));
        CHECK(*moved.std == doctest::Approx(a * *base.std).epsilon(1e-12));
        CHECK(*moved.skew == doctest::Approx(*base.skew).epsilon(1e-9));
        CHECK(*moved.kurtosis == doctest::Approx(*base.kurtosis).epsilon(1e-9));

        std::shuffle(t.values.begin(), t.values.end(), rng);
        for (auto& v : t.values) v = (v - b) / a;
        const auto shuffled = describe(t);
        CHECK(shuffled.q25 == doctest::Approx(base.q25));
        CHECK(shuffled.median == doctest::Approx(base.median));
        CHECK(*shuffled.kurtosis == doctest::Approx(*base.kurtosis).epsilon(1e-9));
    }
}

TEST_CASE("property: agreement with a long double computation") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> level(0, 4);
    for (int trial = 0; trial < 300; ++trial) {
        SampleSet s{"x", {}};
        const int n = 4 + trial % 80;
        for (int i = 0; i < n; ++i) s.values.push_back(level(rng));
        const auto got = describe(s);
        if (!got.kurtosis) continue;
        const auto want = moments_ld(s.values);
        CHECK(std::abs(got.mean - static_cast<double>(want.mean)) <= 1e-12);
        CHECK(std::abs(*got.std - static_cast<double>(want.std)) <= 1e-12);
        CHECK(std::abs(*got.skew - static_cast<double>(want.skew)) <= 1e-9);
        CHECK(std::abs(*got.kurtosis - static_cast<double>(want.kurt)) <= 1e-9);
    }
}

TEST_CASE("golden rendering of the background summary") {
    std::vector<StatsRow> rows;
    for (const auto& s : {q1(), q2(), q3()}) rows.push_back({s.label, describe(s)});
    const auto text = render_columns(rows, {TableFormat::tsv, true, 9});
    CHECK(text == fixture("survey_background.tsv"));
}

TEST_CASE("golden rendering of the ranked question tables") {
    std::mt19937_64 rng(99);
    for (const char* name : {"ranked_necessary.tsv", "ranked_good_scale.tsv", "ranked_helpful_desc.tsv"}) {
        CAPTURE(name);
        const auto want = fixture(name);
        auto rows = rows_from_table(want);
        CHECK(rows.size() == 25);
        for (int round = 0; round < 5; ++round) {
            std::shuffle(rows.begin(), rows.end(), rng);
            sort_rows(rows);
            CHECK(render_rows(rows, {TableFormat::tsv, false, 8}) == want);
        }
    }
}

TEST_CASE("csv and markdown rendering") {
    std::vector<StatsRow> rows{{"a, b", describe({"a, b", {1, 2, 3}})}};
    const auto csv_text = render_rows(rows, {TableFormat::csv, false, 3});
    CHECK(csv_text == "Questions,count,mean,std,min,25%,50%,75%,max\n\"a, b\",3,2,1,1,1.5,2,2.5,3\n");
    const auto md = render_rows(rows, {TableFormat::markdown, true, 3});
    CHECK(md.find("| Questions | count | mean | skew | kurtosis | std |") == 0);
    CHECK(md.find("undefined") != std::string::npos);
}
