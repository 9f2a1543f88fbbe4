#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace riskyish::stats {

/// Coded responses to one question; n varies as respondents skip.
struct SampleSet {
    std::string label;
    std::vector<double> values;
};

/// One row of a descriptive table. `std` needs n >= 2; `skew` needs n >= 3
/// and `kurtosis` n >= 4, both with non-zero variance. Undefined moments are
/// nullopt, never 0.
struct DescriptiveStats {
    std::size_t count = 0;
    double mean = 0.0;
    std::optional<double> std;
    std::optional<double> skew;      // adjusted Fisher-Pearson
    std::optional<double> kurtosis;  // bias-corrected excess
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

DescriptiveStats describe(const SampleSet& sample);

/// Linear interpolation at rank (n-1)p over sorted values.
double percentile(std::span<const double> sorted_values, double p);

struct Frequency {
    std::size_t count = 0;
    double percentage = 0.0;  // rounded to two decimals

    bool operator==(const Frequency&) const = default;
};

std::map<double, Frequency> frequency_table(const SampleSet& sample);

struct StatsRow {
    std::string label;
    DescriptiveStats stats;
};

/// Descending mean; equal means ordered by label (byte order).
void sort_rows(std::vector<StatsRow>& rows);

/// describe() per question, then sort_rows().
std::vector<StatsRow> describe_matrix(const std::vector<SampleSet>& questions);

/// One column per question, blank cells skipped. Throws Error(validation)
/// on a non-numeric cell.
std::vector<SampleSet> parse_responses_csv(std::string_view text);

enum class TableFormat { csv, tsv, markdown };

struct TableStyle {
    TableFormat format = TableFormat::csv;
    bool moments = false;  // add skew and kurtosis after mean
    int decimals = 8;
};

/// Fixed `decimals`, trailing zeros removed; "undefined" for nullopt.
std::string format_number(std::optional<double> value, int decimals);

/// One row per question: Questions, count, mean, [skew, kurtosis,] std, min, 25%, 50%, 75%, max.
std::string render_rows(const std::vector<StatsRow>& rows, const TableStyle& style);

/// Transposed layout: one column per question, one line per statistic.
std::string render_columns(const std::vector<StatsRow>& rows, const TableStyle& style);

} // namespace riskyish::stats
