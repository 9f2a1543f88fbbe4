#include "riskyish/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "riskyish/csv.hpp"
#include "riskyish/error.hpp"

namespace riskyish::stats {

double percentile(std::span<const double> sorted_values, double p) {
    if (sorted_values.empty()) throw Error(ErrorKind::validation, "percentile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::validation, "percentile fraction outside [0,1]");
    if (!std::is_sorted(sorted_values.begin(), sorted_values.end())) {
        throw Error(ErrorKind::validation, "percentile input not sorted");
    }
    const double rank = static_cast<double>(sorted_values.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    const double frac = rank - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

DescriptiveStats describe(const SampleSet& sample) {
    const auto& x = sample.values;
    if (x.empty()) throw Error(ErrorKind::validation, "empty sample", sample.label);
    if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorKind::validation, "non-finite value in sample", sample.label);
    }

    DescriptiveStats s;
    s.count = x.size();
    const double n = static_cast<double>(x.size());

    double sum = 0.0;
    for (double v : x) sum += v;
    s.mean = sum / n;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double ss = m2;
    m2 /= n;
    m3 /= n;
    m4 /= n;

    if (s.count >= 2) s.std = std::sqrt(ss / (n - 1.0));
    if (m2 > 0.0) {
        if (s.count >= 3) s.skew = std::sqrt(n * (n - 1.0)) / (n - 2.0) * m3 / std::pow(m2, 1.5);
        if (s.count >= 4) {
            s.kurtosis = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * (m4 / (m2 * m2) - 3.0) + 6.0);
        }
    }

    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.q25 = percentile(sorted, 0.25);
    s.median = percentile(sorted, 0.5);
    s.q75 = percentile(sorted, 0.75);
    return s;
}

std::map<double, Frequency> frequency_table(const SampleSet& sample) {
    if (sample.values.empty()) throw Error(ErrorKind::validation, "empty sample", sample.label);
    std::map<double, Frequency> table;
    for (double v : sample.values) ++table[v].count;
    const double n = static_cast<double>(sample.values.size());
    for (auto& [value, f] : table) f.percentage = std::round(static_cast<double>(f.count) * 10000.0 / n) / 100.0;
    return table;
}

void sort_rows(std::vector<StatsRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const StatsRow& a, const StatsRow& b) {
        if (a.stats.mean != b.stats.mean) return a.stats.mean > b.stats.mean;
        return a.label < b.label;
    });
}

std::vector<StatsRow> describe_matrix(const std::vector<SampleSet>& questions) {
    std::vector<StatsRow> rows;
    rows.reserve(questions.size());
    for (const auto& q : questions) rows.push_back({q.label, describe(q)});
    sort_rows(rows);
    return rows;
}

std::vector<SampleSet> parse_responses_csv(std::string_view text) {
    auto rows = csv::parse(text);
    if (rows.empty()) throw Error(ErrorKind::validation, "responses csv has no header");
    std::vector<SampleSet> sets;
    for (const auto& label : rows.front()) sets.push_back({label, {}});
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() > sets.size()) {
            throw Error(ErrorKind::validation, "responses csv row wider than header", "row " + std::to_string(r));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::string_view cell = row[c];
            while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
            while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
            if (cell.empty()) continue;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw Error(ErrorKind::validation, "non-numeric response",
                            "row " + std::to_string(r) + ", column '" + sets[c].label + "': '" + std::string(cell) + "'");
            }
            sets[c].values.push_back(v);
        }
    }
    return sets;
}

std::string format_number(std::optional<double> value, int decimals) {
    if (!value) return "undefined";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, *value);
    std::string out = buf;
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    if (out == "-0") out = "0";
    return out;
}

namespace {

struct Column {
    const char* name;
    std::optional<double> (*get)(const DescriptiveStats&);
};

std::vector<Column> columns(bool moments) {
    std::vector<Column> cols{
        {"count", [](const DescriptiveStats& s) -> std::optional<double> { return static_cast<double>(s.count); }},
        {"mean", [](const DescriptiveStats& s) -> std::optional<double> { return s.mean; }},
    };
    if (moments) {
        cols.push_back({"skew", [](const DescriptiveStats& s) { return s.skew; }});
        cols.push_back({"kurtosis", [](const DescriptiveStats& s) { return s.kurtosis; }});
    }
    cols.push_back({"std", [](const DescriptiveStats& s) { return s.std; }});
    cols.push_back({"min", [](const DescriptiveStats& s) -> std::optional<double> { return s.min; }});
    cols.push_back({"25%", [](const DescriptiveStats& s) -> std::optional<double> { return s.q25; }});
    cols.push_back({"50%", [](const DescriptiveStats& s) -> std::optional<double> { return s.median; }});
    cols.push_back({"75%", [](const DescriptiveStats& s) -> std::optional<double> { return s.q75; }});
    cols.push_back({"max", [](const DescriptiveStats& s) -> std::optional<double> { return s.max; }});
    return cols;
}

std::string emit(const std::vector<std::string>& cells, TableFormat format) {
    std::string out;
    switch (format) {
    case TableFormat::csv:
        return csv::format_row(cells);
    case TableFormat::tsv:
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "\t" : "") + cells[i];
        return out + "\n";
    case TableFormat::markdown:
        out = "|";
        for (const auto& c : cells) out += " " + c + " |";
        return out + "\n";
    }
    return out;
}

std::string markdown_rule(std::size_t n) {
    std::string out = "|";
    for (std::size_t i = 0; i < n; ++i) out += "---|";
    return out + "\n";
}

} // namespace

std::string render_rows(const std::vector<StatsRow>& rows, const TableStyle& style) {
    const auto cols = columns(style.moments);
    std::vector<std::string> header{"Questions"};
    for (const auto& c : cols) header.push_back(c.name);
    std::string out = emit(header, style.format);
    if (style.format == TableFormat::markdown) out += markdown_rule(header.size());
    for (const auto& row : rows) {
        std::vector<std::string> cells{row.label};
        for (const auto& c : cols) cells.push_back(format_number(c.get(row.stats), style.decimals));
        out += emit(cells, style.format);
    }
    return out;
}

std::string render_columns(const std::vector<StatsRow>& rows, const TableStyle& style) {
    std::vector<std::string> header{""};
    for (const auto& row : rows) header.push_back(row.label);
    std::string out = emit(header, style.format);
    if (style.format == TableFormat::markdown) out += markdown_rule(header.size());
    for (const auto& c : columns(style.moments)) {
        std::vector<std::string> cells{c.name};
        for (const auto& row : rows) cells.push_back(format_number(c.get(row.stats), style.decimals));
        out += emit(cells, style.format);
    }
    return out;
}

} // namespace riskyish::stats
