#include "riskyish/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

#include "riskyish/csv.hpp"

namespace riskyish {

std::string_view to_string(MissingPolicy policy) {
    return policy == MissingPolicy::zero_impute ? "zero_impute" : "answered_only";
}

MissingPolicy parse_missing_policy(std::string_view text) {
    if (text == "zero" || text == "zero_impute") return MissingPolicy::zero_impute;
    if (text == "answered" || text == "answered_only") return MissingPolicy::answered_only;
    throw Error(ErrorKind::validation, "unknown missing policy", std::string(text));
}

ValidationReport validate_entity(const Entity& entity, const Rubric& rubric) {
    ValidationReport report;
    if (entity.name.empty()) report.push_back({"name", "empty name"});
    for (const auto& [dim, score] : entity.scores) {
        const auto path = "scores." + dim;
        if (!rubric.index_of(dim)) {
            report.push_back({path, "unknown dimension '" + dim + "'"});
        } else if (score < kMinLevel || score > kMaxLevel) {
            report.push_back({path, "score " + std::to_string(score) + " out of range 0..4"});
        }
    }
    return report;
}

ValidationReport validate_weights(const WeightProfile& weights, const Rubric& rubric) {
    ValidationReport report;
    bool any_positive = false;
    for (const auto& [dim, w] : weights.weights) {
        const auto path = "weights." + dim;
        if (!rubric.index_of(dim)) report.push_back({path, "unknown dimension '" + dim + "'"});
        if (!std::isfinite(w) || w < 0.0) {
            report.push_back({path, "weight must be a finite non-negative number"});
        } else if (w > 0.0) {
            any_positive = true;
        }
    }
    if (!any_positive) report.push_back({"weights", "at least one weight must be positive"});
    return report;
}

bool is_complete(const Entity& entity, const Rubric& rubric) {
    return std::all_of(rubric.dimensions().begin(), rubric.dimensions().end(),
                       [&](const Dimension& d) { return entity.scores.contains(d.id); });
}

namespace {

void require_valid(const Entity& entity, const Rubric& rubric) {
    auto report = validate_entity(entity, rubric);
    if (!report.empty()) throw Error(ErrorKind::validation, "invalid entity", std::move(report));
}

} // namespace

ScoreVector vectorize(const Entity& entity, const Rubric& rubric, MissingPolicy policy) {
    require_valid(entity, rubric);
    if (policy == MissingPolicy::answered_only && !is_complete(entity, rubric)) {
        throw Error(ErrorKind::validation, "incomplete entity",
                    "entity '" + entity.name + "' leaves dimensions unscored");
    }
    std::vector<double> values(rubric.dimension_count(), 0.0);
    for (const auto& [dim, score] : entity.scores) values[*rubric.index_of(dim)] = score;
    return ScoreVector(std::move(values));
}

RiskyishnessScore riskyishness_score(const Entity& entity, const Rubric& rubric, const WeightProfile* weights,
                                     MissingPolicy policy) {
    require_valid(entity, rubric);
    if (weights != nullptr) {
        auto report = validate_weights(*weights, rubric);
        if (!report.empty()) throw Error(ErrorKind::validation, "invalid weight profile", std::move(report));
    }

    RiskyishnessScore result;
    result.policy = policy;
    result.answered_count = static_cast<int>(entity.scores.size());
    if (policy == MissingPolicy::answered_only && entity.scores.empty()) {
        throw Error(ErrorKind::validation, "no scored dimensions", "answered_only needs at least one score");
    }

    double weighted_sum = 0.0;
    double weight_total = 0.0;
    for (const auto& d : rubric.dimensions()) {
        auto it = entity.scores.find(d.id);
        const bool scored = it != entity.scores.end();
        if (!scored && policy == MissingPolicy::answered_only) continue;
        double w = 1.0;
        if (weights != nullptr) {
            auto wit = weights->weights.find(d.id);
            w = wit == weights->weights.end() ? 0.0 : wit->second;
        }
        weighted_sum += w * (scored ? it->second : 0);
        weight_total += w;
    }
    if (weight_total <= 0.0) {
        throw Error(ErrorKind::validation, "weights sum to zero over the included dimensions");
    }
    result.value = std::clamp(weighted_sum / weight_total, 0.0, static_cast<double>(kMaxLevel));
    result.normalized = result.value * 25.0;
    return result;
}

ScoreVector apply_weights(const ScoreVector& vector, const WeightProfile& weights, const Rubric& rubric) {
    auto report = validate_weights(weights, rubric);
    if (!report.empty()) throw Error(ErrorKind::validation, "invalid weight profile", std::move(report));
    if (vector.size() != rubric.dimension_count()) {
        throw Error(ErrorKind::validation, "vector length does not match rubric");
    }
    std::vector<double> out(vector.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto it = weights.weights.find(rubric.dimensions()[i].id);
        const double w = it == weights.weights.end() ? 0.0 : it->second;
        out[i] = vector[i] * std::sqrt(w);
    }
    return ScoreVector(std::move(out));
}

std::string generate_entity_id() {
    thread_local std::mt19937_64 engine{std::random_device{}()};
    char buf[24];
    std::snprintf(buf, sizeof buf, "ent_%016llx", static_cast<unsigned long long>(engine()));
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

} // namespace

CsvImportResult import_entities_csv(std::string_view text, const Rubric& rubric, const IdSource& ids) {
    auto rows = csv::parse(text);
    csv::Row expected{"name"};
    for (const auto& d : rubric.dimensions()) expected.push_back(d.id);
    if (rows.empty() || rows.front() != expected) {
        throw Error(ErrorKind::validation, "csv header mismatch",
                    "expected: " + std::string(csv::format_row(expected).substr(0, 200)));
    }

    CsvImportResult result;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != expected.size()) {
            result.errors.push_back({r, "expected " + std::to_string(expected.size()) + " cells, got " +
                                            std::to_string(row.size())});
            continue;
        }
        Entity e;
        e.name = row[0];
        std::string problem;
        if (trim(e.name).empty()) problem = "empty name";
        for (std::size_t c = 1; c < row.size() && problem.empty(); ++c) {
            const auto cell = trim(row[c]);
            if (cell.empty()) continue;
            int value = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                problem = expected[c] + ": not an integer '" + std::string(cell) + "'";
            } else if (value < kMinLevel || value > kMaxLevel) {
                problem = expected[c] + ": score " + std::to_string(value) + " out of range 0..4";
            } else {
                e.scores[expected[c]] = value;
            }
        }
        if (!problem.empty()) {
            result.errors.push_back({r, problem});
            continue;
        }
        e.id = ids();
        result.entities.push_back(std::move(e));
        result.entity_rows.push_back(r);
    }
    return result;
}

std::string export_entities_csv(std::vector<Entity> entities, const Rubric& rubric) {
    std::sort(entities.begin(), entities.end(), [](const Entity& a, const Entity& b) { return a.id < b.id; });
    csv::Row header{"name"};
    for (const auto& d : rubric.dimensions()) header.push_back(d.id);
    std::string out = csv::format_row(header);
    for (const auto& e : entities) {
        csv::Row row{e.name};
        for (const auto& d : rubric.dimensions()) {
            auto it = e.scores.find(d.id);
            row.push_back(it == e.scores.end() ? "" : std::to_string(it->second));
        }
        out += csv::format_row(row);
    }
    return out;
}

} // namespace riskyish
