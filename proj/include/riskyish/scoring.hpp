#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskyish/error.hpp"
#include "riskyish/rubric.hpp"

namespace riskyish {

/// How dimensions an entity leaves unscored enter aggregation.
enum class MissingPolicy {
    zero_impute,    // unscored -> 0 (level 0 anchors denote absence)
    answered_only,  // only scored dimensions count; vectors must be complete
};

std::string_view to_string(MissingPolicy policy);
/// Accepts "zero", "zero_impute", "answered", "answered_only".
MissingPolicy parse_missing_policy(std::string_view text);

/// A scored technology. Dimensions absent from `scores` are unscored.
struct Entity {
    std::string id;
    std::string name;
    std::optional<std::string> description;
    std::map<std::string, int> scores;
    std::string created;
    std::string modified;

    bool operator==(const Entity&) const = default;
};

/// Dense score vector in rubric slot order.
class ScoreVector {
public:
    ScoreVector() = default;
    explicit ScoreVector(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    bool operator==(const ScoreVector&) const = default;

private:
    std::vector<double> values_;
};

/// Per-dimension non-negative weights. Dimensions not listed weigh 0.
struct WeightProfile {
    std::string name;
    std::map<std::string, double> weights;

    bool operator==(const WeightProfile&) const = default;
};

struct RiskyishnessScore {
    double value = 0.0;       // [0, 4]
    double normalized = 0.0;  // value * 25
    int answered_count = 0;
    MissingPolicy policy = MissingPolicy::zero_impute;
};

ValidationReport validate_entity(const Entity& entity, const Rubric& rubric);
ValidationReport validate_weights(const WeightProfile& weights, const Rubric& rubric);

/// Throws Error(validation) when the entity does not validate, or when an
/// answered_only vector would be incomplete ("incomplete entity").
ScoreVector vectorize(const Entity& entity, const Rubric& rubric,
                      MissingPolicy policy = MissingPolicy::zero_impute);

/// Arithmetic (or weighted) mean over the included dimension set.
RiskyishnessScore riskyishness_score(const Entity& entity, const Rubric& rubric,
                                     const WeightProfile* weights = nullptr,
                                     MissingPolicy policy = MissingPolicy::zero_impute);

/// Multiplies each coordinate by sqrt(weight) so Euclidean distances become
/// weighted distances.
ScoreVector apply_weights(const ScoreVector& vector, const WeightProfile& weights, const Rubric& rubric);

/// True when every rubric dimension carries a score.
bool is_complete(const Entity& entity, const Rubric& rubric);

using IdSource = std::function<std::string()>;

/// Opaque random id, e.g. "ent_3f9a0c21d4b7e615".
std::string generate_entity_id();

struct CsvRowError {
    std::size_t row = 0;  // 1-based data row (header is row 0)
    std::string message;

    bool operator==(const CsvRowError&) const = default;
};

struct CsvImportResult {
    std::vector<Entity> entities;
    std::vector<std::size_t> entity_rows;  // source row of each entity
    std::vector<CsvRowError> errors;
};

/// Header must be exactly `name` followed by the rubric dimension ids in
/// slot order. Blank cells are unscored. Bad rows are collected, good rows
/// returned. Header mismatch throws Error(validation).
CsvImportResult import_entities_csv(std::string_view text, const Rubric& rubric,
                                    const IdSource& ids = generate_entity_id);

/// Canonical header plus one row per entity, ordered by entity id.
std::string export_entities_csv(std::vector<Entity> entities, const Rubric& rubric);

} // namespace riskyish
