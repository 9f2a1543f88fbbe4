#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskyish/error.hpp"

namespace riskyish {

inline constexpr int kMinLevel = 0;
inline constexpr int kMaxLevel = 4;
inline constexpr int kAnchorCount = kMaxLevel - kMinLevel + 1;

inline constexpr std::size_t kCanonicalClassCount = 6;
inline constexpr std::size_t kCanonicalDimensionCount = 25;
inline constexpr std::string_view kCanonicalRubricVersion = "0.0.3";

struct ScaleAnchor {
    int level = 0;
    std::string label;

    bool operator==(const ScaleAnchor&) const = default;
};

struct Dimension {
    std::string id;
    std::string name;
    std::string class_id;
    std::string definition;
    std::vector<ScaleAnchor> anchors;

    bool operator==(const Dimension&) const = default;
};

struct RubricClass {
    std::string id;
    std::string name;
    std::string definition;
    std::vector<std::string> dimension_ids;

    bool operator==(const RubricClass&) const = default;
};

/// The scoring rubric. Immutable after load; dimension order defines
/// ScoreVector slot order.
class Rubric {
public:
    Rubric() = default;
    Rubric(std::string version, std::vector<RubricClass> classes, std::vector<Dimension> dimensions);

    const std::string& version() const noexcept { return version_; }
    const std::vector<RubricClass>& classes() const noexcept { return classes_; }
    const std::vector<Dimension>& dimensions() const noexcept { return dimensions_; }
    std::size_t dimension_count() const noexcept { return dimensions_.size(); }

    /// Slot of a dimension in ScoreVector order, or nullopt.
    std::optional<std::size_t> index_of(std::string_view dimension_id) const;
    const Dimension* find_dimension(std::string_view dimension_id) const;
    const RubricClass* find_class(std::string_view class_id) const;

    bool operator==(const Rubric& other) const {
        return version_ == other.version_ && classes_ == other.classes_ &&
               dimensions_ == other.dimensions_;
    }

private:
    std::string version_;
    std::vector<RubricClass> classes_;
    std::vector<Dimension> dimensions_;
};

struct RubricValidationOptions {
    // Enforce the 6-class / 25-dimension layout and its class memberships.
    bool canonical = true;
};

/// Empty report iff every rubric invariant holds.
ValidationReport validate_rubric(const Rubric& rubric, RubricValidationOptions options = {});

/// Parses a rubric JSON document and validates it. Throws Error(validation)
/// on parse failure or invariant violation.
Rubric load_rubric(std::string_view json_text, RubricValidationOptions options = {});
Rubric load_rubric_file(const std::string& path, RubricValidationOptions options = {});

/// The bundled canonical rubric (version 0.0.3).
const Rubric& canonical_rubric();

std::string export_rubric_json(const Rubric& rubric);

/// Human-readable lexicon (class and dimension definitions plus the anchor
/// matrix) in Markdown.
std::string export_lexicon_markdown(const Rubric& rubric);

/// Anchor label for (dimension, level), verbatim.
const std::string& lookup_anchor(const Rubric& rubric, std::string_view dimension_id, int level);

} // namespace riskyish
