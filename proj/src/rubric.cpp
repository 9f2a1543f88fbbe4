#include "riskyish/rubric.hpp"

#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace riskyish {

using nlohmann::json;

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::not_found: return "not_found";
    }
    return "unknown";
}

std::string format_report(const ValidationReport& report) {
    std::string out;
    for (const auto& issue : report) {
        if (!out.empty()) out += "; ";
        out += issue.path.empty() ? issue.message : issue.path + ": " + issue.message;
    }
    return out;
}

namespace {

struct CanonicalClass {
    std::string_view id;
    std::array<std::string_view, 6> dimensions;
    std::size_t count;
};

// Class memberships of the canonical layout, in slot order.
constexpr std::array<CanonicalClass, kCanonicalClassCount> kCanonicalLayout{{
    {"physical", {"size", "locomotion", "manipulation", "adoption", "weaponry"}, 5},
    {"ui_ux", {"human_interaction", "number_of_human_senses"}, 2},
    {"ethical_philosophical",
     {"local_comprehension", "global_comprehension", "decision_making", "contextualization",
      "self_preservation", "complexity"},
     6},
    {"application", {"intended_use", "financial_resources"}, 2},
    {"security_privacy",
     {"susceptible_to_outside_influence", "third_party_dependencies", "data_collection",
      "data_storage", "data_usage"},
     5},
    {"embodiment", {"physicality", "experiential", "emotional", "social", "transcendental"}, 5},
}};

std::string dim_path(std::size_t i) { return "dimensions[" + std::to_string(i) + "]"; }
std::string class_path(std::size_t i) { return "classes[" + std::to_string(i) + "]"; }

void check_canonical(const Rubric& rubric, ValidationReport& report) {
    const auto& classes = rubric.classes();
    const auto& dims = rubric.dimensions();
    if (classes.size() != kCanonicalClassCount) {
        report.push_back({"classes", "class count " + std::to_string(classes.size()) + " ≠ " +
                                         std::to_string(kCanonicalClassCount)});
    }
    if (dims.size() != kCanonicalDimensionCount) {
        report.push_back({"dimensions", "dimension count " + std::to_string(dims.size()) +
                                            " ≠ " + std::to_string(kCanonicalDimensionCount)});
    }
    std::size_t slot = 0;
    for (std::size_t c = 0; c < kCanonicalLayout.size(); ++c) {
        const auto& expected = kCanonicalLayout[c];
        const RubricClass* actual = rubric.find_class(expected.id);
        if (actual == nullptr) {
            report.push_back({"classes", "missing canonical class '" + std::string(expected.id) + "'"});
            slot += expected.count;
            continue;
        }
        std::vector<std::string> want(expected.dimensions.begin(),
                                      expected.dimensions.begin() + static_cast<long>(expected.count));
        if (actual->dimension_ids != want) {
            report.push_back({"classes." + std::string(expected.id),
                              "membership differs from canonical layout"});
        }
        for (std::size_t k = 0; k < expected.count; ++k, ++slot) {
            if (slot < dims.size() && dims[slot].id != expected.dimensions[k]) {
                report.push_back({dim_path(slot), "expected '" + std::string(expected.dimensions[k]) +
                                                      "' at this slot, found '" + dims[slot].id + "'"});
            }
        }
    }
}

template <typename T>
T required(const json& node, const char* key, const std::string& path) {
    auto it = node.find(key);
    if (it == node.end()) {
        throw Error(ErrorKind::validation, "rubric parse failure", path + "." + key + ": missing");
    }
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, "rubric parse failure", path + "." + key + ": " + e.what());
    }
}

} // namespace

Rubric::Rubric(std::string version, std::vector<RubricClass> classes, std::vector<Dimension> dimensions)
    : version_(std::move(version)), classes_(std::move(classes)), dimensions_(std::move(dimensions)) {}

std::optional<std::size_t> Rubric::index_of(std::string_view dimension_id) const {
    for (std::size_t i = 0; i < dimensions_.size(); ++i) {
        if (dimensions_[i].id == dimension_id) return i;
    }
    return std::nullopt;
}

const Dimension* Rubric::find_dimension(std::string_view dimension_id) const {
    auto idx = index_of(dimension_id);
    return idx ? &dimensions_[*idx] : nullptr;
}

const RubricClass* Rubric::find_class(std::string_view class_id) const {
    for (const auto& c : classes_) {
        if (c.id == class_id) return &c;
    }
    return nullptr;
}

ValidationReport validate_rubric(const Rubric& rubric, RubricValidationOptions options) {
    ValidationReport report;
    if (rubric.version().empty()) report.push_back({"version", "empty version"});

    std::set<std::string> dim_ids;
    for (std::size_t i = 0; i < rubric.dimensions().size(); ++i) {
        const auto& d = rubric.dimensions()[i];
        const auto path = dim_path(i);
        if (d.id.empty()) report.push_back({path + ".id", "empty id"});
        if (!dim_ids.insert(d.id).second) report.push_back({path + ".id", "duplicate id '" + d.id + "'"});
        if (d.name.empty()) report.push_back({path + ".name", "empty name"});
        if (d.definition.empty()) report.push_back({path + ".definition", "missing definition for '" + d.id + "'"});
        if (rubric.find_class(d.class_id) == nullptr) {
            report.push_back({path + ".class_id", "unknown class '" + d.class_id + "'"});
        }
        if (d.anchors.size() != static_cast<std::size_t>(kAnchorCount)) {
            report.push_back({path + ".anchors", "anchor count " + std::to_string(d.anchors.size()) +
                                                     " ≠ " + std::to_string(kAnchorCount)});
        }
        std::set<int> levels;
        for (std::size_t a = 0; a < d.anchors.size(); ++a) {
            const auto& anchor = d.anchors[a];
            const auto apath = path + ".anchors[" + std::to_string(a) + "]";
            if (anchor.level < kMinLevel || anchor.level > kMaxLevel) {
                report.push_back({apath, "level " + std::to_string(anchor.level) + " out of range"});
            } else if (anchor.level != static_cast<int>(a)) {
                report.push_back({apath, "anchors not ordered by level"});
            }
            if (!levels.insert(anchor.level).second) {
                report.push_back({apath, "duplicate level " + std::to_string(anchor.level)});
            }
            if (anchor.label.empty()) report.push_back({apath, "empty label"});
        }
    }

    std::set<std::string> class_ids;
    std::map<std::string, std::string> owner;
    for (std::size_t i = 0; i < rubric.classes().size(); ++i) {
        const auto& c = rubric.classes()[i];
        const auto path = class_path(i);
        if (c.id.empty()) report.push_back({path + ".id", "empty id"});
        if (!class_ids.insert(c.id).second) report.push_back({path + ".id", "duplicate id '" + c.id + "'"});
        if (c.name.empty()) report.push_back({path + ".name", "empty name"});
        if (c.definition.empty()) report.push_back({path + ".definition", "missing definition"});
        if (c.dimension_ids.empty()) report.push_back({path + ".dimension_ids", "empty dimension list"});
        for (const auto& id : c.dimension_ids) {
            const Dimension* d = rubric.find_dimension(id);
            if (d == nullptr) {
                report.push_back({path + ".dimension_ids", "unknown dimension '" + id + "'"});
                continue;
            }
            auto [it, inserted] = owner.emplace(id, c.id);
            if (!inserted) {
                report.push_back({path + ".dimension_ids",
                                  "dimension '" + id + "' appears in classes '" + it->second + "' and '" + c.id + "'"});
            } else if (d->class_id != c.id) {
                report.push_back({path + ".dimension_ids",
                                  "dimension '" + id + "' declares class '" + d->class_id + "'"});
            }
        }
    }
    for (const auto& d : rubric.dimensions()) {
        if (!owner.contains(d.id)) report.push_back({"dimensions." + d.id, "dimension not listed by any class"});
    }

    if (options.canonical) check_canonical(rubric, report);
    return report;
}

Rubric load_rubric(std::string_view json_text, RubricValidationOptions options) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::validation, "rubric parse failure", e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::validation, "rubric parse failure", "top level is not an object");

    auto version = required<std::string>(doc, "version", "$");
    std::vector<RubricClass> classes;
    for (const auto& node : required<json>(doc, "classes", "$")) {
        const auto path = class_path(classes.size());
        classes.push_back({required<std::string>(node, "id", path), required<std::string>(node, "name", path),
                           required<std::string>(node, "definition", path),
                           required<std::vector<std::string>>(node, "dimension_ids", path)});
    }
    std::vector<Dimension> dims;
    for (const auto& node : required<json>(doc, "dimensions", "$")) {
        const auto path = dim_path(dims.size());
        Dimension d{required<std::string>(node, "id", path), required<std::string>(node, "name", path),
                    required<std::string>(node, "class_id", path), required<std::string>(node, "definition", path),
                    {}};
        for (const auto& a : required<json>(node, "anchors", path)) {
            const auto apath = path + ".anchors[" + std::to_string(d.anchors.size()) + "]";
            d.anchors.push_back({required<int>(a, "level", apath), required<std::string>(a, "label", apath)});
        }
        dims.push_back(std::move(d));
    }

    Rubric rubric(std::move(version), std::move(classes), std::move(dims));
    auto report = validate_rubric(rubric, options);
    if (!report.empty()) throw Error(ErrorKind::validation, "invalid rubric", std::move(report));
    return rubric;
}

Rubric load_rubric_file(const std::string& path, RubricValidationOptions options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open rubric file", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_rubric(buf.str(), options);
}

std::string export_rubric_json(const Rubric& rubric) {
    json doc;
    doc["version"] = rubric.version();
    doc["classes"] = json::array();
    for (const auto& c : rubric.classes()) {
        doc["classes"].push_back(
            {{"id", c.id}, {"name", c.name}, {"definition", c.definition}, {"dimension_ids", c.dimension_ids}});
    }
    doc["dimensions"] = json::array();
    for (const auto& d : rubric.dimensions()) {
        json anchors = json::array();
        for (const auto& a : d.anchors) anchors.push_back({{"level", a.level}, {"label", a.label}});
        doc["dimensions"].push_back({{"id", d.id},
                                     {"name", d.name},
                                     {"class_id", d.class_id},
                                     {"definition", d.definition},
                                     {"anchors", anchors}});
    }
    return doc.dump(2) + "\n";
}

std::string export_lexicon_markdown(const Rubric& rubric) {
    std::ostringstream out;
    out << "# Lexicon (rubric v" << rubric.version() << ")\n\n";
    out << "- **Dimension**: a specific characteristic or defining feature, scored 0 (lowest) to 4 (highest).\n";
    out << "- **Class**: a group of dimensions. This rubric has " << rubric.dimension_count() << " dimensions in "
        << rubric.classes().size() << " classes.\n\n";
    out << "Scores are in riskyishness units (also written \"riskiness\"): "
           "a higher level means more associated risk.\n\n";

    int class_no = 1;
    for (const auto& c : rubric.classes()) {
        out << "## " << class_no++ << ". " << c.name << " Class\n\n" << c.definition << "\n\n";
        int dim_no = 1;
        for (const auto& id : c.dimension_ids) {
            const Dimension* d = rubric.find_dimension(id);
            if (d == nullptr) continue;
            out << dim_no++ << ". **" << d->name << "** (`" << d->id << "`) - " << d->definition << "\n";
        }
        out << "\n";
    }

    out << "## Scale anchors\n\n";
    out << "| Class | Dimension | 0 Lowest | 1 | 2 | 3 | 4 Highest |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const auto& c : rubric.classes()) {
        bool first = true;
        for (const auto& id : c.dimension_ids) {
            const Dimension* d = rubric.find_dimension(id);
            if (d == nullptr) continue;
            out << "| " << (first ? c.name : "") << " | " << d->name;
            for (const auto& a : d->anchors) out << " | " << a.label;
            out << " |\n";
            first = false;
        }
    }
    return out.str();
}

const std::string& lookup_anchor(const Rubric& rubric, std::string_view dimension_id, int level) {
    const Dimension* d = rubric.find_dimension(dimension_id);
    if (d == nullptr) throw Error(ErrorKind::not_found, "unknown dimension", std::string(dimension_id));
    if (level < kMinLevel || level > kMaxLevel) {
        throw Error(ErrorKind::validation, "level out of range", std::to_string(level));
    }
    for (const auto& a : d->anchors) {
        if (a.level == level) return a.label;
    }
    throw Error(ErrorKind::validation, "level out of range", std::to_string(level));
}

} // namespace riskyish
