#include "riskyish/json_io.hpp"

#include <cmath>

namespace riskyish {

using nlohmann::json;

nlohmann::json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::validation, std::string(what) + " parse failure",
                    "byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

json to_json(const Entity& e) {
    json doc{{"id", e.id}, {"name", e.name}, {"scores", json::object()}, {"created", e.created},
             {"modified", e.modified}};
    if (e.description) doc["description"] = *e.description;
    for (const auto& [dim, score] : e.scores) doc["scores"][dim] = score;
    return doc;
}

namespace {

std::string optional_string(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return {};
    if (!it->is_string()) throw Error(ErrorKind::validation, "invalid entity document", std::string(key) + ": not a string");
    return it->get<std::string>();
}

} // namespace

Entity entity_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::validation, "invalid entity document", "not an object");
    Entity e;
    e.id = optional_string(doc, "id");
    e.name = optional_string(doc, "name");
    e.created = optional_string(doc, "created");
    e.modified = optional_string(doc, "modified");
    if (auto it = doc.find("description"); it != doc.end() && !it->is_null()) e.description = optional_string(doc, "description");
    if (auto it = doc.find("scores"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) throw Error(ErrorKind::validation, "invalid entity document", "scores: not an object");
        for (const auto& [dim, value] : it->items()) {
            if (value.is_null()) continue;
            if (value.is_number_integer()) {
                e.scores[dim] = value.get<int>();
            } else if (value.is_number_float() && std::floor(value.get<double>()) == value.get<double>() &&
                       std::abs(value.get<double>()) < 1e6) {
                e.scores[dim] = static_cast<int>(value.get<double>());
            } else {
                throw Error(ErrorKind::validation, "invalid entity document", "scores." + dim + ": not an integer");
            }
        }
    }
    return e;
}

json to_json(const WeightProfile& w) {
    json doc{{"name", w.name}, {"weights", json::object()}};
    for (const auto& [dim, value] : w.weights) doc["weights"][dim] = value;
    return doc;
}

WeightProfile weights_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::validation, "invalid weight profile", "not an object");
    WeightProfile w;
    try {
        w.name = doc.value("name", std::string{});
        for (const auto& [dim, value] : doc.at("weights").items()) w.weights[dim] = value.get<double>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, "invalid weight profile", e.what());
    }
    return w;
}

json to_json(const RiskyishnessScore& s) {
    return {{"value", s.value}, {"normalized", s.normalized}, {"answered_count", s.answered_count},
            {"policy", std::string(to_string(s.policy))}};
}

json to_json(const cluster::Linkage& linkage) {
    json steps = json::array();
    for (const auto& st : linkage.steps) {
        steps.push_back({{"left", st.left}, {"right", st.right}, {"height", st.height}, {"size", st.size}});
    }
    return {{"n", linkage.n}, {"steps", steps}};
}

json to_json(const stats::DescriptiveStats& s) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json("undefined"); };
    return {{"count", s.count}, {"mean", s.mean},   {"std", opt(s.std)}, {"skew", opt(s.skew)},
            {"kurtosis", opt(s.kurtosis)}, {"min", s.min}, {"25%", s.q25}, {"50%", s.median},
            {"75%", s.q75}, {"max", s.max}};
}

json to_json(const ValidationReport& report) {
    json out = json::array();
    for (const auto& issue : report) out.push_back({{"path", issue.path}, {"message", issue.message}});
    return out;
}

} // namespace riskyish
