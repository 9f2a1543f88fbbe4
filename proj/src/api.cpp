#include "riskyish/api.hpp"

#include <charconv>

#include "riskyish/json_io.hpp"
#include "riskyish/stats.hpp"

namespace riskyish {

using nlohmann::json;

int http_status(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::validation: return 400;
    case ErrorKind::not_found: return 404;
    case ErrorKind::insufficient_data: return 409;
    case ErrorKind::io: return 500;
    }
    return 500;
}

namespace {

constexpr std::string_view kPrefix = "/api/v1";

ApiResponse json_response(const json& body, int status = 200) { return {status, body.dump(), "application/json"}; }

ApiResponse error_response(const Error& e) {
    json body{{"code", to_string(e.kind())}, {"message", e.what()}, {"detail", e.detail()}};
    if (!e.report().empty()) body["issues"] = to_json(e.report());
    return json_response(body, http_status(e.kind()));
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto end = path.find('/', start);
        const auto part = path.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!part.empty()) parts.emplace_back(part);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return parts;
}

std::optional<std::string> query_value(const ApiRequest& r, const std::string& key) {
    auto it = r.query.find(key);
    if (it == r.query.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

std::size_t parse_count(const std::string& text, const char* what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::validation, std::string("invalid ") + what, text);
    }
    return v;
}

json entity_envelope(const Entity& e, std::uint64_t revision) { return {{"revision", revision}, {"entity", to_json(e)}}; }

ApiResponse not_found_route(const ApiRequest& r) {
    return error_response(Error(ErrorKind::not_found, "no such route", r.method + " " + r.path));
}

} // namespace

ApiResponse Api::handle(const ApiRequest& r) const {
    try {
        if (!std::string_view(r.path).starts_with(kPrefix)) return not_found_route(r);
        const auto parts = split_path(std::string_view(r.path).substr(kPrefix.size()));
        if (parts.empty()) return not_found_route(r);
        const Rubric& rubric = service_.rubric();
        const std::string& root = parts[0];

        if (root == "rubric" && parts.size() == 1 && r.method == "GET") {
            return {200, export_rubric_json(rubric), "application/json"};
        }

        if (root == "entities") {
            if (parts.size() == 1 && r.method == "GET") {
                auto snap = service_.snapshot();
                EntityFilter filter;
                filter.name_contains = query_value(r, "name").value_or("");
                filter.complete_only = query_value(r, "complete").value_or("0") == "1";
                json list = json::array();
                for (const auto& e : list_entities(*snap, rubric, filter)) list.push_back(to_json(e));
                return json_response({{"revision", snap->revision}, {"entities", list}});
            }
            if (parts.size() == 1 && r.method == "POST") {
                auto entity = entity_from_json(parse_json(r.body, "entity"));
                auto snap = service_.mutate([&](EntityStore& s) {
                    if (entity.id.empty()) {
                        do {
                            entity.id = generate_entity_id();
                        } while (s.entities.contains(entity.id));
                    } else if (s.entities.contains(entity.id)) {
                        throw Error(ErrorKind::validation, "entity id already exists", entity.id);
                    }
                    upsert_entity(s, entity, rubric, service_.clock());
                });
                const std::string& id = entity.id;
                return json_response(entity_envelope(snap->entities.at(id), snap->revision), 201);
            }
            if (parts.size() == 2) {
                const std::string& id = parts[1];
                if (r.method == "GET") {
                    auto snap = service_.snapshot();
                    auto it = snap->entities.find(id);
                    if (it == snap->entities.end()) throw Error(ErrorKind::not_found, "unknown entity id", id);
                    return json_response(entity_envelope(it->second, snap->revision));
                }
                if (r.method == "PUT") {
                    auto entity = entity_from_json(parse_json(r.body, "entity"));
                    if (!entity.id.empty() && entity.id != id) {
                        throw Error(ErrorKind::validation, "body id does not match path id", entity.id);
                    }
                    entity.id = id;
                    auto snap = service_.mutate([&](EntityStore& s) { upsert_entity(s, entity, rubric, service_.clock()); });
                    return json_response(entity_envelope(snap->entities.at(id), snap->revision));
                }
                if (r.method == "DELETE") {
                    auto snap = service_.mutate([&](EntityStore& s) { delete_entity(s, id); });
                    return json_response({{"revision", snap->revision}, {"deleted", id}});
                }
            }
        }

        if (root == "score" && parts.size() == 1 && r.method == "POST") {
            const auto body = parse_json(r.body, "score request");
            if (!body.is_object()) throw Error(ErrorKind::validation, "score request must be an object");
            const auto entity = entity_from_json(body.contains("entity") ? body.at("entity") : body);
            std::optional<WeightProfile> weights;
            if (auto it = body.find("weights"); it != body.end() && !it->is_null()) weights = weights_from_json(*it);
            auto policy = MissingPolicy::zero_impute;
            if (auto it = body.find("policy"); it != body.end() && it->is_string()) {
                policy = parse_missing_policy(it->get<std::string>());
            }
            return json_response(to_json(riskyishness_score(entity, rubric, weights ? &*weights : nullptr, policy)));
        }

        if (root == "taxonomy" && parts.size() == 1 && r.method == "GET") {
            auto snap = service_.snapshot();
            TaxonomyOptions options;
            if (auto k = query_value(r, "k")) options.k = parse_count(*k, "k");
            if (auto p = query_value(r, "policy")) options.policy = parse_missing_policy(*p);
            if (auto w = query_value(r, "weights")) {
                auto it = snap->weight_profiles.find(*w);
                if (it == snap->weight_profiles.end()) throw Error(ErrorKind::not_found, "unknown weight profile id", *w);
                options.weights = it->second;
            }
            return json_response(to_json(taxonomy_snapshot(*snap, rubric, options)));
        }

        if (root == "import" && parts.size() == 2 && parts[1] == "csv" && r.method == "POST") {
            auto parsed = import_entities_csv(r.body, rubric);
            std::uint64_t revision = service_.snapshot()->revision;
            if (!parsed.entities.empty()) {
                revision = service_.mutate([&](EntityStore& s) {
                               upsert_entities(s, parsed.entities, rubric, service_.clock());
                           })->revision;
            }
            std::map<std::size_t, json> by_row;
            for (std::size_t i = 0; i < parsed.entities.size(); ++i) {
                by_row[parsed.entity_rows[i]] = {{"row", parsed.entity_rows[i]}, {"status", "imported"}, {"id", parsed.entities[i].id}};
            }
            for (const auto& err : parsed.errors) {
                by_row[err.row] = {{"row", err.row}, {"status", "error"}, {"message", err.message}};
            }
            json rows = json::array();
            for (auto& [row, item] : by_row) rows.push_back(std::move(item));
            return json_response({{"revision", revision},
                                  {"imported", parsed.entities.size()},
                                  {"failed", parsed.errors.size()},
                                  {"rows", rows}});
        }

        if (root == "stats" && parts.size() == 1 && r.method == "GET") {
            auto snap = service_.snapshot();
            std::vector<stats::SampleSet> samples;
            json unscored = json::array();
            for (const auto& d : rubric.dimensions()) {
                stats::SampleSet set{d.id, {}};
                for (const auto& [id, e] : snap->entities) {
                    if (auto it = e.scores.find(d.id); it != e.scores.end()) set.values.push_back(it->second);
                }
                if (set.values.empty()) {
                    unscored.push_back(d.id);
                } else {
                    samples.push_back(std::move(set));
                }
            }
            json rows = json::array();
            for (const auto& row : stats::describe_matrix(samples)) {
                rows.push_back({{"label", row.label}, {"stats", to_json(row.stats)}});
            }
            return json_response({{"revision", snap->revision}, {"rows", rows}, {"unscored", unscored}});
        }

        if (root == "export" && parts.size() == 2 && parts[1] == "csv" && r.method == "GET") {
            auto snap = service_.snapshot();
            std::vector<Entity> list;
            for (const auto& [id, e] : snap->entities) list.push_back(e);
            return {200, export_entities_csv(std::move(list), rubric), "text/csv"};
        }

        if (root == "weights") {
            if (parts.size() == 1 && r.method == "GET") {
                auto snap = service_.snapshot();
                json profiles = json::object();
                for (const auto& [id, w] : snap->weight_profiles) profiles[id] = to_json(w);
                return json_response({{"revision", snap->revision}, {"weight_profiles", profiles}});
            }
            if (parts.size() == 2) {
                const std::string& id = parts[1];
                if (r.method == "GET") {
                    auto snap = service_.snapshot();
                    auto it = snap->weight_profiles.find(id);
                    if (it == snap->weight_profiles.end()) throw Error(ErrorKind::not_found, "unknown weight profile id", id);
                    return json_response({{"revision", snap->revision}, {"weights", to_json(it->second)}});
                }
                if (r.method == "PUT") {
                    auto w = weights_from_json(parse_json(r.body, "weight profile"));
                    auto snap = service_.mutate([&](EntityStore& s) { upsert_weight_profile(s, id, w, rubric); });
                    return json_response({{"revision", snap->revision}, {"weights", to_json(snap->weight_profiles.at(id))}});
                }
                if (r.method == "DELETE") {
                    auto snap = service_.mutate([&](EntityStore& s) { delete_weight_profile(s, id); });
                    return json_response({{"revision", snap->revision}, {"deleted", id}});
                }
            }
        }
        return not_found_route(r);
    } catch (const Error& e) {
        return error_response(e);
    } catch (const std::exception& e) {
        return error_response(Error(ErrorKind::io, "internal error", e.what()));
    }
}

} // namespace riskyish
