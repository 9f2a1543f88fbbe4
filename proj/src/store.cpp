#include "riskyish/store.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include "riskyish/json_io.hpp"

namespace riskyish {

using nlohmann::json;

namespace {

constexpr const char* kStoreFormat = "riskyish-store/1";

[[noreturn]] void corrupt(const std::string& detail) { throw Error(ErrorKind::io, "corrupt store", detail); }

} // namespace

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string serialize_store(const EntityStore& store) {
    json doc{{"format", kStoreFormat},
             {"rubric_version", store.rubric_version},
             {"revision", store.revision},
             {"entities", json::array()},
             {"weight_profiles", json::object()}};
    for (const auto& [id, e] : store.entities) doc["entities"].push_back(to_json(e));
    for (const auto& [id, w] : store.weight_profiles) doc["weight_profiles"][id] = to_json(w);
    return doc.dump(2) + "\n";
}

EntityStore load_store(const std::filesystem::path& path, const Rubric& rubric) {
    EntityStore store;
    store.rubric_version = rubric.version();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path)) return store;
        throw Error(ErrorKind::io, "cannot open store", path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        corrupt("byte offset " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) corrupt("top level is not an object");
    if (doc.value("format", std::string{}) != kStoreFormat) corrupt("field 'format': expected " + std::string(kStoreFormat));

    try {
        store.rubric_version = doc.at("rubric_version").get<std::string>();
        store.revision = doc.at("revision").get<std::uint64_t>();
    } catch (const json::exception& e) {
        corrupt(std::string("field 'rubric_version'/'revision': ") + e.what());
    }
    if (store.rubric_version != rubric.version()) {
        corrupt("field 'rubric_version': snapshot uses " + store.rubric_version + ", loaded rubric is " + rubric.version());
    }

    const auto entities = doc.find("entities");
    if (entities == doc.end() || !entities->is_array()) corrupt("field 'entities': missing or not an array");
    for (std::size_t i = 0; i < entities->size(); ++i) {
        const auto field = "entities[" + std::to_string(i) + "]";
        Entity e;
        try {
            e = entity_from_json((*entities)[i]);
        } catch (const Error& err) {
            corrupt("field '" + field + "': " + err.detail());
        }
        if (e.id.empty()) corrupt("field '" + field + ".id': empty");
        if (auto report = validate_entity(e, rubric); !report.empty()) {
            corrupt("field '" + field + "': " + format_report(report));
        }
        if (!store.entities.emplace(e.id, e).second) corrupt("field '" + field + ".id': duplicate id " + e.id);
    }

    const auto profiles = doc.find("weight_profiles");
    if (profiles == doc.end() || !profiles->is_object()) corrupt("field 'weight_profiles': missing or not an object");
    for (const auto& [id, node] : profiles->items()) {
        try {
            store.weight_profiles[id] = weights_from_json(node);
        } catch (const Error& err) {
            corrupt("field 'weight_profiles." + id + "': " + err.detail());
        }
    }
    return store;
}

void commit_store(const EntityStore& store, const std::filesystem::path& path, CommitOptions options) {
    const std::string text = serialize_store(store);
    auto tmp = path;
    tmp += ".tmp";

    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) throw Error(ErrorKind::io, "cannot write store", tmp.string());

    std::size_t limit = text.size();
    if (options.fail_after_bytes) limit = std::min(limit, *options.fail_after_bytes);
    std::size_t written = 0;
    while (written < limit) {
        const ssize_t rc = ::write(fd, text.data() + written, limit - written);
        if (rc <= 0) break;
        written += static_cast<std::size_t>(rc);
    }
    const bool ok = written == text.size() && ::fsync(fd) == 0;
    ::close(fd);
    if (!ok) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::io, "store write failed", "wrote " + std::to_string(written) + " of " +
                                                             std::to_string(text.size()) + " bytes to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::io, "store rename failed", path.string());
    }
}

namespace {

void put_entity(EntityStore& store, Entity& entity, const std::string& now, const IdSource& ids) {
    if (entity.id.empty()) {
        do {
            entity.id = ids();
        } while (store.entities.contains(entity.id));
    }
    if (auto it = store.entities.find(entity.id); it != store.entities.end()) {
        entity.created = it->second.created;
    } else if (entity.created.empty()) {
        entity.created = now;
    }
    entity.modified = now;
    store.entities[entity.id] = entity;
}

} // namespace

std::uint64_t upsert_entity(EntityStore& store, Entity entity, const Rubric& rubric, const Clock& clock,
                            const IdSource& ids) {
    if (auto report = validate_entity(entity, rubric); !report.empty()) {
        throw Error(ErrorKind::validation, "invalid entity", std::move(report));
    }
    put_entity(store, entity, clock(), ids);
    return ++store.revision;
}

std::uint64_t upsert_entities(EntityStore& store, std::vector<Entity>& entities, const Rubric& rubric,
                              const Clock& clock, const IdSource& ids) {
    for (std::size_t i = 0; i < entities.size(); ++i) {
        if (auto report = validate_entity(entities[i], rubric); !report.empty()) {
            throw Error(ErrorKind::validation, "invalid entity at index " + std::to_string(i), std::move(report));
        }
    }
    const std::string now = clock();
    for (auto& e : entities) put_entity(store, e, now, ids);
    return ++store.revision;
}

std::uint64_t delete_entity(EntityStore& store, const std::string& id) {
    if (store.entities.erase(id) == 0) throw Error(ErrorKind::not_found, "unknown entity id", id);
    return ++store.revision;
}

std::uint64_t upsert_weight_profile(EntityStore& store, const std::string& id, WeightProfile weights,
                                    const Rubric& rubric) {
    if (id.empty()) throw Error(ErrorKind::validation, "empty weight profile id");
    if (auto report = validate_weights(weights, rubric); !report.empty()) {
        throw Error(ErrorKind::validation, "invalid weight profile", std::move(report));
    }
    store.weight_profiles[id] = std::move(weights);
    return ++store.revision;
}

std::uint64_t delete_weight_profile(EntityStore& store, const std::string& id) {
    if (store.weight_profiles.erase(id) == 0) throw Error(ErrorKind::not_found, "unknown weight profile id", id);
    return ++store.revision;
}

namespace {

void sort_by_name(std::vector<Entity>& entities) {
    std::sort(entities.begin(), entities.end(), [](const Entity& a, const Entity& b) {
        return a.name != b.name ? a.name < b.name : a.id < b.id;
    });
}

} // namespace

std::vector<Entity> list_entities(const EntityStore& store, const Rubric& rubric, const EntityFilter& filter) {
    std::vector<Entity> out;
    for (const auto& [id, e] : store.entities) {
        if (!filter.name_contains.empty() && e.name.find(filter.name_contains) == std::string::npos) continue;
        if (filter.complete_only && !is_complete(e, rubric)) continue;
        out.push_back(e);
    }
    sort_by_name(out);
    return out;
}

TaxonomySnapshot taxonomy_of(std::vector<Entity> entities, const Rubric& rubric, const TaxonomyOptions& options) {
    sort_by_name(entities);
    if (options.policy == MissingPolicy::answered_only) {
        std::erase_if(entities, [&](const Entity& e) { return !is_complete(e, rubric); });
    }
    const std::size_t eligible = entities.size();
    if (eligible < 2) {
        throw Error(ErrorKind::insufficient_data, "taxonomy needs at least 2 eligible entities",
                    std::to_string(eligible) + " eligible under " + std::string(to_string(options.policy)));
    }
    if (options.k && *options.k == 0) throw Error(ErrorKind::validation, "k must be at least 1");
    if (options.k && *options.k > eligible) {
        throw Error(ErrorKind::insufficient_data, "k exceeds eligible entity count",
                    "k=" + std::to_string(*options.k) + ", eligible=" + std::to_string(eligible));
    }

    std::vector<ScoreVector> vectors;
    vectors.reserve(eligible);
    TaxonomySnapshot snap;
    for (const auto& e : entities) {
        auto v = vectorize(e, rubric, options.policy);
        vectors.push_back(options.weights ? apply_weights(v, *options.weights, rubric) : std::move(v));
        snap.manifest.leaf_ids.push_back(e.id);
        snap.manifest.leaf_names.push_back(e.name);
    }
    snap.linkage = cluster::ward_linkage(cluster::pairwise_distances(vectors));
    if (options.k) snap.labels = cluster::cut_k(snap.linkage, *options.k);
    snap.manifest.rubric_version = rubric.version();
    snap.manifest.policy = options.policy;
    snap.manifest.weights = options.weights;
    snap.manifest.k = options.k;
    return snap;
}

TaxonomySnapshot taxonomy_snapshot(const EntityStore& store, const Rubric& rubric, const TaxonomyOptions& options) {
    std::vector<Entity> entities;
    entities.reserve(store.entities.size());
    for (const auto& [id, e] : store.entities) entities.push_back(e);
    auto snap = taxonomy_of(std::move(entities), rubric, options);
    snap.manifest.revision = store.revision;
    return snap;
}

json to_json(const TaxonomySnapshot& snapshot) {
    const auto& m = snapshot.manifest;
    json manifest{{"leaf_ids", m.leaf_ids},
                  {"leaf_names", m.leaf_names},
                  {"rubric_version", m.rubric_version},
                  {"policy", std::string(to_string(m.policy))},
                  {"weights", m.weights ? to_json(*m.weights) : json(nullptr)},
                  {"k", m.k ? json(*m.k) : json(nullptr)},
                  {"revision", m.revision}};
    return {{"linkage", to_json(snapshot.linkage)},
            {"labels", m.k ? json(snapshot.labels) : json(nullptr)},
            {"manifest", manifest}};
}

StoreService::StoreService(Rubric rubric, std::filesystem::path path, Clock clock)
    : rubric_(std::move(rubric)), path_(std::move(path)), clock_(std::move(clock)) {
    EntityStore initial;
    initial.rubric_version = rubric_.version();
    if (!path_.empty()) initial = load_store(path_, rubric_);
    current_ = std::make_shared<const EntityStore>(std::move(initial));
}

std::shared_ptr<const EntityStore> StoreService::snapshot() const {
    std::lock_guard lock(publish_);
    return current_;
}

std::shared_ptr<const EntityStore> StoreService::mutate(const std::function<void(EntityStore&)>& mutation) {
    std::lock_guard writer(writer_);
    auto next = std::make_shared<EntityStore>(*snapshot());
    mutation(*next);
    if (!path_.empty()) commit_store(*next, path_);
    std::shared_ptr<const EntityStore> published = std::move(next);
    {
        std::lock_guard lock(publish_);
        current_ = published;
    }
    return published;
}

} // namespace riskyish
