#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskyish/cluster.hpp"
#include "riskyish/scoring.hpp"

namespace riskyish {

/// Snapshot of all persisted data. `revision` goes up by exactly one per
/// committed mutation.
struct EntityStore {
    std::map<std::string, Entity> entities;
    std::map<std::string, WeightProfile> weight_profiles;
    std::string rubric_version;
    std::uint64_t revision = 0;

    bool operator==(const EntityStore&) const = default;
};

/// ISO-8601 UTC timestamp source; injectable for tests.
using Clock = std::function<std::string()>;
std::string utc_now();

/// Missing file -> empty store at revision 0. Throws Error(io) naming the
/// byte offset or field for a corrupt file, or when the snapshot was written
/// against a different rubric version.
EntityStore load_store(const std::filesystem::path& path, const Rubric& rubric);

struct CommitOptions {
    // Fault injection: abort after writing this many bytes of the temp file.
    std::optional<std::size_t> fail_after_bytes;
};

/// Writes a temp file next to `path` and renames it over the old snapshot.
/// On failure the previous snapshot is untouched.
void commit_store(const EntityStore& store, const std::filesystem::path& path, CommitOptions options = {});

std::string serialize_store(const EntityStore& store);

/// Inserts or replaces; an empty id gets a generated one. Preserves
/// `created` on replace. Returns the new revision.
std::uint64_t upsert_entity(EntityStore& store, Entity entity, const Rubric& rubric,
                            const Clock& clock = utc_now, const IdSource& ids = generate_entity_id);
/// Batch upsert counted as one mutation (one revision). All entities are
/// validated first; generated ids are written back into `entities`.
std::uint64_t upsert_entities(EntityStore& store, std::vector<Entity>& entities, const Rubric& rubric,
                              const Clock& clock = utc_now, const IdSource& ids = generate_entity_id);
std::uint64_t delete_entity(EntityStore& store, const std::string& id);

std::uint64_t upsert_weight_profile(EntityStore& store, const std::string& id, WeightProfile weights,
                                    const Rubric& rubric);
std::uint64_t delete_weight_profile(EntityStore& store, const std::string& id);

struct EntityFilter {
    std::string name_contains;  // case-sensitive substring, empty = all
    bool complete_only = false;
};

/// Ordered by name, then id.
std::vector<Entity> list_entities(const EntityStore& store, const Rubric& rubric, const EntityFilter& filter = {});

struct TaxonomyOptions {
    std::optional<std::size_t> k;
    MissingPolicy policy = MissingPolicy::zero_impute;
    std::optional<WeightProfile> weights;
};

struct TaxonomyManifest {
    std::vector<std::string> leaf_ids;  // leaf index -> entity id
    std::vector<std::string> leaf_names;
    std::string rubric_version;
    MissingPolicy policy = MissingPolicy::zero_impute;
    std::optional<WeightProfile> weights;
    std::optional<std::size_t> k;
    std::uint64_t revision = 0;
};

struct TaxonomySnapshot {
    cluster::Linkage linkage;
    std::vector<std::size_t> labels;  // empty unless k was given
    TaxonomyManifest manifest;
};

/// Clusters the eligible entities (all under zero_impute, complete ones under
/// answered_only) in list_entities order. Throws Error(insufficient_data) with
/// fewer than 2 eligible entities or k above that count.
TaxonomySnapshot taxonomy_snapshot(const EntityStore& store, const Rubric& rubric, const TaxonomyOptions& options);

/// Same, over an explicit entity list (no store); revision is reported as 0.
TaxonomySnapshot taxonomy_of(std::vector<Entity> entities, const Rubric& rubric, const TaxonomyOptions& options);

nlohmann::json to_json(const TaxonomySnapshot& snapshot);

/// Thread-safe owner of the live store: concurrent readers take immutable
/// snapshots, mutations serialize through one writer and are committed to
/// disk before they become visible.
class StoreService {
public:
    /// Empty path keeps the store in memory only.
    StoreService(Rubric rubric, std::filesystem::path path, Clock clock = utc_now);

    const Rubric& rubric() const noexcept { return rubric_; }
    std::shared_ptr<const EntityStore> snapshot() const;

    /// Applies `mutation` to a copy, commits it, then publishes it. Returns
    /// the published snapshot. Exceptions leave the store unchanged.
    std::shared_ptr<const EntityStore> mutate(const std::function<void(EntityStore&)>& mutation);

    const Clock& clock() const noexcept { return clock_; }

private:
    Rubric rubric_;
    std::filesystem::path path_;
    Clock clock_;
    std::mutex writer_;
    mutable std::mutex publish_;
    std::shared_ptr<const EntityStore> current_;
};

} // namespace riskyish
