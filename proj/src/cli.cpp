#include "riskyish/cli.hpp"

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "riskyish/api.hpp"
#include "riskyish/bundled.hpp"
#include "riskyish/json_io.hpp"
#include "riskyish/stats.hpp"
#include "riskyish/store.hpp"

namespace riskyish {

using nlohmann::json;

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return 1;
    case ErrorKind::validation:
    case ErrorKind::not_found: return 2;
    case ErrorKind::io: return 3;
    case ErrorKind::insufficient_data: return 4;
    }
    return 3;
}

namespace {

std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::io, "cannot open file", path);
    buf << file.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text)) throw Error(ErrorKind::io, "cannot write file", path);
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Entity names, suffixed with the id where two names collide.
std::vector<std::string> leaf_labels(const TaxonomyManifest& m) {
    std::multiset<std::string> seen(m.leaf_names.begin(), m.leaf_names.end());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m.leaf_names.size(); ++i) {
        out.push_back(seen.count(m.leaf_names[i]) > 1 ? m.leaf_names[i] + " [" + m.leaf_ids[i] + "]" : m.leaf_names[i]);
    }
    return out;
}

struct Globals {
    std::string store_path = "riskyish-store.json";
    std::string rubric_path;
};

struct TaxonomyArgs {
    std::optional<std::size_t> k;
    std::string policy = "zero_impute";
    std::string weights_path;
    std::string input_csv;
    bool demo = false;
};

void add_taxonomy_flags(CLI::App* cmd, TaxonomyArgs& a) {
    cmd->add_option("--policy", a.policy, "Missing-dimension policy: zero|zero_impute|answered|answered_only")
        ->envname("RISKYISH_POLICY");
    cmd->add_option("--weights", a.weights_path, "Weight profile JSON; coordinates are scaled by sqrt(weight)");
    cmd->add_option("--input", a.input_csv, "Cluster entities from this CSV instead of the store");
    cmd->add_flag("--demo", a.demo, "Cluster the bundled demo dataset instead of the store");
}

TaxonomySnapshot compute_taxonomy(const TaxonomyArgs& a, const Rubric& rubric, const Globals& g, std::istream& in) {
    TaxonomyOptions options;
    options.k = a.k;
    options.policy = parse_missing_policy(a.policy);
    if (!a.weights_path.empty()) options.weights = weights_from_json(parse_json(read_input(a.weights_path, in), "weights"));
    if (a.demo) return taxonomy_of(demo_entities(), rubric, options);
    if (!a.input_csv.empty()) {
        auto parsed = import_entities_csv(read_input(a.input_csv, in), rubric);
        if (!parsed.errors.empty()) {
            throw Error(ErrorKind::validation, "invalid rows in input csv",
                        "row " + std::to_string(parsed.errors.front().row) + ": " + parsed.errors.front().message);
        }
        return taxonomy_of(std::move(parsed.entities), rubric, options);
    }
    return taxonomy_snapshot(load_store(g.store_path, rubric), rubric, options);
}

std::atomic<HttpServer*> g_running_server{nullptr};

extern "C" void handle_stop_signal(int) {
    if (auto* s = g_running_server.load()) s->stop();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Riskyishness scoring, taxonomy, and survey statistics", "riskyish"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--store", g.store_path, "Store snapshot file")->envname("RISKYISH_STORE");
    app.add_option("--rubric", g.rubric_path, "Rubric JSON (default: bundled v0.0.3)")->envname("RISKYISH_RUBRIC");

    // score
    auto* score = app.add_subcommand("score", "Score one entity document");
    std::string entity_path, score_weights, score_policy = "zero_impute", score_format = "json";
    score->add_option("entity", entity_path, "Entity JSON file ('-' for stdin)")->required();
    score->add_option("--weights", score_weights, "Weight profile JSON");
    score->add_option("--policy", score_policy, "zero|zero_impute|answered|answered_only")->envname("RISKYISH_POLICY");
    score->add_option("--format", score_format, "json|text")->check(CLI::IsMember({"json", "text"}));

    // import / export
    auto* import = app.add_subcommand("import", "Import entities from CSV into the store");
    std::string import_path;
    import->add_option("csv", import_path, "CSV file ('-' for stdin)")->required();

    auto* exporter = app.add_subcommand("export", "Export the store as CSV");
    std::string export_out;
    exporter->add_option("--out", export_out, "Write to this file instead of standard output");

    // cluster
    auto* cluster_cmd = app.add_subcommand("cluster", "Ward clustering of entities");
    TaxonomyArgs cluster_args;
    std::string linkage_out;
    cluster_cmd->add_option("--k", cluster_args.k, "Cut the tree into K clusters");
    cluster_cmd->add_option("--out", linkage_out, "Also write the linkage JSON to this file");
    add_taxonomy_flags(cluster_cmd, cluster_args);

    // dendrogram
    auto* dendro = app.add_subcommand("dendrogram", "Render the clustering dendrogram");
    TaxonomyArgs dendro_args;
    std::string dendro_format = "ascii";
    int dendro_width = 48;
    dendro->add_option("--format", dendro_format, "ascii|newick|json")->check(CLI::IsMember({"ascii", "newick", "json"}));
    dendro->add_option("--width", dendro_width, "ASCII width in columns")->check(CLI::Range(4, 400));
    add_taxonomy_flags(dendro, dendro_args);

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics of coded survey responses");
    std::string stats_path, stats_format = "json", stats_layout = "rows", stats_order = "mean";
    bool stats_moments = false, stats_freq = false;
    int stats_decimals = 9;
    stats_cmd->add_option("responses", stats_path, "CSV, one column per question, blank = skipped")->required();
    stats_cmd->add_option("--format", stats_format, "json|csv|tsv|markdown")
        ->check(CLI::IsMember({"json", "csv", "tsv", "markdown"}));
    stats_cmd->add_option("--layout", stats_layout, "rows (one row per question) | columns (one column per question)")
        ->check(CLI::IsMember({"rows", "columns"}));
    stats_cmd->add_option("--order", stats_order, "mean (descending) | input (file column order)")
        ->check(CLI::IsMember({"mean", "input"}));
    stats_cmd->add_flag("--moments", stats_moments, "Include skew and kurtosis in tables");
    stats_cmd->add_option("--decimals", stats_decimals, "Decimals in tables (trailing zeros trimmed)")->check(CLI::Range(0, 17));
    stats_cmd->add_flag("--frequencies", stats_freq, "Include frequency tables (json only)");

    // rubric
    auto* rubric_cmd = app.add_subcommand("rubric", "Print the rubric");
    bool lexicon = false;
    std::vector<std::string> anchor;
    rubric_cmd->add_flag("--lexicon", lexicon, "Markdown lexicon and anchor matrix instead of JSON");
    rubric_cmd->add_option("--anchor", anchor, "DIMENSION LEVEL: print one anchor label")->expected(2);

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP API under /api/v1");
    std::string host = "127.0.0.1";
    int port = 8080;
    bool seed_demo = false;
    serve->add_option("--host", host, "Listen address")->envname("RISKYISH_HOST");
    serve->add_option("--port", port, "Listen port")->envname("RISKYISH_PORT")->check(CLI::Range(0, 65535));
    serve->add_flag("--demo", seed_demo, "Seed the bundled demo dataset when the store is empty");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : exit_code(ErrorKind::usage);
    }

    try {
        const Rubric rubric = g.rubric_path.empty() ? canonical_rubric() : load_rubric_file(g.rubric_path);

        if (*score) {
            const auto entity = entity_from_json(parse_json(read_input(entity_path, in), "entity"));
            std::optional<WeightProfile> weights;
            if (!score_weights.empty()) weights = weights_from_json(parse_json(read_input(score_weights, in), "weights"));
            const auto result = riskyishness_score(entity, rubric, weights ? &*weights : nullptr,
                                                   parse_missing_policy(score_policy));
            if (score_format == "text") {
                out << "value " << fixed2(result.value) << "\n"
                    << "normalized " << fixed2(result.normalized) << "\n"
                    << "answered_count " << result.answered_count << "\n"
                    << "policy " << to_string(result.policy) << "\n";
            } else {
                out << to_json(result).dump() << "\n";
            }
            return 0;
        }

        if (*import) {
            auto parsed = import_entities_csv(read_input(import_path, in), rubric);
            auto store = load_store(g.store_path, rubric);
            if (!parsed.entities.empty()) {
                upsert_entities(store, parsed.entities, rubric);
                commit_store(store, g.store_path);
            }
            json rows = json::array();
            for (std::size_t i = 0; i < parsed.entities.size(); ++i) {
                rows.push_back({{"row", parsed.entity_rows[i]}, {"status", "imported"}, {"id", parsed.entities[i].id}});
            }
            for (const auto& e : parsed.errors) {
                rows.push_back({{"row", e.row}, {"status", "error"}, {"message", e.message}});
                err << "row " << e.row << ": " << e.message << "\n";
            }
            std::sort(rows.begin(), rows.end(), [](const json& a, const json& b) { return a["row"] < b["row"]; });
            out << json{{"revision", store.revision},
                        {"imported", parsed.entities.size()},
                        {"failed", parsed.errors.size()},
                        {"rows", rows}}
                       .dump()
                << "\n";
            return parsed.errors.empty() ? 0 : exit_code(ErrorKind::validation);
        }

        if (*exporter) {
            const auto store = load_store(g.store_path, rubric);
            std::vector<Entity> list;
            for (const auto& [id, e] : store.entities) list.push_back(e);
            const auto text = export_entities_csv(std::move(list), rubric);
            if (export_out.empty()) {
                out << text;
            } else {
                write_file(export_out, text);
            }
            return 0;
        }

        if (*cluster_cmd) {
            const auto snap = compute_taxonomy(cluster_args, rubric, g, in);
            if (!linkage_out.empty()) write_file(linkage_out, cluster::linkage_to_json(snap.linkage) + "\n");
            out << to_json(snap).dump() << "\n";
            return 0;
        }

        if (*dendro) {
            const auto snap = compute_taxonomy(dendro_args, rubric, g, in);
            const auto names = leaf_labels(snap.manifest);
            if (dendro_format == "ascii") {
                out << cluster::render_ascii(snap.linkage, names, dendro_width);
            } else if (dendro_format == "newick") {
                out << cluster::to_newick(snap.linkage, names) << "\n";
            } else {
                out << cluster::linkage_to_json(snap.linkage) << "\n";
            }
            return 0;
        }

        if (*stats_cmd) {
            const auto samples = stats::parse_responses_csv(read_input(stats_path, in));
            std::vector<stats::SampleSet> non_empty;
            for (const auto& s : samples) {
                if (s.values.empty()) {
                    err << "skipping question with no responses: " << s.label << "\n";
                } else {
                    non_empty.push_back(s);
                }
            }
            std::vector<std::pair<stats::StatsRow, const stats::SampleSet*>> rows;
            for (const auto& s : non_empty) rows.push_back({{s.label, stats::describe(s)}, &s});
            if (stats_order == "mean") {
                std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                    if (a.first.stats.mean != b.first.stats.mean) return a.first.stats.mean > b.first.stats.mean;
                    return a.first.label < b.first.label;
                });
            }
            if (stats_format == "json") {
                json list = json::array();
                for (const auto& [row, sample] : rows) {
                    json item{{"label", row.label}, {"stats", to_json(row.stats)}};
                    if (stats_freq) {
                        json freq = json::array();
                        for (const auto& [value, f] : stats::frequency_table(*sample)) {
                            freq.push_back({{"value", value}, {"count", f.count}, {"percentage", f.percentage}});
                        }
                        item["frequencies"] = freq;
                    }
                    list.push_back(item);
                }
                out << json{{"rows", list}}.dump() << "\n";
            } else {
                stats::TableStyle style;
                style.format = stats_format == "csv"   ? stats::TableFormat::csv
                               : stats_format == "tsv" ? stats::TableFormat::tsv
                                                       : stats::TableFormat::markdown;
                style.moments = stats_moments;
                style.decimals = stats_decimals;
                std::vector<stats::StatsRow> table;
                for (const auto& r : rows) table.push_back(r.first);
                out << (stats_layout == "rows" ? stats::render_rows(table, style) : stats::render_columns(table, style));
            }
            return 0;
        }

        if (*rubric_cmd) {
            if (!anchor.empty()) {
                int level = 0;
                try {
                    level = std::stoi(anchor[1]);
                } catch (const std::exception&) {
                    throw Error(ErrorKind::usage, "level must be an integer", anchor[1]);
                }
                out << lookup_anchor(rubric, anchor[0], level) << "\n";
            } else {
                out << (lexicon ? export_lexicon_markdown(rubric) : export_rubric_json(rubric));
            }
            return 0;
        }

        if (*serve) {
            StoreService service(rubric, g.store_path);
            if (seed_demo && service.snapshot()->entities.empty()) {
                service.mutate([&](EntityStore& s) {
                    auto demo = demo_entities();
                    upsert_entities(s, demo, rubric);
                });
                err << "seeded " << service.snapshot()->entities.size() << " demo entities\n";
            }
            HttpServer server(service);
            g_running_server = &server;
            std::signal(SIGINT, handle_stop_signal);
            std::signal(SIGTERM, handle_stop_signal);
            err << "listening on http://" << host << ":" << port << "/api/v1 (store " << g.store_path << ")\n";
            server.run(host, port);
            g_running_server = nullptr;
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what();
        if (!e.detail().empty()) err << ": " << e.detail();
        err << "\n";
        return exit_code(e.kind());
    }
    return exit_code(ErrorKind::usage);
}

} // namespace riskyish
