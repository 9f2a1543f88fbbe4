#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>

#include <json.hpp>

#include "riskyish/cluster.hpp"

namespace riskyish::cluster {

CondensedDistanceMatrix::CondensedDistanceMatrix(std::size_t n, std::vector<double> distances)
    : n_(n), d_(std::move(distances)) {
    const std::size_t expected = n < 2 ? 0 : n * (n - 1) / 2;
    if (d_.size() != expected) {
        throw Error(ErrorKind::validation, "condensed matrix length mismatch",
                    std::to_string(d_.size()) + " != " + std::to_string(expected));
    }
    for (double v : d_) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::validation, "negative or non-finite distance");
    }
}

double CondensedDistanceMatrix::at(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return d_[index(n_, i, j)];
}

ValidationReport validate_linkage(const Linkage& linkage) {
    ValidationReport report;
    const std::size_t n = linkage.n;
    if (n < 2) {
        report.push_back({"n", "linkage needs at least 2 leaves"});
        return report;
    }
    if (linkage.steps.size() != n - 1) {
        report.push_back({"steps", "expected " + std::to_string(n - 1) + " steps, got " +
                                       std::to_string(linkage.steps.size())});
        return report;
    }
    std::vector<std::size_t> size(2 * n - 1, 0);
    std::fill(size.begin(), size.begin() + static_cast<long>(n), 1);
    std::vector<bool> used(2 * n - 1, false);
    for (std::size_t t = 0; t < linkage.steps.size(); ++t) {
        const auto& st = linkage.steps[t];
        const auto path = "steps[" + std::to_string(t) + "]";
        const std::size_t created = n + t;
        bool ids_ok = true;
        for (std::size_t id : {st.left, st.right}) {
            if (id >= created) {
                report.push_back({path, "child id " + std::to_string(id) + " not yet created"});
                ids_ok = false;
            } else if (used[id]) {
                report.push_back({path, "child id " + std::to_string(id) + " used twice"});
                ids_ok = false;
            }
        }
        if (st.left == st.right) {
            report.push_back({path, "left == right"});
            ids_ok = false;
        }
        if (!(st.height >= 0.0) || !std::isfinite(st.height)) report.push_back({path, "invalid height"});
        if (t > 0 && st.height < linkage.steps[t - 1].height) report.push_back({path, "height decreases"});
        if (!ids_ok) continue;
        used[st.left] = used[st.right] = true;
        size[created] = size[st.left] + size[st.right];
        if (st.size != size[created]) report.push_back({path, "size " + std::to_string(st.size) + " != " +
                                                                   std::to_string(size[created])});
    }
    return report;
}

namespace {

void require_valid(const Linkage& linkage) {
    auto report = validate_linkage(linkage);
    if (!report.empty()) throw Error(ErrorKind::validation, "invalid linkage", std::move(report));
}

// Smallest leaf id under every cluster id.
std::vector<std::size_t> min_leaf(const Linkage& linkage) {
    const std::size_t n = linkage.n;
    std::vector<std::size_t> out(2 * n - 1);
    std::iota(out.begin(), out.begin() + static_cast<long>(n), 0);
    for (std::size_t t = 0; t < linkage.steps.size(); ++t) {
        out[n + t] = std::min(out[linkage.steps[t].left], out[linkage.steps[t].right]);
    }
    return out;
}

std::pair<std::size_t, std::size_t> ordered_children(const Linkage& linkage, const std::vector<std::size_t>& mins,
                                                     std::size_t id) {
    const auto& st = linkage.steps[id - linkage.n];
    return mins[st.left] <= mins[st.right] ? std::pair{st.left, st.right} : std::pair{st.right, st.left};
}

double height_of(const Linkage& linkage, std::size_t id) {
    return id < linkage.n ? 0.0 : linkage.steps[id - linkage.n].height;
}

std::string format_length(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string out = buf;
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
    if (out == "-0") out = "0";
    return out;
}

void check_names(const Linkage& linkage, std::span<const std::string> names) {
    if (names.size() != linkage.n) {
        throw Error(ErrorKind::validation, "leaf name count mismatch",
                    std::to_string(names.size()) + " != " + std::to_string(linkage.n));
    }
    std::set<std::string_view> seen(names.begin(), names.end());
    if (seen.size() != names.size()) throw Error(ErrorKind::validation, "leaf names not distinct");
}

std::string newick_label(const std::string& name) {
    if (name.find_first_of(" ()[]':;,\t\r\n") == std::string::npos && !name.empty()) return name;
    std::string out = "'";
    for (char ch : name) {
        if (ch == '\'') out += '\'';
        out += ch;
    }
    return out + "'";
}

} // namespace

std::vector<std::size_t> cut_k(const Linkage& linkage, std::size_t k) {
    require_valid(linkage);
    const std::size_t n = linkage.n;
    if (k < 1 || k > n) {
        throw Error(ErrorKind::insufficient_data, "k out of range",
                    "k=" + std::to_string(k) + " with " + std::to_string(n) + " leaves");
    }
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t t = 0; t < n - k; ++t) {
        parent[find(linkage.steps[t].left)] = n + t;
        parent[find(linkage.steps[t].right)] = n + t;
    }
    std::vector<std::size_t> labels(n);
    std::vector<std::size_t> label_of_root(2 * n - 1, static_cast<std::size_t>(-1));
    std::size_t next = 0;
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        auto& label = label_of_root[find(leaf)];
        if (label == static_cast<std::size_t>(-1)) label = next++;
        labels[leaf] = label;
    }
    return labels;
}

CondensedDistanceMatrix cophenetic(const Linkage& linkage) {
    require_valid(linkage);
    const std::size_t n = linkage.n;
    std::vector<std::vector<std::size_t>> members(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};
    std::vector<double> d(n * (n - 1) / 2, 0.0);
    for (std::size_t t = 0; t < linkage.steps.size(); ++t) {
        const auto& st = linkage.steps[t];
        for (std::size_t a : members[st.left]) {
            for (std::size_t b : members[st.right]) {
                d[CondensedDistanceMatrix::index(n, std::min(a, b), std::max(a, b))] = st.height;
            }
        }
        auto& merged = members[n + t];
        merged = std::move(members[st.left]);
        merged.insert(merged.end(), members[st.right].begin(), members[st.right].end());
        members[st.right].clear();
    }
    return CondensedDistanceMatrix(n, std::move(d));
}

std::vector<std::size_t> leaf_order(const Linkage& linkage) {
    require_valid(linkage);
    const auto mins = min_leaf(linkage);
    std::vector<std::size_t> order;
    std::vector<std::size_t> stack{2 * linkage.n - 2};
    while (!stack.empty()) {
        const std::size_t id = stack.back();
        stack.pop_back();
        if (id < linkage.n) {
            order.push_back(id);
            continue;
        }
        auto [first, second] = ordered_children(linkage, mins, id);
        stack.push_back(second);
        stack.push_back(first);
    }
    return order;
}

std::string to_newick(const Linkage& linkage, std::span<const std::string> leaf_names) {
    require_valid(linkage);
    check_names(linkage, leaf_names);
    const auto mins = min_leaf(linkage);
    std::function<std::string(std::size_t, double)> emit = [&](std::size_t id, double parent_height) {
        const double branch = parent_height - height_of(linkage, id);
        std::string body;
        if (id < linkage.n) {
            body = newick_label(leaf_names[id]);
        } else {
            auto [first, second] = ordered_children(linkage, mins, id);
            const double h = height_of(linkage, id);
            body = "(" + emit(first, h) + "," + emit(second, h) + ")";
        }
        return body + ":" + format_length(branch);
    };
    const std::size_t root = 2 * linkage.n - 2;
    auto [first, second] = ordered_children(linkage, mins, root);
    const double h = height_of(linkage, root);
    return "(" + emit(first, h) + "," + emit(second, h) + ");";
}

std::string render_ascii(const Linkage& linkage, std::span<const std::string> leaf_names, int width) {
    require_valid(linkage);
    check_names(linkage, leaf_names);
    if (width < 4) throw Error(ErrorKind::validation, "render width too small");
    const std::size_t n = linkage.n;
    const auto mins = min_leaf(linkage);
    const auto order = leaf_order(linkage);
    const double hmax = linkage.steps.back().height;

    std::vector<std::size_t> row(2 * n - 1);
    std::vector<int> col(2 * n - 1, 0);
    for (std::size_t r = 0; r < order.size(); ++r) row[order[r]] = r;
    for (std::size_t t = 0; t < linkage.steps.size(); ++t) {
        const std::size_t id = n + t;
        auto [first, second] = ordered_children(linkage, mins, id);
        row[id] = row[first];
        const double h = linkage.steps[t].height;
        col[id] = hmax > 0.0 ? 1 + static_cast<int>(std::lround(h / hmax * (width - 1))) : 1;
        (void)second;
    }

    std::vector<std::string> grid(n, std::string(static_cast<std::size_t>(width) + 1, ' '));
    for (std::size_t t = 0; t < linkage.steps.size(); ++t) {
        const std::size_t id = n + t;
        const int x = col[id];
        auto [first, second] = ordered_children(linkage, mins, id);
        for (std::size_t child : {first, second}) {
            auto& line = grid[row[child]];
            for (int c = (child < n ? 0 : col[child] + 1); c < x; ++c) line[static_cast<std::size_t>(c)] = '-';
            line[static_cast<std::size_t>(x)] = '+';
        }
        for (std::size_t r = row[first] + 1; r < row[second]; ++r) {
            auto& cell = grid[r][static_cast<std::size_t>(x)];
            if (cell == ' ') cell = '|';
        }
    }

    std::size_t pad = 0;
    for (const auto& name : leaf_names) pad = std::max(pad, name.size());
    std::string out;
    for (std::size_t r = 0; r < n; ++r) {
        std::string line = leaf_names[order[r]];
        line.append(pad - line.size() + 1, ' ');
        line += grid[r];
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    out += "height 0 .. " + format_length(hmax) + "\n";
    return out;
}

std::string linkage_to_json(const Linkage& linkage) {
    nlohmann::json doc;
    doc["n"] = linkage.n;
    doc["steps"] = nlohmann::json::array();
    for (const auto& st : linkage.steps) {
        doc["steps"].push_back({{"left", st.left}, {"right", st.right}, {"height", st.height}, {"size", st.size}});
    }
    return doc.dump();
}

Linkage linkage_from_json(const std::string& text) {
    Linkage linkage;
    try {
        const auto doc = nlohmann::json::parse(text);
        linkage.n = doc.at("n").get<std::size_t>();
        for (const auto& st : doc.at("steps")) {
            linkage.steps.push_back({st.at("left").get<std::size_t>(), st.at("right").get<std::size_t>(),
                                     st.at("height").get<double>(), st.at("size").get<std::size_t>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::validation, "linkage parse failure", e.what());
    }
    require_valid(linkage);
    return linkage;
}

} // namespace riskyish::cluster
