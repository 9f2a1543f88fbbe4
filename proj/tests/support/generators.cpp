#include "generators.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace riskyish::testing {

Entity random_entity(Rng& rng, const Rubric& rubric, double scored_fraction) {
    std::bernoulli_distribution scored(scored_fraction);
    std::uniform_int_distribution<int> level(kMinLevel, kMaxLevel);
    Entity e;
    e.name = random_name(rng);
    for (const auto& d : rubric.dimensions()) {
        if (scored(rng)) e.scores[d.id] = level(rng);
    }
    return e;
}

Entity complete_entity(Rng& rng, const Rubric& rubric) { return random_entity(rng, rubric, 1.0); }

WeightProfile random_weights(Rng& rng, const Rubric& rubric) {
    std::uniform_real_distribution<double> weight(0.0, 5.0);
    std::bernoulli_distribution zero(0.2);
    WeightProfile w{"random", {}};
    for (const auto& d : rubric.dimensions()) w.weights[d.id] = zero(rng) ? 0.0 : weight(rng);
    w.weights[rubric.dimensions()[rng() % rubric.dimension_count()].id] = 1.0 + weight(rng);
    return w;
}

std::vector<ScoreVector> random_integer_vectors(Rng& rng, std::size_t n, std::size_t d) {
    std::uniform_int_distribution<int> level(0, 4);
    std::vector<ScoreVector> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(d);
        for (auto& x : v) x = level(rng);
        out.emplace_back(std::move(v));
    }
    return out;
}

std::string random_name(Rng& rng) {
    static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz ABCXYZ0123456789,\"'-";
    std::uniform_int_distribution<std::size_t> len(1, 16);
    std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
    std::string s;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) s += kAlphabet[pick(rng)];
    if (s.find_first_not_of(' ') == std::string::npos) s = "x" + s;
    return s;
}

IdSource counting_ids(std::string prefix) {
    auto counter = std::make_shared<int>(0);
    return [counter, prefix] {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%03d", (*counter)++);
        return prefix + buf;
    };
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace riskyish::testing
