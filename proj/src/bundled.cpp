#include "riskyish/bundled.hpp"

#include "riskyish/embedded_demo.hpp"
#include "riskyish/embedded_rubric.hpp"
#include "riskyish/json_io.hpp"

namespace riskyish {

std::string_view bundled_rubric_json() { return embedded::rubric_json; }

const Rubric& canonical_rubric() {
    static const Rubric rubric = load_rubric(embedded::rubric_json);
    return rubric;
}

std::vector<Entity> demo_entities() {
    std::vector<Entity> out;
    for (const auto& doc : parse_json(embedded::demo_entities_json, "demo dataset")) {
        out.push_back(entity_from_json(doc));
    }
    return out;
}

} // namespace riskyish
