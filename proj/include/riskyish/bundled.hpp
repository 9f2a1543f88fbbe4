#pragma once

#include <string_view>
#include <vector>

#include "riskyish/scoring.hpp"

namespace riskyish {

/// Raw text of the bundled rubric document.
std::string_view bundled_rubric_json();

/// Thirteen illustrative entities (voice assistants, robots, a drone,
/// algorithms, ...) scored by hand against the canonical rubric. Demo data,
/// not survey data.
std::vector<Entity> demo_entities();

} // namespace riskyish
