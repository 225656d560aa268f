#pragma once

#include <nlohmann/json.hpp>

namespace dqkit {

// Insertion-ordered so every emitted document has a stable field order.
using Json = nlohmann::ordered_json;

} // namespace dqkit
