#pragma once

#include <filesystem>
#include <string>

#include "dqkit/diagram.hpp"

namespace dqkit::testing {

inline std::filesystem::path data_dir() { return DQKIT_DATA_DIR; }
inline std::filesystem::path golden_dir() { return DQKIT_GOLDEN_DIR; }

std::string read_text(const std::filesystem::path& path);

/// G ~ {good: p_good, bad}, D in {accept, reject} uninformed,
/// V(accept, good) = 50, V(accept, bad) = -70, V(reject, .) = 0.
InfluenceDiagram widget_diagram(double p_good = 0.02);

/// Widget diagram plus a noiseless test T = G that D does not observe.
InfluenceDiagram widget_with_test();

/// S ~ Bernoulli(0.5), d in {s0, s1}, value 1 when d matches S.
/// With `observed` the decision is informed by S.
InfluenceDiagram perfect_information(bool observed = false);

/// i -> s, d informed by i, value on (s, d): the informed-decision shape.
InfluenceDiagram informed_decision();

/// One decision {a, b} with value(a) = 3, value(b) = 5 and no chance nodes.
InfluenceDiagram constant_decision();

} // namespace dqkit::testing
