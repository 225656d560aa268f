#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "dqkit/json.hpp"
#include "dqkit/roc.hpp"

namespace dqkit {

/// Parses the `score,label` CSV format (LF or CRLF, label in {0,1}).
/// Throws FormatError citing the offending 1-based line. Single-class data
/// parses fine; check ScoredDataset::single_class().
ScoredDataset parse_scored_csv(std::string_view text);
ScoredDataset load_scored_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal scores, LF line endings.
std::string format_scored_csv(const ScoredDataset& data);
void write_scored_csv(const std::filesystem::path& path, const ScoredDataset& data);

/// Synthetic widget acceptance line: each widget is good with probability
/// p_good and its test score is drawn from the Gaussian of its class.
struct WidgetLineConfig {
    std::int64_t n_cases = 1000;
    double p_good = 0.5;
    double good_score_mean = 1.0;
    double bad_score_mean = 0.0;
    double score_stddev = 1.0;
    std::uint64_t seed = 0;

    /// Throws ConfigError.
    void validate() const;
};

WidgetLineConfig widget_config_from_json(const Json& json);
Json widget_config_to_json(const WidgetLineConfig& cfg);

/// Deterministic for a given config: the seed drives a mt19937_64 stream
/// and scores come from a Box-Muller transform of it. Good widgets are the
/// positive class.
ScoredDataset generate_widget_line(const WidgetLineConfig& cfg);

} // namespace dqkit
