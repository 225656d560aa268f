#include "dqkit/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace dqkit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

ScoredCase parse_row(std::string_view line, std::size_t line_no) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
        throw FormatError("expected two fields 'score,label'", line_no);
    const auto score_text = trim(line.substr(0, comma));
    const auto label_text = trim(line.substr(comma + 1));

    double score = 0.0;
    const auto [end, ec] = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
    if (score_text.empty() || ec != std::errc{} || end != score_text.data() + score_text.size())
        throw FormatError("score '" + std::string(score_text) + "' is not a number", line_no);
    if (!std::isfinite(score)) throw FormatError("score is not finite", line_no);

    if (label_text != "0" && label_text != "1")
        throw FormatError("label '" + std::string(label_text) + "' must be 0 or 1", line_no);
    return {score, label_text == "1"};
}

} // namespace

ScoredDataset parse_scored_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    if (trim(text).empty()) throw FormatError("empty input; expected header 'score,label'", 1);

    std::vector<ScoredCase> cases;
    std::size_t line_no = 0;
    bool saw_blank = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto raw = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        const auto line = trim(raw);
        if (line_no == 1) {
            if (line != "score,label") throw FormatError("header must be 'score,label'", 1);
            continue;
        }
        if (line.empty()) {
            saw_blank = true;
            continue;
        }
        if (saw_blank) throw FormatError("data row after a blank line", line_no);
        cases.push_back(parse_row(line, line_no));
    }
    if (cases.empty()) throw FormatError("no data rows", line_no);
    return ScoredDataset::from_cases(std::move(cases));
}

ScoredDataset load_scored_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scored_csv(buffer.str());
}

std::string format_scored_csv(const ScoredDataset& data) {
    std::string out = "score,label\n";
    char buf[64];
    for (const auto& c : data.cases) {
        const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, c.score);
        out.append(buf, end);
        out += c.positive ? ",1\n" : ",0\n";
    }
    return out;
}

void write_scored_csv(const std::filesystem::path& path, const ScoredDataset& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << format_scored_csv(data);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

void WidgetLineConfig::validate() const {
    if (n_cases < 2) throw ConfigError("n_cases must be at least 2");
    if (!(p_good > 0.0 && p_good < 1.0)) throw ConfigError("p_good must lie strictly inside (0,1)");
    if (!std::isfinite(good_score_mean) || !std::isfinite(bad_score_mean))
        throw ConfigError("score means must be finite");
    if (!(score_stddev > 0.0) || !std::isfinite(score_stddev)) throw ConfigError("score_stddev must be positive");
}

WidgetLineConfig widget_config_from_json(const Json& json) {
    if (!json.is_object()) throw FormatError("generator config must be a JSON object");
    WidgetLineConfig cfg;
    auto number = [&](const char* key, double& field, bool required) {
        if (!json.contains(key)) {
            if (required) throw FormatError(std::string("generator config is missing '") + key + "'");
            return;
        }
        if (!json[key].is_number()) throw FormatError(std::string("generator config field '") + key + "' must be a number");
        field = json[key].get<double>();
    };
    auto integer = [&](const char* key, auto& field, bool required) {
        if (!json.contains(key)) {
            if (required) throw FormatError(std::string("generator config is missing '") + key + "'");
            return;
        }
        if (!json[key].is_number_integer())
            throw FormatError(std::string("generator config field '") + key + "' must be an integer");
        field = json[key].get<std::remove_reference_t<decltype(field)>>();
    };
    integer("n_cases", cfg.n_cases, true);
    number("p_good", cfg.p_good, true);
    number("good_score_mean", cfg.good_score_mean, false);
    number("bad_score_mean", cfg.bad_score_mean, false);
    number("score_stddev", cfg.score_stddev, false);
    integer("seed", cfg.seed, false);
    cfg.validate();
    return cfg;
}

Json widget_config_to_json(const WidgetLineConfig& cfg) {
    Json j;
    j["n_cases"] = cfg.n_cases;
    j["p_good"] = cfg.p_good;
    j["good_score_mean"] = cfg.good_score_mean;
    j["bad_score_mean"] = cfg.bad_score_mean;
    j["score_stddev"] = cfg.score_stddev;
    j["seed"] = cfg.seed;
    return j;
}

ScoredDataset generate_widget_line(const WidgetLineConfig& cfg) {
    cfg.validate();
    // mt19937_64 output is fixed by the standard; the distributions are not,
    // so the uniform and normal transforms are spelled out here.
    std::mt19937_64 engine(cfg.seed);
    auto unit = [&] { return static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53; };  // (0,1]

    std::vector<ScoredCase> cases;
    cases.reserve(static_cast<std::size_t>(cfg.n_cases));
    for (std::int64_t i = 0; i < cfg.n_cases; ++i) {
        const bool good = unit() <= cfg.p_good;
        const double r = std::sqrt(-2.0 * std::log(unit()));
        const double z = r * std::cos(2.0 * std::numbers::pi * unit());
        cases.push_back({(good ? cfg.good_score_mean : cfg.bad_score_mean) + cfg.score_stddev * z, good});
    }
    return ScoredDataset::from_cases(std::move(cases));
}

} // namespace dqkit
