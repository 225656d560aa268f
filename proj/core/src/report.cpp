#include "dqkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace dqkit {

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

Json roc_point_json(const RocPoint& point) {
    Json j;
    j["threshold"] = std::isfinite(point.threshold) ? Json(point.threshold) : Json(nullptr);
    j["fpr"] = point.fpr;
    j["tpr"] = point.tpr;
    return j;
}

RocCurve curve_from_json(const Json& json) {
    if (!json.is_array()) throw FormatError("curve must be an array of {threshold, fpr, tpr}");
    RocCurve curve;
    for (const auto& p : json) {
        if (!p.is_object() || !p.contains("fpr") || !p.contains("tpr") || !p["fpr"].is_number() ||
            !p["tpr"].is_number())
            throw FormatError("curve points need numeric 'fpr' and 'tpr'");
        RocPoint point{0.0, p["fpr"].get<double>(), p["tpr"].get<double>()};
        if (p.contains("threshold") && p["threshold"].is_number()) {
            point.threshold = p["threshold"].get<double>();
        } else if (!p.contains("threshold") || p["threshold"].is_null()) {
            const bool origin = point.fpr == 0.0 && point.tpr == 0.0;
            point.threshold = (origin ? 1.0 : -1.0) * std::numeric_limits<double>::infinity();
        } else {
            throw FormatError("curve point 'threshold' must be a number or null");
        }
        curve.points.push_back(point);
    }
    validate_curve(curve);
    return curve;
}

UtilityModel utility_from_json(const Json& json, std::optional<double> default_prevalence) {
    if (!json.is_object()) throw FormatError("utility must be an object {p, v_tp, v_fp, v_tn, v_fn}");
    auto field = [&](const char* key) {
        if (!json.contains(key) || !json[key].is_number())
            throw FormatError(std::string("utility needs numeric '") + key + "'");
        return json[key].get<double>();
    };
    UtilityModel u;
    if (json.contains("p") && !json["p"].is_null()) u.prevalence = field("p");
    else if (default_prevalence) u.prevalence = *default_prevalence;
    else throw FormatError("utility needs numeric 'p'");
    u.v_tp = field("v_tp");
    u.v_fp = field("v_fp");
    u.v_tn = field("v_tn");
    u.v_fn = field("v_fn");
    u.validate();
    return u;
}

Json utility_to_json(const UtilityModel& u) {
    Json j;
    j["p"] = u.prevalence;
    j["v_tp"] = u.v_tp;
    j["v_fp"] = u.v_fp;
    j["v_tn"] = u.v_tn;
    j["v_fn"] = u.v_fn;
    return j;
}

Json roc_report(const RocCurve& curve, const UtilityModel& u, std::size_t grid_n) {
    u.validate();
    const auto optimal = optimal_operating_point(curve, u);
    const auto baseline = baseline_value(u);
    const auto line = indifference_line(u);
    const auto field = utility_field(u, grid_n);

    Json out;
    out["curve"] = Json::array();
    for (const auto& p : curve.points) out["curve"].push_back(roc_point_json(p));

    Json opt = roc_point_json({optimal.threshold, optimal.fpr, optimal.tpr});
    opt["expected_utility"] = optimal.expected_utility;
    out["optimal"] = std::move(opt);

    out["baseline"] = {{"value", baseline.value}, {"policy", to_string(baseline.policy)}};

    if (line) out["indifference"] = {{"slope", line->slope}, {"intercept", line->intercept}};
    else out["indifference"] = {{"slope", nullptr}, {"intercept", nullptr}};

    Json rows = Json::array();
    for (std::size_t r = 0; r < field.n; ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < field.n; ++c) row.push_back(field.at(r, c));
        rows.push_back(std::move(row));
    }
    out["field"] = {{"n", field.n}, {"values", std::move(rows)}};
    return out;
}

InvestmentChoice choose_curve_option(std::span<const CurveOption> options, const UtilityModel& u,
                                     std::int64_t n_cases) {
    u.validate();
    std::vector<ModelOption> candidates;
    candidates.push_back({kStatusQuoId, evaluate_option(nullptr, u, n_cases, 0.0), 0.0});
    for (const auto& o : options) {
        const double net = evaluate_option(&o.curve, u, n_cases, o.investment_cost);
        candidates.push_back({o.name, net + o.investment_cost, o.investment_cost});
    }
    return choose_model(candidates);
}

Json investment_choice_json(const InvestmentChoice& choice) {
    Json out;
    out["chosen_option"] = choice.chosen_option;
    Json nets = Json::object();
    Json details = Json::array();
    for (const auto& o : choice.net_values) {
        nets[o.id] = o.net_value;
        details.push_back(
            {{"id", o.id}, {"gross_value", o.gross_value}, {"investment_cost", o.investment_cost}, {"net_value", o.net_value}});
    }
    out["net_values"] = std::move(nets);
    out["options"] = std::move(details);
    return out;
}

namespace {

Json configuration_json(const std::vector<std::string>& ids, const std::vector<std::string>& labels) {
    Json j = Json::object();
    for (std::size_t i = 0; i < ids.size(); ++i) j[ids[i]] = labels[i];
    return j;
}

} // namespace

Json solve_result_json(const SolveResult& result) {
    Json out;
    out["expected_value"] = result.expected_value;
    Json policy = Json::array();
    for (const auto& rule : result.policy.rules) {
        Json entries = Json::array();
        for (const auto& e : rule.entries)
            entries.push_back({{"configuration", configuration_json(rule.information, e.configuration)},
                               {"alternative", e.alternative},
                               {"probability", e.probability},
                               {"expected_value", e.expected_value},
                               {"reachable", e.reachable}});
        policy.push_back({{"decision", rule.decision}, {"information", rule.information}, {"entries", std::move(entries)}});
    }
    out["policy"] = std::move(policy);
    Json per = Json::array();
    for (const auto& iv : result.per_information_value)
        per.push_back({{"configuration", configuration_json(result.information, iv.configuration)},
                       {"probability", iv.probability},
                       {"value", iv.value}});
    out["per_information_value"] = std::move(per);
    out["unreachable_count"] = result.unreachable_count;
    out["notes"] = result.notes;
    return out;
}

} // namespace dqkit
