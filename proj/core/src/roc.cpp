#include "dqkit/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dqkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;

} // namespace

ScoredDataset ScoredDataset::from_cases(std::vector<ScoredCase> cases) {
    ScoredDataset out;
    for (const auto& c : cases) {
        if (!std::isfinite(c.score)) throw DomainError("scores must be finite");
        ++(c.positive ? out.positive_count : out.negative_count);
    }
    out.cases = std::move(cases);
    return out;
}

double ScoredDataset::prevalence() const noexcept {
    const auto total = positive_count + negative_count;
    return total == 0 ? 0.0 : static_cast<double>(positive_count) / static_cast<double>(total);
}

void validate_curve(const RocCurve& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 2) throw DomainError("ROC curve needs at least two points");
    if (pts.front().fpr != 0.0 || pts.front().tpr != 0.0) throw DomainError("ROC curve must start at (0,0)");
    if (pts.back().fpr != 1.0 || pts.back().tpr != 1.0) throw DomainError("ROC curve must end at (1,1)");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        if (!(p.fpr >= 0.0 && p.fpr <= 1.0 && p.tpr >= 0.0 && p.tpr <= 1.0))
            throw DomainError("ROC point " + std::to_string(i) + " lies outside the unit square");
        if (std::isnan(p.threshold)) throw DomainError("ROC point " + std::to_string(i) + " has a NaN threshold");
        if (i > 0 && (p.fpr < pts[i - 1].fpr || p.tpr < pts[i - 1].tpr))
            throw DomainError("ROC point " + std::to_string(i) + " decreases fpr or tpr");
    }
}

RocCurve build_roc(const ScoredDataset& data) {
    if (data.single_class())
        throw DomainError("ROC construction needs at least one positive and one negative case");
    std::vector<ScoredCase> sorted = data.cases;
    std::ranges::stable_sort(sorted, std::ranges::greater{}, &ScoredCase::score);

    const auto positives = static_cast<double>(data.positive_count);
    const auto negatives = static_cast<double>(data.negative_count);
    RocCurve curve;
    curve.points.push_back({kInf, 0.0, 0.0});
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        const double score = sorted[i].score;
        for (; i < sorted.size() && sorted[i].score == score; ++i) ++(sorted[i].positive ? tp : fp);
        curve.points.push_back({score, static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives});
    }
    return curve;
}

RocCurve rule_curve(double fpr, double tpr) {
    RocCurve curve{{{kInf, 0.0, 0.0}, {0.5, fpr, tpr}, {-kInf, 1.0, 1.0}}};
    validate_curve(curve);
    return curve;
}

double area_under_curve(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return area;
}

void UtilityModel::validate() const {
    if (!(prevalence > 0.0 && prevalence < 1.0)) throw ConfigError("prevalence must lie strictly inside (0,1)");
    for (double v : {v_tp, v_fp, v_tn, v_fn})
        if (!std::isfinite(v)) throw ConfigError("outcome values must be finite");
}

double expected_utility(double fpr, double tpr, const UtilityModel& u) noexcept {
    const double p = u.prevalence;
    return p * (tpr * u.v_tp + (1.0 - tpr) * u.v_fn) + (1.0 - p) * (fpr * u.v_fp + (1.0 - fpr) * u.v_tn);
}

std::optional<double> iso_utility_slope(const UtilityModel& u) noexcept {
    const double denominator = u.prevalence * (u.v_tp - u.v_fn);
    if (denominator == 0.0) return std::nullopt;
    return (1.0 - u.prevalence) * (u.v_tn - u.v_fp) / denominator;
}

OperatingPoint optimal_operating_point(const RocCurve& curve, const UtilityModel& u) {
    validate_curve(curve);
    OperatingPoint best;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i];
        const double eu = expected_utility(p.fpr, p.tpr, u);
        const double margin = kTieTolerance * std::max(1.0, std::abs(best.expected_utility));
        bool take = i == 0 || eu > best.expected_utility + margin;
        if (!take && eu >= best.expected_utility - margin)
            take = p.fpr < best.fpr || (p.fpr == best.fpr && p.threshold < best.threshold);
        if (take) best = {p.threshold, p.fpr, p.tpr, eu, i};
    }
    return best;
}

const char* to_string(BaselinePolicy policy) noexcept {
    return policy == BaselinePolicy::accept_all ? "accept-all" : "reject-all";
}

Baseline baseline_value(const UtilityModel& u) noexcept {
    const double reject_all = expected_utility(0.0, 0.0, u);
    const double accept_all = expected_utility(1.0, 1.0, u);
    if (accept_all > reject_all) return {accept_all, BaselinePolicy::accept_all};
    return {reject_all, BaselinePolicy::reject_all};
}

std::optional<Line> indifference_line(const UtilityModel& u) noexcept {
    const auto slope = iso_utility_slope(u);
    if (!slope) return std::nullopt;
    const double anchor = baseline_value(u).fpr();
    return Line{*slope, anchor - *slope * anchor};
}

UtilityField utility_field(const UtilityModel& u, std::size_t grid_n) {
    if (grid_n < 2) throw ConfigError("utility field grid needs at least 2 points per axis");
    UtilityField field{grid_n, std::vector<double>(grid_n * grid_n)};
    const double step = 1.0 / static_cast<double>(grid_n - 1);
    for (std::size_t row = 0; row < grid_n; ++row)
        for (std::size_t col = 0; col < grid_n; ++col)
            field.values[row * grid_n + col] =
                expected_utility(static_cast<double>(col) * step, static_cast<double>(row) * step, u);
    return field;
}

double evaluate_option(const RocCurve* curve, const UtilityModel& u, std::int64_t n_cases, double investment_cost) {
    if (n_cases < 0) throw DomainError("case volume must be non-negative");
    if (!(investment_cost >= 0.0) || !std::isfinite(investment_cost))
        throw DomainError("investment cost must be finite and non-negative");
    const double per_case = curve ? optimal_operating_point(*curve, u).expected_utility : baseline_value(u).value;
    return per_case * static_cast<double>(n_cases) - investment_cost;
}

InfluenceDiagram operating_point_diagram(double fpr, double tpr, const UtilityModel& u, double n_cases) {
    InfluenceDiagram d;
    d.nodes.emplace_back(ChanceNode{"case", {"positive", "negative"}, {}, {u.prevalence, 1.0 - u.prevalence}});
    d.nodes.emplace_back(ChanceNode{"flag", {"positive", "negative"}, {"case"}, {tpr, 1.0 - tpr, fpr, 1.0 - fpr}});
    d.nodes.emplace_back(DecisionNode{"action", {"accept", "reject"}, {"flag"}});
    d.nodes.emplace_back(ValueNode{"payoff",
                                   {"case", "action"},
                                   {n_cases * u.v_tp, n_cases * u.v_fn, n_cases * u.v_fp, n_cases * u.v_tn}});
    d.decision_order = {"action"};
    return d;
}

} // namespace dqkit
