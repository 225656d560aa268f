#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dqkit/diagram.hpp"

namespace dqkit {

struct ScoredCase {
    double score = 0.0;
    bool positive = false;

    friend bool operator==(const ScoredCase&, const ScoredCase&) = default;
};

/// Scored, labeled test cases. Build through from_cases() so the counts
/// stay consistent with the cases.
struct ScoredDataset {
    std::vector<ScoredCase> cases;
    std::size_t positive_count = 0;
    std::size_t negative_count = 0;

    static ScoredDataset from_cases(std::vector<ScoredCase> cases);

    bool single_class() const noexcept { return positive_count == 0 || negative_count == 0; }
    double prevalence() const noexcept;
};

struct RocPoint {
    /// Cases with score >= threshold are predicted positive. +inf for the
    /// (0,0) endpoint, -inf for a (1,1) endpoint with no realized score.
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;
};

/// Throws DomainError unless the curve runs monotonically from (0,0) to (1,1)
/// inside the unit square.
void validate_curve(const RocCurve& curve);

/// Empirical ROC: one point per distinct score, descending, ties grouped.
RocCurve build_roc(const ScoredDataset& data);

/// Two-point curve of a binary rule, {(0,0), (fpr,tpr), (1,1)}, with the
/// rule's point at threshold 0.5.
RocCurve rule_curve(double fpr, double tpr);

double area_under_curve(const RocCurve& curve);

/// Linear value model per case. `prevalence` is the base rate of positives.
struct UtilityModel {
    double prevalence = 0.5;
    double v_tp = 0.0;
    double v_fp = 0.0;
    double v_tn = 0.0;
    double v_fn = 0.0;

    /// Throws ConfigError if prevalence is outside (0,1) or a value is not finite.
    void validate() const;
};

/// EU = P[tpr v_tp + (1-tpr) v_fn] + (1-P)[fpr v_fp + (1-fpr) v_tn]
double expected_utility(double fpr, double tpr, const UtilityModel& u) noexcept;

/// Slope of the iso-utility lines in (fpr, tpr) axes; nullopt when v_tp == v_fn
/// and the lines are vertical (or the field is constant).
std::optional<double> iso_utility_slope(const UtilityModel& u) noexcept;

struct OperatingPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
    double expected_utility = 0.0;
    std::size_t index = 0;  // position in the curve
};

/// Best realized curve vertex. Ties go to the lowest fpr, then the lowest
/// threshold.
OperatingPoint optimal_operating_point(const RocCurve& curve, const UtilityModel& u);

enum class BaselinePolicy { reject_all, accept_all };

const char* to_string(BaselinePolicy policy) noexcept;

struct Baseline {
    double value = 0.0;
    BaselinePolicy policy = BaselinePolicy::reject_all;

    double fpr() const noexcept { return policy == BaselinePolicy::accept_all ? 1.0 : 0.0; }
    double tpr() const noexcept { return fpr(); }
};

/// Best no-model policy: max of EU(0,0) and EU(1,1), reject-all on ties.
Baseline baseline_value(const UtilityModel& u) noexcept;

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Iso-utility line through the baseline point, tpr = slope * fpr + intercept.
std::optional<Line> indifference_line(const UtilityModel& u) noexcept;

/// EU on a uniform grid over [0,1]^2, tpr-major: values[row * n + col] is at
/// tpr = row/(n-1), fpr = col/(n-1).
struct UtilityField {
    std::size_t n = 0;
    std::vector<double> values;

    double at(std::size_t tpr_row, std::size_t fpr_col) const { return values[tpr_row * n + fpr_col]; }
};

UtilityField utility_field(const UtilityModel& u, std::size_t grid_n);

/// Net value of deploying a model over `n_cases`: EU* n - cost. A null
/// curve is the status quo, worth baseline * n at zero cost.
double evaluate_option(const RocCurve* curve, const UtilityModel& u, std::int64_t n_cases, double investment_cost);

/// Influence diagram of a deployed classifier at one operating point: the
/// case state, the classifier flag, an accept/reject decision informed by the
/// flag, and value scaled by `n_cases`.
InfluenceDiagram operating_point_diagram(double fpr, double tpr, const UtilityModel& u, double n_cases = 1.0);

} // namespace dqkit
