#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "dqkit/json.hpp"
#include "dqkit/roc.hpp"
#include "dqkit/solver.hpp"

namespace dqkit {

/// Fixed human-readable format: 6 significant digits, "%.6g".
std::string format_number(double value);

inline constexpr const char* kStatusQuoId = "status-quo";
inline constexpr std::size_t kDefaultGridSize = 21;

// ROC reports ---------------------------------------------------------------

/// {threshold, fpr, tpr}; infinite thresholds are written as null.
Json roc_point_json(const RocPoint& point);

/// Reads an array of {threshold?, fpr, tpr}. A null or missing threshold is
/// +inf on the (0,0) point and -inf elsewhere. Validates the curve.
RocCurve curve_from_json(const Json& json);

/// {p, v_tp, v_fp, v_tn, v_fn}. `p` may be omitted when a default is given.
/// Throws FormatError on shape errors and ConfigError on invalid values.
UtilityModel utility_from_json(const Json& json, std::optional<double> default_prevalence = std::nullopt);
Json utility_to_json(const UtilityModel& u);

/// {curve, optimal, baseline, indifference, field}.
Json roc_report(const RocCurve& curve, const UtilityModel& u, std::size_t grid_n);

// Model choice --------------------------------------------------------------

struct CurveOption {
    std::string name;
    RocCurve curve;
    double investment_cost = 0.0;
};

/// Model choice among ROC-evaluated candidates plus the implicit status quo,
/// which is always listed first.
InvestmentChoice choose_curve_option(std::span<const CurveOption> options, const UtilityModel& u,
                                     std::int64_t n_cases);

Json investment_choice_json(const InvestmentChoice& choice);

// Solver output -------------------------------------------------------------

Json solve_result_json(const SolveResult& result);

} // namespace dqkit
