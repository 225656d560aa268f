#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dqkit/diagram.hpp"

namespace dqkit {

/// One row of a decision's lookup table.
struct PolicyEntry {
    std::vector<std::string> configuration;  // labels, in `DecisionRule::information` order
    std::string alternative;
    /// P(observed chance values | earlier decisions in the configuration).
    double probability = 0.0;
    /// Conditional expected value of the chosen alternative.
    double expected_value = 0.0;
    bool reachable = true;
};

/// The lookup table d(I) for one decision. Entries are in lexicographic
/// configuration order, one per configuration of the closed information set.
struct DecisionRule {
    std::string decision;
    std::vector<std::string> information;
    std::vector<PolicyEntry> entries;
};

struct Policy {
    std::vector<DecisionRule> rules;  // in decision order

    const DecisionRule* find(std::string_view decision) const noexcept;
    DecisionRule* find(std::string_view decision) noexcept;
};

struct InformationValue {
    std::vector<std::string> configuration;
    double probability = 0.0;
    double value = 0.0;
};

struct SolveResult {
    Policy policy;
    double expected_value = 0.0;
    /// Information set of the first decision; empty when there is none.
    std::vector<std::string> information;
    /// V(I)* for each configuration of `information`, with its probability.
    std::vector<InformationValue> per_information_value;
    std::size_t unreachable_count = 0;
    std::vector<std::string> notes;
};

/// Optimal policy by backward induction on the unrolled tree: expectation at
/// chance branches, maximization at decision branches. Ties go to the
/// earliest-declared alternative.
SolveResult solve(const InfluenceDiagram& diagram, std::uint64_t leaf_cap = kDefaultLeafCap);
SolveResult solve(const CompiledDiagram& compiled, std::uint64_t leaf_cap = kDefaultLeafCap);

/// Expected value of a fixed policy by direct enumeration of the joint
/// distribution. Throws DomainError when the policy is partial or illegal.
double evaluate_policy(const InfluenceDiagram& diagram, const Policy& policy,
                       std::uint64_t assignment_cap = kDefaultLeafCap);

/// Gain in optimal expected value from letting `decision_id` observe
/// `observed_id`.
double value_of_information(const InfluenceDiagram& diagram, std::string_view decision_id,
                            std::string_view observed_id);

/// A candidate in the model-investment choice. `source` is either a
/// precomputed expected value or a diagram to be solved.
struct ModelOption {
    std::string id;
    std::variant<double, InfluenceDiagram> source;
    double investment_cost = 0.0;
};

struct OptionValue {
    std::string id;
    double gross_value = 0.0;
    double investment_cost = 0.0;
    double net_value = 0.0;
};

struct InvestmentChoice {
    std::string chosen_option;
    std::vector<OptionValue> net_values;  // in declared option order

    const OptionValue* find(std::string_view id) const noexcept;
};

/// Net value E[V(I,m)*] - cost(m) per option and the argmax (earliest on
/// ties). When `weights` is given it replaces each diagram's own P(I) over
/// the first decision's information configurations.
InvestmentChoice choose_model(std::span<const ModelOption> options,
                              std::optional<std::span<const double>> weights = std::nullopt);

/// Builds the single diagram with an up-front decision `choice_id` over the
/// options. All options must carry diagrams of identical structure; tables
/// may differ. Each chance and value table gains the choice as its first
/// parent, and a value node `<choice_id>_cost` charges the investment.
InfluenceDiagram prepend_model_choice(std::span<const ModelOption> options, const std::string& choice_id = "model");

} // namespace dqkit
