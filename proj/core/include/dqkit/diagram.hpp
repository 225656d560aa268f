#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dqkit/error.hpp"
#include "dqkit/json.hpp"

namespace dqkit {

enum class NodeKind { chance, decision, value };

std::string_view to_string(NodeKind kind) noexcept;

/// Uncertain variable. `table` holds one probability vector per parent
/// configuration, row-major in lexicographic parent order.
struct ChanceNode {
    std::string id;
    std::vector<std::string> states;
    std::vector<std::string> parents;
    std::vector<double> table;

    friend bool operator==(const ChanceNode&, const ChanceNode&) = default;
};

/// Choice among `alternatives`, made knowing the nodes listed in `informs`.
struct DecisionNode {
    std::string id;
    std::vector<std::string> alternatives;
    std::vector<std::string> informs;

    friend bool operator==(const DecisionNode&, const DecisionNode&) = default;
};

/// Payoff table with one entry per parent configuration.
struct ValueNode {
    std::string id;
    std::vector<std::string> parents;
    std::vector<double> table;

    friend bool operator==(const ValueNode&, const ValueNode&) = default;
};

using Node = std::variant<ChanceNode, DecisionNode, ValueNode>;

const std::string& node_id(const Node& node) noexcept;
NodeKind node_kind(const Node& node) noexcept;

/// Discrete influence diagram. Nodes keep their declaration order, which is
/// also the order they are written back out in.
struct InfluenceDiagram {
    std::vector<Node> nodes;
    std::vector<std::string> decision_order;

    const Node* find(std::string_view id) const noexcept;
    Node* find(std::string_view id) noexcept;

    friend bool operator==(const InfluenceDiagram&, const InfluenceDiagram&) = default;
};

inline constexpr double kProbabilityTolerance = 1e-9;
inline constexpr std::uint64_t kDefaultLeafCap = 10'000'000;

/// Every structural violation of `diagram`; empty iff it can be solved.
std::vector<Violation> validate(const InfluenceDiagram& diagram);

/// Lexicographic enumeration of the parent configurations of `node_id`
/// (informs list for decisions), as state/alternative labels.
std::vector<std::vector<std::string>> parent_configurations(const InfluenceDiagram& diagram,
                                                            std::string_view node_id);

InfluenceDiagram diagram_from_json(const Json& json);
InfluenceDiagram parse_diagram(std::string_view text);
Json diagram_to_json(const InfluenceDiagram& diagram);

// ---------------------------------------------------------------------------
// Compiled form used by the solver and the tree builder.
// ---------------------------------------------------------------------------

/// A chance or decision variable. Value nodes are not variables.
struct Variable {
    std::string id;
    NodeKind kind;
    std::vector<std::string> labels;

    std::size_t cardinality() const noexcept { return labels.size(); }
};

struct CompiledChance {
    std::size_t variable;
    std::vector<std::size_t> parents;
    std::vector<double> cpt;  // row-normalized
};

struct CompiledDecision {
    std::size_t variable;
    /// Closed information set: declared informs first, then the arcs added
    /// by no-forgetting closure.
    std::vector<std::size_t> information;
};

struct CompiledValue {
    std::string id;
    std::vector<std::size_t> parents;
    std::vector<double> table;
};

/// Validated, immutable diagram with resolved indices. Safe to share across
/// threads once built.
struct CompiledDiagram {
    std::vector<Variable> variables;
    std::vector<CompiledChance> chance;
    std::vector<CompiledDecision> decisions;  // in decision order
    std::vector<CompiledValue> values;
    /// Branching order of the unrolled tree: the chance variables observed
    /// before each decision, the decision itself, then the unobserved rest.
    std::vector<std::size_t> sequence;
    /// Index into `chance` for each variable, or npos for decisions.
    std::vector<std::size_t> chance_slot;
    /// Index into `decisions` for each variable, or npos for chance.
    std::vector<std::size_t> decision_slot;
    /// Human-readable notes, e.g. arcs added by no-forgetting closure.
    std::vector<std::string> notes;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t variable_index(std::string_view id) const;
};

/// Validates, closes information sets and renormalizes tables.
/// Throws InvalidDiagramError when validate() reports anything.
CompiledDiagram compile(const InfluenceDiagram& diagram);

/// Mixed-radix index of the configuration of `vars` under `assignment`,
/// with the first variable most significant.
std::size_t configuration_index(const CompiledDiagram& compiled, std::span<const std::size_t> vars,
                                std::span<const std::size_t> assignment);

/// Product of the cardinalities of `vars`, saturating at UINT64_MAX.
std::uint64_t configuration_count(const CompiledDiagram& compiled, std::span<const std::size_t> vars);

// ---------------------------------------------------------------------------
// Unrolled decision tree.
// ---------------------------------------------------------------------------

struct TreeNode {
    enum class Kind : std::uint8_t { chance, decision, leaf };

    Kind kind = Kind::leaf;
    /// Variable branched on (chance/decision nodes).
    std::size_t variable = 0;
    /// Children are contiguous; child k corresponds to label k of `variable`.
    std::size_t first_child = 0;
    std::size_t child_count = 0;
    /// Probability of the edge into this node (1 below decision nodes).
    double probability = 1.0;
    /// Summed value-node payoff (leaves only).
    double payoff = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::vector<Variable> variables;

    std::size_t leaf_count() const noexcept;
    std::size_t depth() const noexcept;
};

/// Unrolls the diagram into a decision tree following `sequence`. Chance
/// branches carry probabilities conditioned on the path; zero-probability
/// paths get zero-weight children.
DecisionTree unroll(const CompiledDiagram& compiled, std::uint64_t leaf_cap = kDefaultLeafCap);
DecisionTree unroll(const InfluenceDiagram& diagram, std::uint64_t leaf_cap = kDefaultLeafCap);

} // namespace dqkit
