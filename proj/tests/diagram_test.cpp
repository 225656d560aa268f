#include <gtest/gtest.h>

#include <random>

#include "dqkit/diagram.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace dqkit;
using namespace dqkit::testing;

namespace {

bool mentions(const std::vector<Violation>& violations, const std::string& node, const std::string& fragment) {
    for (const auto& v : violations)
        if (v.node == node && v.reason.find(fragment) != std::string::npos) return true;
    return false;
}

// Probability mass below `index`, checking that every reachable decision
// branch carries mass 1.
double branch_mass(const DecisionTree& tree, std::size_t index, double path, bool& ok) {
    const auto& n = tree.nodes[index];
    if (n.kind == TreeNode::Kind::leaf) return 1.0;
    if (n.kind == TreeNode::Kind::chance) {
        double total = 0.0;
        for (std::size_t k = 0; k < n.child_count; ++k) {
            const auto& child = tree.nodes[n.first_child + k];
            total += child.probability * branch_mass(tree, n.first_child + k, path * child.probability, ok);
        }
        return total;
    }
    for (std::size_t k = 0; k < n.child_count; ++k) {
        const double m = branch_mass(tree, n.first_child + k, path, ok);
        if (path > 0.0 && std::abs(m - 1.0) > 1e-9) ok = false;
    }
    return 1.0;
}

} // namespace

TEST(Validate, InformedDecisionIsValid) { EXPECT_TRUE(validate(informed_decision()).empty()); }

TEST(Validate, MinimalDecisionWithoutChanceNodesIsValid) { EXPECT_TRUE(validate(constant_decision()).empty()); }

TEST(Validate, ReportsRowThatDoesNotSumToOne) {
    auto d = informed_decision();
    std::get<ChanceNode>(d.nodes[1]).table = {0.1, 0.8, 0.6, 0.4};
    const auto violations = validate(d);
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].node, "s");
    EXPECT_NE(violations[0].reason.find("row 0 (low)"), std::string::npos) << violations[0].reason;
    EXPECT_NE(violations[0].reason.find("0.9"), std::string::npos) << violations[0].reason;
}

TEST(Validate, ToleratesRoundingWithinTolerance) {
    auto d = informed_decision();
    std::get<ChanceNode>(d.nodes[1]).table = {0.1, 0.9 + 5e-10, 0.6, 0.4};
    EXPECT_TRUE(validate(d).empty());
    const auto c = compile(d);
    const auto& cpt = c.chance[1].cpt;
    EXPECT_NEAR(cpt[0] + cpt[1], 1.0, 1e-15);
}

TEST(Validate, StructuralViolations) {
    InfluenceDiagram d;
    d.nodes.emplace_back(ChanceNode{"a", {"x"}, {"ghost"}, {1.0}});
    d.nodes.emplace_back(ChanceNode{"b", {"0", "1"}, {"v"}, {0.5, 0.5, 0.5, 0.5}});
    d.nodes.emplace_back(DecisionNode{"d", {}, {}});
    d.nodes.emplace_back(ValueNode{"v", {"d"}, {}});
    d.nodes.emplace_back(ValueNode{"v", {}, {1.0}});
    const auto violations = validate(d);
    EXPECT_TRUE(mentions(violations, "a", "at least 2 states"));
    EXPECT_TRUE(mentions(violations, "a", "unknown node 'ghost'"));
    EXPECT_TRUE(mentions(violations, "b", "value node 'v'"));
    EXPECT_TRUE(mentions(violations, "d", "at least 1 alternatives"));
    EXPECT_TRUE(mentions(violations, "d", "missing from decision_order"));
    EXPECT_TRUE(mentions(violations, "v", "duplicate node id"));
}

TEST(Validate, RequiresAValueNode) {
    InfluenceDiagram d;
    d.nodes.emplace_back(DecisionNode{"d", {"a"}, {}});
    d.decision_order = {"d"};
    EXPECT_TRUE(mentions(validate(d), "<diagram>", "no value node"));
}

TEST(Validate, TableSizeMismatch) {
    auto d = widget_diagram();
    std::get<ValueNode>(d.nodes[2]).table.pop_back();
    EXPECT_TRUE(mentions(validate(d), "V", "expected 4"));
}

TEST(Validate, DetectsCycles) {
    InfluenceDiagram d;
    d.nodes.emplace_back(ChanceNode{"a", {"0", "1"}, {"b"}, {0.5, 0.5, 0.5, 0.5}});
    d.nodes.emplace_back(ChanceNode{"b", {"0", "1"}, {"a"}, {0.5, 0.5, 0.5, 0.5}});
    d.nodes.emplace_back(ValueNode{"v", {"a"}, {0, 1}});
    const auto violations = validate(d);
    EXPECT_TRUE(mentions(violations, "a", "cycle"));
    EXPECT_TRUE(mentions(violations, "b", "cycle"));
}

TEST(Validate, DecisionObservingItsOwnConsequenceIsACycle) {
    auto d = widget_diagram();
    d.nodes.insert(d.nodes.begin() + 2, ChanceNode{"R", {"0", "1"}, {"D"}, {0.5, 0.5, 0.5, 0.5}});
    std::get<DecisionNode>(d.nodes[1]).informs = {"R"};
    EXPECT_TRUE(mentions(validate(d), "D", "cycle"));
}

TEST(Validate, DecisionOrderMustRespectArcs) {
    InfluenceDiagram d;
    d.nodes.emplace_back(DecisionNode{"first", {"a", "b"}, {}});
    d.nodes.emplace_back(ChanceNode{"x", {"0", "1"}, {"first"}, {0.5, 0.5, 0.2, 0.8}});
    d.nodes.emplace_back(DecisionNode{"second", {"a", "b"}, {"x"}});
    d.nodes.emplace_back(ValueNode{"v", {"second"}, {0, 1}});
    d.decision_order = {"second", "first"};
    EXPECT_TRUE(mentions(validate(d), "first", "path second -> first") ||
                mentions(validate(d), "second", "path first -> second"));
    d.decision_order = {"first", "second"};
    EXPECT_TRUE(validate(d).empty());
    d.decision_order = {"first", "first", "second"};
    EXPECT_TRUE(mentions(validate(d), "first", "more than once"));
}

TEST(ParentConfigurations, LexicographicInDeclaredOrder) {
    InfluenceDiagram d;
    d.nodes.emplace_back(ChanceNode{"A", {"a0", "a1"}, {}, {0.5, 0.5}});
    d.nodes.emplace_back(ChanceNode{"B", {"b0", "b1"}, {}, {0.5, 0.5}});
    d.nodes.emplace_back(ValueNode{"v", {"A", "B"}, {0, 0, 0, 0}});
    using C = std::vector<std::vector<std::string>>;
    EXPECT_EQ(parent_configurations(d, "v"), (C{{"a0", "b0"}, {"a0", "b1"}, {"a1", "b0"}, {"a1", "b1"}}));
    EXPECT_EQ(parent_configurations(d, "A"), (C{{}}));
}

TEST(ParentConfigurations, WidgetValueNodeHasFourRows) {
    using C = std::vector<std::vector<std::string>>;
    EXPECT_EQ(parent_configurations(widget_diagram(), "V"),
              (C{{"good", "accept"}, {"good", "reject"}, {"bad", "accept"}, {"bad", "reject"}}));
}

TEST(ParentConfigurations, UnknownNode) {
    EXPECT_THROW(parent_configurations(widget_diagram(), "nope"), UnknownNodeError);
}

TEST(Compile, NoForgettingClosureAddsArcsAndNotes) {
    InfluenceDiagram d;
    d.nodes.emplace_back(ChanceNode{"x", {"0", "1"}, {}, {0.3, 0.7}});
    d.nodes.emplace_back(DecisionNode{"d1", {"a", "b"}, {"x"}});
    d.nodes.emplace_back(ChanceNode{"y", {"0", "1"}, {"d1"}, {0.5, 0.5, 0.1, 0.9}});
    d.nodes.emplace_back(DecisionNode{"d2", {"a", "b"}, {"y"}});
    d.nodes.emplace_back(ValueNode{"v", {"x", "d2"}, {1, 0, 0, 1}});
    d.decision_order = {"d1", "d2"};
    const auto c = compile(d);
    ASSERT_EQ(c.decisions.size(), 2u);
    std::vector<std::string> info;
    for (auto v : c.decisions[1].information) info.push_back(c.variables[v].id);
    EXPECT_EQ(info, (std::vector<std::string>{"y", "x", "d1"}));
    ASSERT_EQ(c.notes.size(), 2u);
    EXPECT_NE(c.notes[0].find("x -> d2"), std::string::npos);
    EXPECT_NE(c.notes[1].find("d1 -> d2"), std::string::npos);
}

TEST(Compile, InvalidDiagramThrowsWithViolations) {
    auto d = widget_diagram();
    d.decision_order.clear();
    try {
        compile(d);
        FAIL() << "expected InvalidDiagramError";
    } catch (const InvalidDiagramError& e) {
        EXPECT_FALSE(e.violations().empty());
    }
}

TEST(Unroll, MinimalDiagramIsOneDecisionLevel) {
    const auto tree = unroll(constant_decision());
    EXPECT_EQ(tree.depth(), 1u);
    ASSERT_EQ(tree.leaf_count(), 2u);
    EXPECT_EQ(tree.nodes[0].kind, TreeNode::Kind::decision);
    EXPECT_EQ(tree.nodes[1].payoff, 3.0);
    EXPECT_EQ(tree.nodes[2].payoff, 5.0);
}

TEST(Unroll, InformedDecisionHasEightLeaves) {
    const auto tree = unroll(informed_decision());
    EXPECT_EQ(tree.leaf_count(), 8u);
    EXPECT_EQ(tree.depth(), 3u);
    // Observed i first, then the decision, then the hidden state.
    EXPECT_EQ(tree.variables[tree.nodes[0].variable].id, "i");
}

TEST(Unroll, UninformedWidgetHasFourLeaves) {
    const auto tree = unroll(widget_diagram());
    EXPECT_EQ(tree.leaf_count(), 4u);
    EXPECT_EQ(tree.nodes[0].kind, TreeNode::Kind::decision);
}

TEST(Unroll, ChanceBranchesAreConditionedOnThePath) {
    // s depends on i; after observing i the edge probabilities are the CPT rows,
    // and with the arc reversed they come out of Bayes rule.
    auto d = informed_decision();
    const auto tree = unroll(d);
    const auto& root = tree.nodes[0];
    EXPECT_NEAR(tree.nodes[root.first_child].probability, 0.7, 1e-15);
    const auto& dec_low = tree.nodes[root.first_child];
    const auto& s_low = tree.nodes[tree.nodes[dec_low.first_child].first_child];
    EXPECT_NEAR(s_low.probability, 0.1, 1e-12);

    // Observe s instead: P(i=low | s=buys) = 0.07 / 0.25.
    std::get<DecisionNode>(d.nodes[2]).informs = {"s"};
    const auto rev = unroll(d);
    const auto& s_root = rev.nodes[0];
    EXPECT_EQ(rev.variables[s_root.variable].id, "s");
    EXPECT_NEAR(rev.nodes[s_root.first_child].probability, 0.25, 1e-12);
    const auto& dec = rev.nodes[s_root.first_child];
    const auto& i_node = rev.nodes[dec.first_child];
    EXPECT_EQ(rev.variables[i_node.variable].id, "i");
    EXPECT_NEAR(rev.nodes[i_node.first_child].probability, 0.07 / 0.25, 1e-12);
}

TEST(Unroll, LeafCapIsEnforced) {
    EXPECT_THROW(unroll(widget_diagram(), 3), CapacityError);
    EXPECT_NO_THROW(unroll(widget_diagram(), 4));
}

TEST(Unroll, InvalidDiagramIsRejected) {
    auto d = widget_diagram();
    std::get<ChanceNode>(d.nodes[0]).table = {0.5, 0.6};
    EXPECT_THROW(unroll(d), InvalidDiagramError);
}

TEST(UnrollProperty, PathProbabilitiesSumToOnePerPolicyBranch) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto d = random_diagram(rng);
        const auto tree = unroll(d);
        bool ok = true;
        EXPECT_NEAR(branch_mass(tree, 0, 1.0, ok), 1.0, 1e-9);
        EXPECT_TRUE(ok) << diagram_to_json(d).dump();
    }
}

TEST(UnrollProperty, Deterministic) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto d = random_diagram(rng);
        const auto text = diagram_to_json(d).dump();
        const auto a = unroll(parse_diagram(text));
        const auto b = unroll(parse_diagram(text));
        ASSERT_EQ(a.nodes.size(), b.nodes.size());
        for (std::size_t k = 0; k < a.nodes.size(); ++k) {
            EXPECT_EQ(a.nodes[k].kind, b.nodes[k].kind);
            EXPECT_EQ(a.nodes[k].variable, b.nodes[k].variable);
            EXPECT_EQ(a.nodes[k].first_child, b.nodes[k].first_child);
            EXPECT_EQ(a.nodes[k].probability, b.nodes[k].probability);
            EXPECT_EQ(a.nodes[k].payoff, b.nodes[k].payoff);
        }
    }
}

TEST(Json, RoundTripPreservesDiagram) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        const auto d = random_diagram(rng);
        EXPECT_EQ(parse_diagram(diagram_to_json(d).dump()), d);
    }
    for (const char* name : {"widget.json", "perfect_information.json", "informed_decision.json"}) {
        const auto d = parse_diagram(read_text(data_dir() / "models" / name));
        EXPECT_EQ(diagram_from_json(diagram_to_json(d)), d) << name;
    }
}

TEST(Json, MalformedTextReportsLocation) {
    try {
        parse_diagram("{\n  \"nodes\": [\n    {\"id\": \"a\",, }\n  ]\n}");
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        ASSERT_TRUE(e.line().has_value());
        EXPECT_EQ(*e.line(), 3u);
    }
}

TEST(Json, ShapeErrors) {
    EXPECT_THROW(parse_diagram("[]"), FormatError);
    EXPECT_THROW(parse_diagram(R"({"nodes":[{"id":"a"}]})"), FormatError);
    EXPECT_THROW(parse_diagram(R"({"nodes":[{"id":"a","kind":"oracle"}]})"), FormatError);
    EXPECT_THROW(parse_diagram(R"({"nodes":[{"id":"a","kind":"value","table":["x"]}]})"), FormatError);
    EXPECT_THROW(parse_diagram(R"({"nodes":[{"id":"a","kind":"chance","table":[1]}]})"), FormatError);
}
