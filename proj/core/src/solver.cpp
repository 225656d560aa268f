#include "dqkit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dqkit {

const DecisionRule* Policy::find(std::string_view decision) const noexcept {
    auto it = std::ranges::find(rules, decision, &DecisionRule::decision);
    return it == rules.end() ? nullptr : &*it;
}

DecisionRule* Policy::find(std::string_view decision) noexcept {
    auto it = std::ranges::find(rules, decision, &DecisionRule::decision);
    return it == rules.end() ? nullptr : &*it;
}

const OptionValue* InvestmentChoice::find(std::string_view id) const noexcept {
    auto it = std::ranges::find(net_values, id, &OptionValue::id);
    return it == net_values.end() ? nullptr : &*it;
}

namespace {

// A later alternative must beat the incumbent by more than this (relative)
// margin to replace it, so ties survive floating-point noise.
constexpr double kTieTolerance = 1e-12;

bool strictly_better(double candidate, double incumbent) {
    return candidate > incumbent + kTieTolerance * std::max(1.0, std::abs(incumbent));
}

std::vector<std::string> labels(const CompiledDiagram& c, std::span<const std::size_t> vars, std::size_t index) {
    std::vector<std::string> out(vars.size());
    for (std::size_t i = vars.size(); i > 0; --i) {
        const auto& var = c.variables[vars[i - 1]];
        out[i - 1] = var.labels[index % var.cardinality()];
        index /= var.cardinality();
    }
    return out;
}

std::vector<std::string> ids(const CompiledDiagram& c, std::span<const std::size_t> vars) {
    std::vector<std::string> out;
    for (auto v : vars) out.push_back(c.variables[v].id);
    return out;
}

class BackwardInduction {
public:
    BackwardInduction(const CompiledDiagram& c, const DecisionTree& tree)
        : c_(c), tree_(tree), assignment_(c.variables.size(), 0) {
        for (const auto& dec : c.decisions) {
            DecisionRule rule;
            rule.decision = c.variables[dec.variable].id;
            rule.information = ids(c, dec.information);
            const auto count = configuration_count(c, dec.information);
            rule.entries.resize(count);
            for (std::size_t i = 0; i < count; ++i) rule.entries[i].configuration = labels(c, dec.information, i);
            result_.policy.rules.push_back(std::move(rule));
        }
    }

    SolveResult run() {
        result_.expected_value = visit(0, 1.0);
        result_.notes = c_.notes;
        for (const auto& rule : result_.policy.rules)
            result_.unreachable_count +=
                static_cast<std::size_t>(std::ranges::count(rule.entries, false, &PolicyEntry::reachable));
        if (c_.decisions.empty()) {
            result_.per_information_value.push_back({{}, 1.0, result_.expected_value});
        } else {
            result_.information = result_.policy.rules.front().information;
            for (const auto& e : result_.policy.rules.front().entries)
                result_.per_information_value.push_back({e.configuration, e.probability, e.expected_value});
        }
        return std::move(result_);
    }

private:
    double visit(std::size_t index, double path_probability) {
        const TreeNode& node = tree_.nodes[index];
        if (node.kind == TreeNode::Kind::leaf) return node.payoff;
        double best = 0.0;
        std::size_t best_k = 0;
        for (std::size_t k = 0; k < node.child_count; ++k) {
            const TreeNode& child = tree_.nodes[node.first_child + k];
            assignment_[node.variable] = k;
            if (node.kind == TreeNode::Kind::chance) {
                best += child.probability * visit(node.first_child + k, path_probability * child.probability);
            } else {
                const double v = visit(node.first_child + k, path_probability);
                if (k == 0 || strictly_better(v, best)) {
                    best = v;
                    best_k = k;
                }
            }
        }
        if (node.kind == TreeNode::Kind::decision) {
            const auto slot = c_.decision_slot[node.variable];
            const auto& info = c_.decisions[slot].information;
            auto& entry = result_.policy.rules[slot].entries[configuration_index(c_, info, assignment_)];
            entry.alternative = c_.variables[node.variable].labels[best_k];
            entry.probability = path_probability;
            entry.expected_value = best;
            entry.reachable = path_probability > 0.0;
        }
        return best;
    }

    const CompiledDiagram& c_;
    const DecisionTree& tree_;
    std::vector<std::size_t> assignment_;
    SolveResult result_;
};

} // namespace

SolveResult solve(const CompiledDiagram& compiled, std::uint64_t leaf_cap) {
    const auto tree = unroll(compiled, leaf_cap);
    return BackwardInduction(compiled, tree).run();
}

SolveResult solve(const InfluenceDiagram& diagram, std::uint64_t leaf_cap) {
    return solve(compile(diagram), leaf_cap);
}

double evaluate_policy(const InfluenceDiagram& diagram, const Policy& policy, std::uint64_t assignment_cap) {
    const auto c = compile(diagram);

    // Resolve each decision's table to alternative indices.
    std::vector<std::vector<std::size_t>> choice(c.decisions.size());
    for (std::size_t slot = 0; slot < c.decisions.size(); ++slot) {
        const auto& dec = c.decisions[slot];
        const auto& var = c.variables[dec.variable];
        const auto* rule = policy.find(var.id);
        if (!rule) throw DomainError("policy has no rule for decision '" + var.id + "'");
        if (rule->information != ids(c, dec.information))
            throw DomainError("policy rule for '" + var.id + "' does not match its information set");
        const auto count = configuration_count(c, dec.information);
        if (rule->entries.size() != count)
            throw DomainError("policy rule for '" + var.id + "' has " + std::to_string(rule->entries.size()) +
                              " entries, expected " + std::to_string(count));
        for (std::size_t i = 0; i < count; ++i) {
            const auto& e = rule->entries[i];
            if (e.configuration != labels(c, dec.information, i))
                throw DomainError("policy rule for '" + var.id + "' entry " + std::to_string(i) +
                                  " is out of lexicographic order");
            auto it = std::ranges::find(var.labels, e.alternative);
            if (it == var.labels.end())
                throw DomainError("policy chooses illegal alternative '" + e.alternative + "' for '" + var.id + "'");
            choice[slot].push_back(static_cast<std::size_t>(it - var.labels.begin()));
        }
    }

    std::vector<std::size_t> chance_vars;
    for (const auto& ch : c.chance) chance_vars.push_back(ch.variable);
    if (configuration_count(c, chance_vars) > assignment_cap)
        throw CapacityError("joint enumeration would exceed " + std::to_string(assignment_cap) + " assignments");

    std::vector<std::size_t> a(c.variables.size(), 0);
    double total = 0.0;
    while (true) {
        for (std::size_t slot = 0; slot < c.decisions.size(); ++slot) {
            const auto& dec = c.decisions[slot];
            a[dec.variable] = choice[slot][configuration_index(c, dec.information, a)];
        }
        double p = 1.0;
        for (const auto& ch : c.chance)
            p *= ch.cpt[configuration_index(c, ch.parents, a) * c.variables[ch.variable].cardinality() + a[ch.variable]];
        if (p > 0.0) {
            double payoff = 0.0;
            for (const auto& v : c.values) payoff += v.table[configuration_index(c, v.parents, a)];
            total += p * payoff;
        }
        std::size_t i = chance_vars.size();
        bool done = chance_vars.empty();
        while (i > 0) {
            --i;
            if (++a[chance_vars[i]] < c.variables[chance_vars[i]].cardinality()) break;
            a[chance_vars[i]] = 0;
            if (i == 0) done = true;
        }
        if (done) break;
    }
    return total;
}

double value_of_information(const InfluenceDiagram& diagram, std::string_view decision_id,
                            std::string_view observed_id) {
    const Node* observed = diagram.find(observed_id);
    if (!observed) throw UnknownNodeError(std::string(observed_id));
    if (node_kind(*observed) == NodeKind::value)
        throw DomainError("cannot observe value node '" + std::string(observed_id) + "'");
    const Node* target = diagram.find(decision_id);
    if (!target) throw UnknownNodeError(std::string(decision_id));
    if (node_kind(*target) != NodeKind::decision)
        throw DomainError("'" + std::string(decision_id) + "' is not a decision node");

    const auto base = compile(diagram);
    InfluenceDiagram informed = diagram;
    auto& dec = std::get<DecisionNode>(*informed.find(decision_id));
    if (std::ranges::find(dec.informs, observed_id) == dec.informs.end()) dec.informs.emplace_back(observed_id);
    if (auto violations = validate(informed); !violations.empty())
        throw DomainError("observing '" + std::string(observed_id) + "' before '" + std::string(decision_id) +
                          "' would make the diagram invalid: " + violations.front().node + ": " +
                          violations.front().reason);
    return solve(compile(informed)).expected_value - solve(base).expected_value;
}

namespace {

double option_value(const ModelOption& option, std::optional<std::span<const double>> weights,
                    const std::optional<SolveResult>& solved) {
    if (const auto* v = std::get_if<double>(&option.source)) return *v;
    if (!weights) return solved->expected_value;
    const auto& per = solved->per_information_value;
    if (per.size() != weights->size())
        throw DomainError("option '" + option.id + "' has " + std::to_string(per.size()) +
                          " information configurations but " + std::to_string(weights->size()) + " weights");
    double total = 0.0;
    for (std::size_t i = 0; i < per.size(); ++i) total += (*weights)[i] * per[i].value;
    return total;
}

// Identifies the information domain: ids plus configuration labels.
std::vector<std::vector<std::string>> information_domain(const SolveResult& r) {
    std::vector<std::vector<std::string>> out{r.information};
    for (const auto& iv : r.per_information_value) out.push_back(iv.configuration);
    return out;
}

} // namespace

InvestmentChoice choose_model(std::span<const ModelOption> options, std::optional<std::span<const double>> weights) {
    if (options.empty()) throw DomainError("model choice needs at least one option");
    if (weights) {
        double sum = 0.0;
        for (double w : *weights) {
            if (!std::isfinite(w) || w < 0.0) throw DomainError("information weights must be non-negative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > kProbabilityTolerance) throw DomainError("information weights must sum to 1");
    }

    InvestmentChoice choice;
    std::optional<std::vector<std::vector<std::string>>> domain;
    for (const auto& option : options) {
        if (choice.find(option.id)) throw DomainError("duplicate option id '" + option.id + "'");
        if (!std::isfinite(option.investment_cost))
            throw DomainError("option '" + option.id + "' has a non-finite investment cost");
        std::optional<SolveResult> solved;
        if (const auto* d = std::get_if<InfluenceDiagram>(&option.source)) {
            solved = solve(*d);
            auto this_domain = information_domain(*solved);
            if (domain && *domain != this_domain)
                throw DomainError("option '" + option.id + "' has a different information domain");
            domain = std::move(this_domain);
        }
        const double gross = option_value(option, weights, solved);
        choice.net_values.push_back({option.id, gross, option.investment_cost, gross - option.investment_cost});
    }
    const auto best = std::ranges::max_element(choice.net_values, [](const OptionValue& a, const OptionValue& b) {
        return strictly_better(b.net_value, a.net_value);
    });
    choice.chosen_option = best->id;
    return choice;
}

InfluenceDiagram prepend_model_choice(std::span<const ModelOption> options, const std::string& choice_id) {
    if (options.empty()) throw DomainError("model choice needs at least one option");
    std::vector<const InfluenceDiagram*> diagrams;
    for (const auto& option : options) {
        const auto* d = std::get_if<InfluenceDiagram>(&option.source);
        if (!d) throw DomainError("option '" + option.id + "' has no diagram to prepend");
        diagrams.push_back(d);
    }
    const InfluenceDiagram& first = *diagrams.front();
    if (first.find(choice_id) || first.find(choice_id + "_cost"))
        throw DomainError("choice id '" + choice_id + "' collides with an existing node");

    auto same_shape = [](const Node& a, const Node& b) {
        if (a.index() != b.index() || node_id(a) != node_id(b)) return false;
        if (const auto* ca = std::get_if<ChanceNode>(&a)) {
            const auto& cb = std::get<ChanceNode>(b);
            return ca->states == cb.states && ca->parents == cb.parents && ca->table.size() == cb.table.size();
        }
        if (const auto* da = std::get_if<DecisionNode>(&a)) return *da == std::get<DecisionNode>(b);
        const auto& va = std::get<ValueNode>(a);
        const auto& vb = std::get<ValueNode>(b);
        return va.parents == vb.parents && va.table.size() == vb.table.size();
    };
    for (std::size_t i = 1; i < diagrams.size(); ++i) {
        const auto& d = *diagrams[i];
        if (d.decision_order != first.decision_order || d.nodes.size() != first.nodes.size() ||
            !std::ranges::equal(d.nodes, first.nodes, same_shape))
            throw DomainError("option '" + options[i].id + "' has a different diagram structure");
    }

    InfluenceDiagram merged;
    DecisionNode choice{choice_id, {}, {}};
    for (const auto& option : options) choice.alternatives.push_back(option.id);
    merged.nodes.emplace_back(std::move(choice));
    for (std::size_t n = 0; n < first.nodes.size(); ++n) {
        Node node = first.nodes[n];
        std::visit(
            [&](auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, DecisionNode>) {
                    x.informs.insert(x.informs.begin(), choice_id);
                } else {
                    x.parents.insert(x.parents.begin(), choice_id);
                    x.table.clear();
                    for (const auto* d : diagrams) {
                        const auto& src = std::get<T>(d->nodes[n]).table;
                        x.table.insert(x.table.end(), src.begin(), src.end());
                    }
                }
            },
            node);
        merged.nodes.push_back(std::move(node));
    }
    ValueNode cost{choice_id + "_cost", {choice_id}, {}};
    for (const auto& option : options) cost.table.push_back(-option.investment_cost);
    merged.nodes.emplace_back(std::move(cost));
    merged.decision_order.push_back(choice_id);
    merged.decision_order.insert(merged.decision_order.end(), first.decision_order.begin(), first.decision_order.end());
    return merged;
}

} // namespace dqkit
