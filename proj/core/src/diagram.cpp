#include "dqkit/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dqkit {

InvalidDiagramError::InvalidDiagramError(std::vector<Violation> violations)
    : DomainError([&] {
          std::string msg = "invalid influence diagram (" + std::to_string(violations.size()) +
                            " violation" + (violations.size() == 1 ? "" : "s") + ")";
          for (const auto& v : violations) msg += "\n  " + v.node + ": " + v.reason;
          return msg;
      }()),
      violations_(std::move(violations)) {}

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
    case NodeKind::chance: return "chance";
    case NodeKind::decision: return "decision";
    case NodeKind::value: return "value";
    }
    return "?";
}

const std::string& node_id(const Node& node) noexcept {
    return std::visit([](const auto& n) -> const std::string& { return n.id; }, node);
}

NodeKind node_kind(const Node& node) noexcept {
    return static_cast<NodeKind>(node.index());
}

const Node* InfluenceDiagram::find(std::string_view id) const noexcept {
    auto it = std::ranges::find_if(nodes, [&](const Node& n) { return node_id(n) == id; });
    return it == nodes.end() ? nullptr : &*it;
}

Node* InfluenceDiagram::find(std::string_view id) noexcept {
    auto it = std::ranges::find_if(nodes, [&](const Node& n) { return node_id(n) == id; });
    return it == nodes.end() ? nullptr : &*it;
}

namespace {

const std::vector<std::string>& labels_of(const Node& node) {
    static const std::vector<std::string> none;
    if (const auto* c = std::get_if<ChanceNode>(&node)) return c->states;
    if (const auto* d = std::get_if<DecisionNode>(&node)) return d->alternatives;
    return none;
}

const std::vector<std::string>& incoming_of(const Node& node) {
    if (const auto* c = std::get_if<ChanceNode>(&node)) return c->parents;
    if (const auto* d = std::get_if<DecisionNode>(&node)) return d->informs;
    return std::get<ValueNode>(node).parents;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

bool has_duplicates(std::vector<std::string> items) {
    std::ranges::sort(items);
    return std::ranges::adjacent_find(items) != items.end();
}

// Calls fn(config_labels) for each lexicographic configuration of `parents`.
void for_each_configuration(const std::vector<const std::vector<std::string>*>& domains,
                            const std::function<void(const std::vector<std::string>&)>& fn) {
    for (const auto* d : domains)
        if (d->empty()) return;
    std::vector<std::size_t> digits(domains.size(), 0);
    std::vector<std::string> labels(domains.size());
    while (true) {
        for (std::size_t i = 0; i < domains.size(); ++i) labels[i] = (*domains[i])[digits[i]];
        fn(labels);
        std::size_t i = domains.size();
        while (i > 0) {
            --i;
            if (++digits[i] < domains[i]->size()) break;
            digits[i] = 0;
            if (i == 0) return;
        }
        if (domains.empty()) return;
    }
}

class Validator {
public:
    explicit Validator(const InfluenceDiagram& d) : d_(d) {
        for (std::size_t i = 0; i < d.nodes.size(); ++i) index_.emplace(node_id(d.nodes[i]), i);
    }

    std::vector<Violation> run() {
        check_ids();
        for (const auto& node : d_.nodes) std::visit([&](const auto& n) { check(n); }, node);
        if (std::ranges::none_of(d_.nodes, [](const Node& n) { return node_kind(n) == NodeKind::value; }))
            add("<diagram>", "diagram has no value node");
        check_cycles();
        check_order();
        return std::move(out_);
    }

private:
    void add(const std::string& node, std::string reason) { out_.push_back({node, std::move(reason)}); }

    void check_ids() {
        std::unordered_set<std::string> seen;
        for (const auto& node : d_.nodes) {
            const auto& id = node_id(node);
            if (id.empty()) add("<unnamed>", "node id is empty");
            else if (!seen.insert(id).second) add(id, "duplicate node id");
        }
    }

    // Resolves the incoming arcs of `id`; returns false if any is unusable.
    bool check_incoming(const std::string& id, const std::vector<std::string>& incoming, const char* what) {
        bool ok = true;
        if (has_duplicates(incoming)) {
            add(id, std::string("duplicate entry in ") + what);
            ok = false;
        }
        for (const auto& p : incoming) {
            auto it = index_.find(p);
            if (it == index_.end()) {
                add(id, std::string(what) + " references unknown node '" + p + "'");
                ok = false;
            } else if (p == id) {
                add(id, std::string(what) + " references the node itself");
                ok = false;
            } else if (node_kind(d_.nodes[it->second]) == NodeKind::value) {
                add(id, std::string(what) + " references value node '" + p + "'");
                ok = false;
            } else if (labels_of(d_.nodes[it->second]).empty()) {
                ok = false;
            }
        }
        return ok;
    }

    std::vector<const std::vector<std::string>*> domains(const std::vector<std::string>& parents) const {
        std::vector<const std::vector<std::string>*> out;
        for (const auto& p : parents) out.push_back(&labels_of(d_.nodes[index_.at(p)]));
        return out;
    }

    std::size_t row_count(const std::vector<std::string>& parents) const {
        std::size_t rows = 1;
        for (const auto* dom : domains(parents)) rows *= dom->size();
        return rows;
    }

    void check_labels(const std::string& id, const std::vector<std::string>& labels, const char* what,
                      std::size_t min_count) {
        if (labels.size() < min_count)
            add(id, std::string("needs at least ") + std::to_string(min_count) + " " + what);
        if (has_duplicates(labels)) add(id, std::string(what) + " are not distinct");
    }

    void check(const ChanceNode& n) {
        check_labels(n.id, n.states, "states", 2);
        if (!check_incoming(n.id, n.parents, "parents") || n.states.empty()) return;
        const std::size_t rows = row_count(n.parents);
        const std::size_t width = n.states.size();
        if (n.table.size() != rows * width) {
            add(n.id, "table has " + std::to_string(n.table.size()) + " entries, expected " +
                          std::to_string(rows * width) + " (" + std::to_string(rows) + " rows x " +
                          std::to_string(width) + " states)");
            return;
        }
        std::size_t row = 0;
        for_each_configuration(domains(n.parents), [&](const std::vector<std::string>& config) {
            double sum = 0.0;
            bool bad_entry = false;
            for (std::size_t k = 0; k < width; ++k) {
                const double p = n.table[row * width + k];
                if (!std::isfinite(p) || p < 0.0 || p > 1.0) bad_entry = true;
                sum += p;
            }
            const std::string where = "row " + std::to_string(row) + " (" + join(config) + ")";
            if (bad_entry) add(n.id, where + " has a probability outside [0,1]");
            else if (std::abs(sum - 1.0) > kProbabilityTolerance) {
                std::ostringstream os;
                os.precision(12);
                os << where << " sums to " << sum;
                add(n.id, os.str());
            }
            ++row;
        });
    }

    void check(const DecisionNode& n) {
        check_labels(n.id, n.alternatives, "alternatives", 1);
        check_incoming(n.id, n.informs, "informs");
    }

    void check(const ValueNode& n) {
        if (!check_incoming(n.id, n.parents, "parents")) return;
        const std::size_t rows = row_count(n.parents);
        if (n.table.size() != rows) {
            add(n.id, "table has " + std::to_string(n.table.size()) + " entries, expected " + std::to_string(rows));
            return;
        }
        for (std::size_t i = 0; i < rows; ++i)
            if (!std::isfinite(n.table[i])) add(n.id, "table entry " + std::to_string(i) + " is not finite");
    }

    std::vector<std::vector<std::size_t>> children() const {
        std::vector<std::vector<std::size_t>> out(d_.nodes.size());
        for (std::size_t i = 0; i < d_.nodes.size(); ++i)
            for (const auto& p : incoming_of(d_.nodes[i])) {
                auto it = index_.find(p);
                if (it != index_.end()) out[it->second].push_back(i);
            }
        return out;
    }

    std::vector<char> reachable_from(std::size_t start, const std::vector<std::vector<std::size_t>>& kids) const {
        std::vector<char> seen(d_.nodes.size(), 0);
        std::vector<std::size_t> stack(kids[start].begin(), kids[start].end());
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = 1;
            stack.insert(stack.end(), kids[v].begin(), kids[v].end());
        }
        return seen;
    }

    void check_cycles() {
        const auto kids = children();
        for (std::size_t i = 0; i < d_.nodes.size(); ++i)
            if (reachable_from(i, kids)[i]) {
                add(node_id(d_.nodes[i]), "lies on a directed cycle");
                cyclic_ = true;
            }
    }

    void check_order() {
        std::unordered_map<std::string, std::size_t> position;
        for (std::size_t k = 0; k < d_.decision_order.size(); ++k) {
            const auto& id = d_.decision_order[k];
            auto it = index_.find(id);
            if (it == index_.end()) add(id, "decision_order references unknown node");
            else if (node_kind(d_.nodes[it->second]) != NodeKind::decision)
                add(id, "decision_order references a non-decision node");
            else if (!position.emplace(id, k).second) add(id, "appears more than once in decision_order");
        }
        for (const auto& node : d_.nodes)
            if (node_kind(node) == NodeKind::decision && !position.contains(node_id(node)))
                add(node_id(node), "decision missing from decision_order");
        if (cyclic_) return;

        const auto kids = children();
        for (const auto& [from, from_pos] : position) {
            const auto seen = reachable_from(index_.at(from), kids);
            for (const auto& [to, to_pos] : position)
                if (seen[index_.at(to)] && to_pos < from_pos)
                    add(to, "decision_order places it before '" + from + "' but a path " + from + " -> " + to +
                                " exists");
        }
        // Informs may only name decisions that come earlier.
        for (const auto& node : d_.nodes) {
            const auto* dec = std::get_if<DecisionNode>(&node);
            if (!dec || !position.contains(dec->id)) continue;
            for (const auto& inf : dec->informs) {
                auto it = position.find(inf);
                if (it != position.end() && it->second > position.at(dec->id))
                    add(dec->id, "informs references later decision '" + inf + "'");
            }
        }
    }

    const InfluenceDiagram& d_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Violation> out_;
    bool cyclic_ = false;
};

} // namespace

std::vector<Violation> validate(const InfluenceDiagram& diagram) {
    auto out = Validator(diagram).run();
    // Cycle reports can repeat across decision_order checks; keep first occurrence.
    std::vector<Violation> unique;
    for (auto& v : out)
        if (std::ranges::find(unique, v) == unique.end()) unique.push_back(std::move(v));
    return unique;
}

std::vector<std::vector<std::string>> parent_configurations(const InfluenceDiagram& diagram,
                                                            std::string_view node_id_) {
    const Node* node = diagram.find(node_id_);
    if (!node) throw UnknownNodeError(std::string(node_id_));
    std::vector<const std::vector<std::string>*> domains;
    for (const auto& p : incoming_of(*node)) {
        const Node* parent = diagram.find(p);
        if (!parent) throw UnknownNodeError(p);
        domains.push_back(&labels_of(*parent));
    }
    std::vector<std::vector<std::string>> out;
    for_each_configuration(domains, [&](const std::vector<std::string>& c) { out.push_back(c); });
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

std::string describe(const Json& j, std::size_t index) {
    if (j.is_object() && j.contains("id") && j["id"].is_string()) return "node '" + j["id"].get<std::string>() + "'";
    return "node #" + std::to_string(index);
}

std::vector<std::string> string_list(const Json& node, const char* key, const std::string& where, bool required) {
    if (!node.contains(key)) {
        if (required) throw FormatError(where + ": missing field '" + key + "'");
        return {};
    }
    const auto& arr = node[key];
    if (!arr.is_array()) throw FormatError(where + ": field '" + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& item : arr) {
        if (!item.is_string()) throw FormatError(where + ": field '" + key + "' must contain strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::vector<double> number_list(const Json& node, const char* key, const std::string& where) {
    if (!node.contains(key)) throw FormatError(where + ": missing field '" + key + "'");
    const auto& arr = node[key];
    if (!arr.is_array()) throw FormatError(where + ": field '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& item : arr) {
        if (!item.is_number()) throw FormatError(where + ": field '" + key + "' must contain numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

} // namespace

InfluenceDiagram diagram_from_json(const Json& json) {
    if (!json.is_object()) throw FormatError("model must be a JSON object");
    if (!json.contains("nodes") || !json["nodes"].is_array()) throw FormatError("model needs a 'nodes' array");
    InfluenceDiagram d;
    std::size_t index = 0;
    for (const auto& n : json["nodes"]) {
        const std::string where = describe(n, index++);
        if (!n.is_object()) throw FormatError(where + ": must be an object");
        if (!n.contains("id") || !n["id"].is_string()) throw FormatError(where + ": missing string field 'id'");
        if (!n.contains("kind") || !n["kind"].is_string()) throw FormatError(where + ": missing string field 'kind'");
        const auto id = n["id"].get<std::string>();
        const auto kind = n["kind"].get<std::string>();
        if (kind == "chance") {
            d.nodes.emplace_back(ChanceNode{id, string_list(n, "states", where, true),
                                            string_list(n, "parents", where, false), number_list(n, "table", where)});
        } else if (kind == "decision") {
            d.nodes.emplace_back(DecisionNode{id, string_list(n, "alternatives", where, true),
                                              string_list(n, "informs", where, false)});
        } else if (kind == "value") {
            d.nodes.emplace_back(
                ValueNode{id, string_list(n, "parents", where, false), number_list(n, "table", where)});
        } else {
            throw FormatError(where + ": unknown kind '" + kind + "'");
        }
    }
    d.decision_order = string_list(json, "decision_order", "model", false);
    return d;
}

InfluenceDiagram parse_diagram(std::string_view text) {
    Json json;
    try {
        json = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
        throw FormatError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what(), line);
    }
    return diagram_from_json(json);
}

Json diagram_to_json(const InfluenceDiagram& diagram) {
    Json nodes = Json::array();
    for (const auto& node : diagram.nodes) {
        Json j;
        j["id"] = node_id(node);
        j["kind"] = to_string(node_kind(node));
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ChanceNode>) {
                    j["states"] = n.states;
                    j["parents"] = n.parents;
                    j["table"] = n.table;
                } else if constexpr (std::is_same_v<T, DecisionNode>) {
                    j["alternatives"] = n.alternatives;
                    j["informs"] = n.informs;
                } else {
                    j["parents"] = n.parents;
                    j["table"] = n.table;
                }
            },
            node);
        nodes.push_back(std::move(j));
    }
    Json out;
    out["nodes"] = std::move(nodes);
    out["decision_order"] = diagram.decision_order;
    return out;
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

std::size_t CompiledDiagram::variable_index(std::string_view id) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i].id == id) return i;
    throw UnknownNodeError(std::string(id));
}

std::size_t configuration_index(const CompiledDiagram& compiled, std::span<const std::size_t> vars,
                                std::span<const std::size_t> assignment) {
    std::size_t index = 0;
    for (auto v : vars) index = index * compiled.variables[v].cardinality() + assignment[v];
    return index;
}

std::uint64_t configuration_count(const CompiledDiagram& compiled, std::span<const std::size_t> vars) {
    std::uint64_t count = 1;
    for (auto v : vars) {
        const std::uint64_t card = compiled.variables[v].cardinality();
        if (card != 0 && count > std::numeric_limits<std::uint64_t>::max() / card)
            return std::numeric_limits<std::uint64_t>::max();
        count *= card;
    }
    return count;
}

CompiledDiagram compile(const InfluenceDiagram& diagram) {
    if (auto violations = validate(diagram); !violations.empty()) throw InvalidDiagramError(std::move(violations));

    CompiledDiagram c;
    std::unordered_map<std::string, std::size_t> var_of;
    for (const auto& node : diagram.nodes) {
        if (node_kind(node) == NodeKind::value) continue;
        var_of.emplace(node_id(node), c.variables.size());
        c.variables.push_back({node_id(node), node_kind(node), labels_of(node)});
    }
    auto resolve = [&](const std::vector<std::string>& ids) {
        std::vector<std::size_t> out;
        for (const auto& id : ids) out.push_back(var_of.at(id));
        return out;
    };

    c.chance_slot.assign(c.variables.size(), CompiledDiagram::npos);
    c.decision_slot.assign(c.variables.size(), CompiledDiagram::npos);
    for (const auto& node : diagram.nodes) {
        if (const auto* n = std::get_if<ChanceNode>(&node)) {
            CompiledChance ch{var_of.at(n->id), resolve(n->parents), n->table};
            const std::size_t width = n->states.size();
            for (std::size_t row = 0; row * width < ch.cpt.size(); ++row) {
                double sum = 0.0;
                for (std::size_t k = 0; k < width; ++k) sum += ch.cpt[row * width + k];
                for (std::size_t k = 0; k < width; ++k) ch.cpt[row * width + k] /= sum;
            }
            c.chance_slot[ch.variable] = c.chance.size();
            c.chance.push_back(std::move(ch));
        } else if (const auto* v = std::get_if<ValueNode>(&node)) {
            c.values.push_back({v->id, resolve(v->parents), v->table});
        }
    }

    for (const auto& id : diagram.decision_order) {
        const auto& node = std::get<DecisionNode>(*diagram.find(id));
        CompiledDecision dec{var_of.at(id), resolve(node.informs)};
        auto add = [&](std::size_t var) {
            if (std::ranges::find(dec.information, var) != dec.information.end()) return;
            dec.information.push_back(var);
            c.notes.push_back("no-forgetting: added arc " + c.variables[var].id + " -> " + id);
        };
        for (const auto& earlier : c.decisions) {
            for (auto var : earlier.information) add(var);
            add(earlier.variable);
        }
        c.decision_slot[dec.variable] = c.decisions.size();
        c.decisions.push_back(std::move(dec));
    }

    // Topological order over variables, lowest declaration index first.
    const std::size_t n = c.variables.size();
    std::vector<std::vector<std::size_t>> kids(n);
    std::vector<std::size_t> indegree(n, 0);
    auto arc = [&](std::size_t from, std::size_t to) {
        kids[from].push_back(to);
        ++indegree[to];
    };
    for (const auto& ch : c.chance)
        for (auto p : ch.parents) arc(p, ch.variable);
    for (const auto& node : diagram.nodes)
        if (const auto* d = std::get_if<DecisionNode>(&node))
            for (const auto& p : d->informs) arc(var_of.at(p), var_of.at(d->id));
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<std::size_t> topo;
    while (!ready.empty()) {
        auto v = ready.top();
        ready.pop();
        topo.push_back(v);
        for (auto k : kids[v])
            if (--indegree[k] == 0) ready.push(k);
    }

    std::vector<char> placed(n, 0);
    for (const auto& dec : c.decisions) {
        for (auto v : topo)
            if (!placed[v] && c.variables[v].kind == NodeKind::chance &&
                std::ranges::find(dec.information, v) != dec.information.end()) {
                c.sequence.push_back(v);
                placed[v] = 1;
            }
        c.sequence.push_back(dec.variable);
        placed[dec.variable] = 1;
    }
    for (auto v : topo)
        if (!placed[v]) c.sequence.push_back(v);
    return c;
}

// ---------------------------------------------------------------------------
// Unrolling
// ---------------------------------------------------------------------------

namespace {

class TreeBuilder {
public:
    explicit TreeBuilder(const CompiledDiagram& c)
        : c_(c), assignment_(c.variables.size(), 0), assigned_(c.variables.size(), 0) {
        // Chance ancestors of each chance variable (inclusive), stopping at decisions.
        ancestors_.resize(c.variables.size());
        for (std::size_t v = 0; v < c.variables.size(); ++v) {
            if (c.chance_slot[v] == CompiledDiagram::npos) continue;
            std::vector<char> seen(c.variables.size(), 0);
            std::vector<std::size_t> stack{v};
            while (!stack.empty()) {
                auto u = stack.back();
                stack.pop_back();
                if (seen[u]) continue;
                seen[u] = 1;
                for (auto p : c.chance[c.chance_slot[u]].parents)
                    if (c.chance_slot[p] != CompiledDiagram::npos) stack.push_back(p);
            }
            ancestors_[v] = std::move(seen);
        }
    }

    DecisionTree build() {
        tree_.variables = c_.variables;
        tree_.nodes.emplace_back();
        expand(0, 0, 1.0);
        return std::move(tree_);
    }

private:
    // P(assigned chance variables | assigned decisions), summing out the
    // unassigned chance ancestors of the evidence.
    double evidence_probability() {
        std::vector<std::size_t> relevant;
        std::vector<char> in(c_.variables.size(), 0);
        for (std::size_t v = 0; v < c_.variables.size(); ++v) {
            if (!assigned_[v] || c_.chance_slot[v] == CompiledDiagram::npos) continue;
            for (std::size_t u = 0; u < c_.variables.size(); ++u)
                if (ancestors_[v][u]) in[u] = 1;
        }
        std::vector<std::size_t> free;
        for (std::size_t u = 0; u < c_.variables.size(); ++u) {
            if (!in[u]) continue;
            relevant.push_back(u);
            if (!assigned_[u]) free.push_back(u);
        }
        auto scratch = assignment_;
        for (auto u : free) scratch[u] = 0;
        double total = 0.0;
        while (true) {
            double p = 1.0;
            for (auto u : relevant) {
                const auto& ch = c_.chance[c_.chance_slot[u]];
                const std::size_t row = configuration_index(c_, ch.parents, scratch);
                p *= ch.cpt[row * c_.variables[u].cardinality() + scratch[u]];
                if (p == 0.0) break;
            }
            total += p;
            std::size_t i = free.size();
            while (i > 0) {
                --i;
                if (++scratch[free[i]] < c_.variables[free[i]].cardinality()) break;
                scratch[free[i]] = 0;
                if (i == 0) return total;
            }
            if (free.empty()) return total;
        }
    }

    double payoff() const {
        double sum = 0.0;
        for (const auto& v : c_.values) sum += v.table[configuration_index(c_, v.parents, assignment_)];
        return sum;
    }

    void expand(std::size_t node, std::size_t depth, double joint) {
        if (depth == c_.sequence.size()) {
            tree_.nodes[node].kind = TreeNode::Kind::leaf;
            tree_.nodes[node].payoff = payoff();
            return;
        }
        const std::size_t var = c_.sequence[depth];
        const std::size_t card = c_.variables[var].cardinality();
        const bool is_chance = c_.chance_slot[var] != CompiledDiagram::npos;
        const std::size_t first = tree_.nodes.size();
        tree_.nodes.resize(first + card);
        {
            auto& n = tree_.nodes[node];
            n.kind = is_chance ? TreeNode::Kind::chance : TreeNode::Kind::decision;
            n.variable = var;
            n.first_child = first;
            n.child_count = card;
        }
        assigned_[var] = 1;
        for (std::size_t k = 0; k < card; ++k) {
            assignment_[var] = k;
            double child_joint = joint;
            double edge = 1.0;
            if (is_chance) {
                child_joint = joint > 0.0 ? evidence_probability() : 0.0;
                edge = joint > 0.0 ? child_joint / joint : 0.0;
            }
            tree_.nodes[first + k].probability = edge;
            expand(first + k, depth + 1, child_joint);
        }
        assigned_[var] = 0;
        assignment_[var] = 0;
    }

    const CompiledDiagram& c_;
    std::vector<std::size_t> assignment_;
    std::vector<char> assigned_;
    std::vector<std::vector<char>> ancestors_;
    DecisionTree tree_;
};

} // namespace

std::size_t DecisionTree::leaf_count() const noexcept {
    return static_cast<std::size_t>(
        std::ranges::count_if(nodes, [](const TreeNode& n) { return n.kind == TreeNode::Kind::leaf; }));
}

std::size_t DecisionTree::depth() const noexcept {
    std::size_t depth = 0;
    for (std::size_t i = 0; !nodes.empty() && nodes[i].kind != TreeNode::Kind::leaf; i = nodes[i].first_child)
        ++depth;
    return depth;
}

DecisionTree unroll(const CompiledDiagram& compiled, std::uint64_t leaf_cap) {
    if (configuration_count(compiled, compiled.sequence) > leaf_cap)
        throw CapacityError("unrolled tree would exceed " + std::to_string(leaf_cap) + " leaves");
    return TreeBuilder(compiled).build();
}

DecisionTree unroll(const InfluenceDiagram& diagram, std::uint64_t leaf_cap) {
    return unroll(compile(diagram), leaf_cap);
}

} // namespace dqkit
