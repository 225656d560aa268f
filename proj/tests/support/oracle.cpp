#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace dqkit::testing {

InfluenceDiagram random_diagram(std::mt19937_64& rng, const RandomDiagramOptions& options) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto coin = [&](double p) { return unit(rng) < p; };
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    while (true) {
        const int n_decisions = pick(0, 9) == 0 ? 0 : pick(1, options.max_decisions);
        const int n_chance = pick(1, options.max_chance);

        // Sequence of (kind, stage): chance nodes are spread over the stages
        // before, between and after the decisions.
        std::vector<int> stage_of_chance(n_chance);
        for (auto& s : stage_of_chance) s = pick(0, n_decisions);

        InfluenceDiagram d;
        std::vector<std::string> earlier;          // chance + decision ids declared so far
        std::vector<std::string> earlier_chance;
        int chance_id = 0;
        for (int stage = 0; stage <= n_decisions; ++stage) {
            for (int c = 0; c < n_chance; ++c) {
                if (stage_of_chance[c] != stage) continue;
                ChanceNode node{"X" + std::to_string(chance_id++), {"0", "1"}, {}, {}};
                for (const auto& e : earlier)
                    if (node.parents.size() < 2 && coin(0.4)) node.parents.push_back(e);
                std::size_t rows = 1;
                for (const auto& p : node.parents) {
                    const Node* parent = d.find(p);
                    rows *= std::holds_alternative<ChanceNode>(*parent)
                                ? std::get<ChanceNode>(*parent).states.size()
                                : std::get<DecisionNode>(*parent).alternatives.size();
                }
                for (std::size_t r = 0; r < rows; ++r) {
                    const double p = coin(0.15) ? (coin(0.5) ? 0.0 : 1.0) : unit(rng);
                    node.table.push_back(p);
                    node.table.push_back(1.0 - p);
                }
                earlier.push_back(node.id);
                earlier_chance.push_back(node.id);
                d.nodes.emplace_back(std::move(node));
            }
            if (stage == n_decisions) break;
            DecisionNode dec{"D" + std::to_string(stage), {}, {}};
            const int n_alt = pick(1, options.max_alternatives);
            for (int a = 0; a < n_alt; ++a) dec.alternatives.push_back("a" + std::to_string(a));
            for (const auto& c : earlier_chance)
                if (coin(0.5)) dec.informs.push_back(c);
            earlier.push_back(dec.id);
            d.decision_order.push_back(dec.id);
            d.nodes.emplace_back(std::move(dec));
        }
        const int n_values = pick(1, 2);
        for (int v = 0; v < n_values; ++v) {
            ValueNode node{"V" + std::to_string(v), {}, {}};
            for (const auto& e : earlier)
                if (node.parents.size() < 3 && coin(0.5)) node.parents.push_back(e);
            std::size_t rows = 1;
            for (const auto& p : node.parents) {
                const Node* parent = d.find(p);
                rows *= std::holds_alternative<ChanceNode>(*parent)
                            ? std::get<ChanceNode>(*parent).states.size()
                            : std::get<DecisionNode>(*parent).alternatives.size();
            }
            for (std::size_t r = 0; r < rows; ++r) node.table.push_back(std::round(unit(rng) * 40.0 - 20.0) / 2.0);
            d.nodes.emplace_back(std::move(node));
        }
        if (BruteForce(d).policy_count() <= options.max_policies) return d;
    }
}

// ---------------------------------------------------------------------------

BruteForce::BruteForce(const InfluenceDiagram& diagram) {
    for (const auto& node : diagram.nodes) {
        if (const auto* c = std::get_if<ChanceNode>(&node)) vars_.push_back({c->id, false, c->states});
        if (const auto* d = std::get_if<DecisionNode>(&node)) vars_.push_back({d->id, true, d->alternatives});
    }
    auto resolve = [&](const std::vector<std::string>& ids) {
        std::vector<std::size_t> out;
        for (const auto& id : ids) out.push_back(index_of(id));
        return out;
    };
    for (const auto& node : diagram.nodes) {
        if (const auto* c = std::get_if<ChanceNode>(&node)) {
            Table t{index_of(c->id), resolve(c->parents), c->table};
            const std::size_t w = c->states.size();
            for (std::size_t r = 0; r < t.entries.size() / w; ++r) {
                double s = 0.0;
                for (std::size_t k = 0; k < w; ++k) s += t.entries[r * w + k];
                for (std::size_t k = 0; k < w; ++k) t.entries[r * w + k] /= s;
            }
            chance_.push_back(std::move(t));
        }
        if (const auto* v = std::get_if<ValueNode>(&node))
            values_.push_back({std::numeric_limits<std::size_t>::max(), resolve(v->parents), v->table});
    }
    for (const auto& id : diagram.decision_order) {
        const auto& dec = std::get<DecisionNode>(*diagram.find(id));
        std::vector<std::size_t> info = resolve(dec.informs);
        for (std::size_t k = 0; k < decisions_.size(); ++k) {
            for (auto v : information_[k])
                if (std::ranges::find(info, v) == info.end()) info.push_back(v);
            if (std::ranges::find(info, decisions_[k]) == info.end()) info.push_back(decisions_[k]);
        }
        decisions_.push_back(index_of(id));
        information_.push_back(std::move(info));
    }

    std::vector<std::size_t> a(vars_.size(), 0);
    while (true) {
        assignments_.push_back(a);
        bool carry = true;
        for (std::size_t i = vars_.size(); carry && i > 0; --i) {
            if (vars_[i - 1].decision) continue;
            if (++a[i - 1] < vars_[i - 1].labels.size()) carry = false;
            else a[i - 1] = 0;
        }
        if (carry) break;
    }
}

std::size_t BruteForce::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].id == id) return i;
    throw std::invalid_argument("unknown variable " + id);
}

std::size_t BruteForce::config(const std::vector<std::size_t>& vars, const std::vector<std::size_t>& a) const {
    std::size_t idx = 0;
    for (auto v : vars) idx = idx * vars_[v].labels.size() + a[v];
    return idx;
}

std::uint64_t BruteForce::policy_count() const {
    double count = 1.0;
    for (std::size_t k = 0; k < decisions_.size(); ++k) {
        double configs = 1.0;
        for (auto v : information_[k]) configs *= static_cast<double>(vars_[v].labels.size());
        count *= std::pow(static_cast<double>(vars_[decisions_[k]].labels.size()), configs);
    }
    return count > 1e18 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(count);
}

template <class Choose>
double BruteForce::expectation(Choose&& choose) const {
    double total = 0.0;
    for (auto a : assignments_) {
        for (std::size_t k = 0; k < decisions_.size(); ++k) a[decisions_[k]] = choose(k, a);
        double p = 1.0;
        for (const auto& t : chance_) p *= t.entries[config(t.parents, a) * vars_[t.var].labels.size() + a[t.var]];
        if (p == 0.0) continue;
        double payoff = 0.0;
        for (const auto& t : values_) payoff += t.entries[config(t.parents, a)];
        total += p * payoff;
    }
    return total;
}

double BruteForce::evaluate(const Tables& tables) const {
    return expectation([&](std::size_t k, const std::vector<std::size_t>& a) {
        return tables[k][config(information_[k], a)];
    });
}

double BruteForce::evaluate(const Policy& policy) const {
    std::vector<std::vector<std::size_t>> rule_vars;
    std::vector<std::map<std::vector<std::string>, std::size_t>> lookup;
    for (auto dec : decisions_) {
        const auto* rule = policy.find(vars_[dec].id);
        if (!rule) throw std::invalid_argument("policy misses " + vars_[dec].id);
        std::vector<std::size_t> ids;
        for (const auto& id : rule->information) ids.push_back(index_of(id));
        std::map<std::vector<std::string>, std::size_t> table;
        for (const auto& e : rule->entries) {
            auto it = std::ranges::find(vars_[dec].labels, e.alternative);
            if (it == vars_[dec].labels.end()) throw std::invalid_argument("illegal alternative " + e.alternative);
            table[e.configuration] = static_cast<std::size_t>(it - vars_[dec].labels.begin());
        }
        rule_vars.push_back(std::move(ids));
        lookup.push_back(std::move(table));
    }
    return expectation([&](std::size_t k, const std::vector<std::size_t>& a) {
        std::vector<std::string> key;
        for (auto v : rule_vars[k]) key.push_back(vars_[v].labels[a[v]]);
        return lookup[k].at(key);
    });
}

std::pair<double, BruteForce::Tables> BruteForce::optimum() const {
    Tables tables;
    for (std::size_t k = 0; k < decisions_.size(); ++k) {
        std::size_t configs = 1;
        for (auto v : information_[k]) configs *= vars_[v].labels.size();
        tables.emplace_back(configs, 0);
    }
    double best = -std::numeric_limits<double>::infinity();
    Tables best_tables = tables;
    while (true) {
        const double v = evaluate(tables);
        if (v > best) {
            best = v;
            best_tables = tables;
        }
        bool carry = true;
        for (std::size_t k = tables.size(); carry && k > 0; --k) {
            auto& t = tables[k - 1];
            const auto alts = vars_[decisions_[k - 1]].labels.size();
            for (std::size_t i = t.size(); carry && i > 0; --i) {
                if (++t[i - 1] < alts) carry = false;
                else t[i - 1] = 0;
            }
        }
        if (carry) break;
    }
    return {best, best_tables};
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> roc_convex_hull(const RocCurve& curve) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : curve.points) pts.emplace_back(p.fpr, p.tpr);
    std::ranges::sort(pts);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<std::pair<double, double>> hull;
    auto cross = [](auto o, auto a, auto b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    for (const auto& p : pts) {
        // Keep clockwise turns only: the upper chain.
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

bool on_hull(const std::vector<std::pair<double, double>>& hull, double fpr, double tpr, double tolerance) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
        if (std::abs(hull[i].first - fpr) <= tolerance && std::abs(hull[i].second - tpr) <= tolerance) return true;
        if (i + 1 == hull.size()) break;
        const auto [x0, y0] = hull[i];
        const auto [x1, y1] = hull[i + 1];
        if (fpr < x0 - tolerance || fpr > x1 + tolerance) continue;
        if (x1 - x0 <= tolerance) {
            if (tpr >= std::min(y0, y1) - tolerance && tpr <= std::max(y0, y1) + tolerance) return true;
            continue;
        }
        const double y = y0 + (y1 - y0) * (fpr - x0) / (x1 - x0);
        if (std::abs(y - tpr) <= tolerance) return true;
    }
    return false;
}

} // namespace dqkit::testing
