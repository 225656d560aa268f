#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dqkit::testing {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

InfluenceDiagram widget_diagram(double p_good) {
    InfluenceDiagram d;
    d.nodes.emplace_back(ChanceNode{"G", {"good", "bad"}, {}, {p_good, 1.0 - p_good}});
    d.nodes.emplace_back(DecisionNode{"D", {"accept", "reject"}, {}});
    d.nodes.emplace_back(ValueNode{"V", {"G", "D"}, {50, 0, -70, 0}});
    d.decision_order = {"D"};
    return d;
}

InfluenceDiagram widget_with_test() {
    InfluenceDiagram d = widget_diagram();
    d.nodes.insert(d.nodes.begin() + 1, ChanceNode{"T", {"pass", "fail"}, {"G"}, {1, 0, 0, 1}});
    return d;
}

InfluenceDiagram perfect_information(bool observed) {
    InfluenceDiagram d;
    d.nodes.emplace_back(ChanceNode{"S", {"s0", "s1"}, {}, {0.5, 0.5}});
    d.nodes.emplace_back(DecisionNode{"d", {"s0", "s1"}, observed ? std::vector<std::string>{"S"}
                                                                   : std::vector<std::string>{}});
    d.nodes.emplace_back(ValueNode{"v", {"S", "d"}, {1, 0, 0, 1}});
    d.decision_order = {"d"};
    return d;
}

InfluenceDiagram informed_decision() {
    InfluenceDiagram d;
    d.nodes.emplace_back(ChanceNode{"i", {"low", "high"}, {}, {0.7, 0.3}});
    d.nodes.emplace_back(ChanceNode{"s", {"buys", "declines"}, {"i"}, {0.1, 0.9, 0.6, 0.4}});
    d.nodes.emplace_back(DecisionNode{"d", {"offer", "no_offer"}, {"i"}});
    d.nodes.emplace_back(ValueNode{"v", {"s", "d"}, {40, 10, -5, 0}});
    d.decision_order = {"d"};
    return d;
}

InfluenceDiagram constant_decision() {
    InfluenceDiagram d;
    d.nodes.emplace_back(DecisionNode{"choice", {"a", "b"}, {}});
    d.nodes.emplace_back(ValueNode{"v", {"choice"}, {3, 5}});
    d.decision_order = {"choice"};
    return d;
}

} // namespace dqkit::testing
