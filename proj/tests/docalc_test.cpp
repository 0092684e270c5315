#include "support.hpp"

#include "cdmg/docalc.hpp"
#include "cdmg/separation.hpp"

#include <doctest.h>

using namespace cdmg;
using cdmg::testing::fixture;

namespace {

RuleQuery query(const MixedGraph& g, Rule r, std::vector<std::string> y, std::vector<std::string> x,
                std::vector<std::string> z = {}, std::vector<std::string> w = {}) {
    return RuleQuery{g, g.vertex_set(y), g.vertex_set(x), g.vertex_set(z), g.vertex_set(w), r};
}

} // namespace

TEST_SUITE("docalc") {

TEST_CASE("x_given_w") {
    auto chain = MixedGraph::from_names({"W", "X"}, {{"X", "W"}}, {});
    CHECK(x_given_w(chain, {chain.index("X")}, {}, {}) == VertexSet{chain.index("X")});
    CHECK(x_given_w(chain, {chain.index("X")}, {chain.index("W")}, {}).empty());
    auto d = fixture("fig2d").graph;
    CHECK(x_given_w(d, {d.index("CX")}, {d.index("CW")}, {d.index("CZ")}) == VertexSet{d.index("CX")});
}

TEST_CASE("rule applicability on figure queries") {
    CHECK(rule_applies(query(fixture("fig2a").graph, Rule::R2, {"CY"}, {"CX"})));
    CHECK(rule_applies(query(fixture("fig2d").graph, Rule::R3, {"CW"}, {"CX"}, {"CZ"})));
    CHECK_FALSE(rule_applies(query(fixture("fig3b").graph, Rule::R2, {"CY"}, {"CX"})));
}

TEST_CASE("rule counterexample for the bow") {
    auto doc = fixture("fig3b");
    auto q = query(doc.graph, Rule::R2, {"CY"}, {"CX"});
    auto wit = rule_counterexample(q, ClusterSpec::uniform(doc.graph, 2));
    REQUIRE(wit);
    CHECK(compatible(wit->admg, wit->spec, doc.graph));
    CHECK_FALSE(rule_applies(lift_query(q, wit->admg, wit->spec)));
}

TEST_CASE("no counterexample when the rule applies") {
    auto doc = fixture("fig2a");
    auto q = query(doc.graph, Rule::R2, {"CY"}, {"CX"});
    CHECK_THROWS_AS(rule_counterexample(q, ClusterSpec::uniform(doc.graph, 2)), Error);
}

TEST_CASE("counterexample realizing a two-cycle") {
    auto doc = fixture("fig3a");
    auto q = query(doc.graph, Rule::R2, {"CY"}, {"CX"});
    REQUIRE_FALSE(rule_applies(q));
    auto wit = rule_counterexample(q, ClusterSpec::uniform(doc.graph, 2));
    REQUIRE(wit);
    const auto& a = wit->admg;
    CHECK(compatible(a, wit->spec, doc.graph));
    CHECK_NOTHROW(validate_admg(a));
    bool forward = false, backward = false;
    for (const auto& e : a.directed_edges()) {
        forward |= a.name(e.tail).starts_with("CX") && a.name(e.head).starts_with("CY");
        backward |= a.name(e.tail).starts_with("CY") && a.name(e.head).starts_with("CX");
    }
    CHECK(forward);
    CHECK(backward);
    CHECK_FALSE(rule_applies(lift_query(q, a, wit->spec)));
}

}
