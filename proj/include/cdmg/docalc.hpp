#ifndef CDMG_DOCALC_HPP
#define CDMG_DOCALC_HPP

#include "cdmg/graph.hpp"
#include "cdmg/separation.hpp"

#include <optional>
#include <string>

namespace cdmg {

struct CompatibleAdmgWitness;

enum class Rule { R1 = 1, R2 = 2, R3 = 3 };

std::string to_string(Rule r);

/// P(y | do(x), do(z), w) style query: the rule removes or exchanges x.
struct RuleQuery {
    MixedGraph graph;
    VertexSet y;
    VertexSet x;
    VertexSet z;
    VertexSet w;
    Rule rule = Rule::R1;
};

/// What a rule asks for: y and x d-separated by `given` in `mutilated`.
struct RuleCondition {
    MixedGraph mutilated;
    VertexSet incoming;
    VertexSet outgoing;
    VertexSet given;
    VertexSet x_w; // only meaningful for R3
};

/// Vertices of x that are not ancestors of w once edges into z are cut.
VertexSet x_given_w(const MixedGraph& g, const VertexSet& x, const VertexSet& w, const VertexSet& z);

RuleCondition rule_condition(const RuleQuery& q);
bool rule_applies(const RuleQuery& q);
/// Active path showing why the rule fails, if it does.
std::optional<Walk> rule_violation(const RuleQuery& q);

/// The same query on an ADMG, with every cluster replaced by its members.
RuleQuery lift_query(const RuleQuery& q, const MixedGraph& admg, const ClusterSpec& spec);

/// A compatible ADMG where the lifted rule does not apply. Tries the
/// two-copies construction first, then exhaustive enumeration with the
/// cluster sizes from `spec` (unknown sizes become 2).
std::optional<CompatibleAdmgWitness> rule_counterexample(const RuleQuery& q, const ClusterSpec& spec,
                                                         std::size_t enumeration_limit = 200000);

} // namespace cdmg

#endif
