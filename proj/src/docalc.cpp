#include "cdmg/docalc.hpp"

#include "cdmg/mutilation.hpp"
#include "cdmg/oracle.hpp"

namespace cdmg {

std::string to_string(Rule r) { return "R" + std::to_string(static_cast<int>(r)); }

VertexSet x_given_w(const MixedGraph& g, const VertexSet& x, const VertexSet& w, const VertexSet& z) {
    require_vertices(g, x);
    require_vertices(g, w);
    require_vertices(g, z);
    require_disjoint({&x, &w, &z});
    return x - ancestors(mutilate(g, z, {}), w);
}

namespace {

void check_query(const RuleQuery& q) {
    for (const auto* s : {&q.y, &q.x, &q.z, &q.w}) require_vertices(q.graph, *s);
    require_disjoint({&q.y, &q.x, &q.z, &q.w});
}

} // namespace

RuleCondition rule_condition(const RuleQuery& q) {
    check_query(q);
    RuleCondition c;
    c.given = q.z | q.w;
    switch (q.rule) {
    case Rule::R1:
        c.incoming = q.z;
        break;
    case Rule::R2:
        c.incoming = q.z;
        c.outgoing = q.x;
        break;
    case Rule::R3:
        c.x_w = x_given_w(q.graph, q.x, q.w, q.z);
        c.incoming = q.z | c.x_w;
        break;
    }
    c.mutilated = mutilate(q.graph, c.incoming, c.outgoing);
    return c;
}

std::optional<Walk> rule_violation(const RuleQuery& q) {
    const RuleCondition c = rule_condition(q);
    if (q.x.empty() || q.y.empty()) return std::nullopt;
    return find_active_path(c.mutilated, q.y, q.x, c.given);
}

bool rule_applies(const RuleQuery& q) { return !rule_violation(q).has_value(); }

RuleQuery lift_query(const RuleQuery& q, const MixedGraph& admg, const ClusterSpec& spec) {
    RuleQuery out;
    out.graph = admg;
    out.rule = q.rule;
    out.y = lift(q.graph, q.y, admg, spec);
    out.x = lift(q.graph, q.x, admg, spec);
    out.z = lift(q.graph, q.z, admg, spec);
    out.w = lift(q.graph, q.w, admg, spec);
    return out;
}

std::optional<CompatibleAdmgWitness> rule_counterexample(const RuleQuery& q, const ClusterSpec& spec,
                                                         std::size_t enumeration_limit) {
    const auto path = rule_violation(q);
    if (!path) throw Error(ErrorCode::RuleActuallyApplies, to_string(q.rule) + " applies; no counterexample exists");
    if (!spec.satisfies_assumption_1())
        throw Error(ErrorCode::AssumptionOneViolated, "counterexamples need every cluster to have two members");

    const RuleCondition c = rule_condition(q);
    const auto fails_on = [&](const CompatibleAdmgWitness& wit) {
        return !rule_applies(lift_query(q, wit.admg, wit.spec));
    };
    try {
        auto wit = theorem2_witness(q.graph, spec, c.mutilated, *path, c.given, descent_order(c.mutilated, c.given));
        if (fails_on(wit)) return wit;
    } catch (const Error&) {
        // fall through to enumeration
    }
    ClusterSpec sized;
    for (const auto& name : q.graph.names()) {
        const auto* info = spec.find(name);
        if (info && (info->members || info->size)) sized.set(name, *info);
        else sized.set(name, ClusterInfo{std::nullopt, 2});
    }
    std::optional<CompatibleAdmgWitness> found;
    try {
        enumerate_compatible_admgs(q.graph, sized, enumeration_limit, [&](const CompatibleAdmgWitness& wit) {
            if (!fails_on(wit)) return true;
            found = wit;
            return false;
        });
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SearchSpaceTooLarge) throw;
    }
    return found;
}

} // namespace cdmg
