#include "cdmg/identify.hpp"

#include <bit>
#include <map>
#include <memory>
#include <tuple>

namespace cdmg {

std::string to_string(VerdictKind k) {
    switch (k) {
    case VerdictKind::Identified: return "Identified";
    case VerdictKind::NonIdentifiable: return "NonIdentifiable";
    case VerdictKind::Unknown: return "Unknown";
    }
    return "Unknown";
}

const std::vector<TraceEntry>& derivation_trace(const Verdict& v) {
    if (v.kind != VerdictKind::Identified) throw Error(ErrorCode::NotIdentified, "no derivation: verdict is " + to_string(v.kind));
    return v.trace;
}

namespace {

using Mask = std::uint64_t;

struct Term {
    Mask t = 0, d = 0, o = 0;
    auto key() const { return std::tuple(t, d, o); }
};

struct Solution {
    ExprPtr expr;
    int cost = 0;  // probability leaves + sums
    int steps = 0; // trace length
    std::vector<TraceEntry> trace;
};
using SolutionPtr = std::shared_ptr<const Solution>;

// Ties keep the first solution found, so total probability is tried before
// the single-rule rewrites.
bool better(const Solution& a, const Solution& b) { return a.cost < b.cost; }

struct BudgetExhausted {};

class Search {
public:
    Search(const MixedGraph& g, const Budget& budget) : g_(g), budget_(budget) {}

    SolutionPtr solve(const Term& term, int depth) {
        if (term.d == 0) return leaf(term);
        if (depth == 0) return nullptr;
        const auto key = std::tuple_cat(term.key(), std::tuple(depth));
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (++expansions_ > budget_.max_nodes) throw BudgetExhausted{};

        SolutionPtr best;
        auto offer = [&](SolutionPtr s) {
            if (s && (!best || better(*s, *best))) best = std::move(s);
        };
        const std::size_t n = g_.size();
        const Mask used = term.t | term.d | term.o;

        // Total probability over one new variable.
        for (Vertex c = 0; c < n; ++c) {
            const Mask bit = Mask{1} << c;
            if (used & bit) continue;
            auto main = solve({term.t, term.d, term.o | bit}, depth - 1);
            if (!main) continue;
            auto aux = solve({bit, term.d, term.o}, depth - 1);
            if (!aux) continue;
            auto s = std::make_shared<Solution>();
            const Var v{g_.name(c), 0};
            s->expr = make_sum({v}, make_product({main->expr, aux->expr}));
            s->cost = main->cost + aux->cost + 1;
            TraceEntry e;
            e.rule = "TP";
            e.before = render(term);
            e.after = to_ascii(make_sum({v}, make_product({prob({term.t, term.d, term.o | bit}), prob({bit, term.d, term.o})})));
            s->trace.push_back(std::move(e));
            append(*s, *main);
            append(*s, *aux);
            offer(s);
        }
        // Rule 3: drop one intervention.
        for_each_bit(term.d, [&](Vertex x) {
            const Term next{term.t, term.d & ~(Mask{1} << x), term.o};
            single(term, next, Rule::R3, bit_set(x), next.d, term.o, depth, offer);
        });
        // Rule 2: intervention becomes observation.
        for_each_bit(term.d, [&](Vertex x) {
            const Mask bit = Mask{1} << x;
            const Term next{term.t, term.d & ~bit, term.o | bit};
            single(term, next, Rule::R2, bit_set(x), next.d, term.o, depth, offer);
        });
        // Rule 1: drop one observation.
        for_each_bit(term.o, [&](Vertex w) {
            const Term next{term.t, term.d, term.o & ~(Mask{1} << w)};
            single(term, next, Rule::R1, bit_set(w), term.d, next.o, depth, offer);
        });
        // Rule 2 backwards: observation becomes intervention.
        for_each_bit(term.o, [&](Vertex w) {
            const Mask bit = Mask{1} << w;
            const Term next{term.t, term.d | bit, term.o & ~bit};
            single(term, next, Rule::R2, bit_set(w), term.d, next.o, depth, offer);
        });
        // Chain rule on a joint target.
        if (std::popcount(term.t) > 1) {
            for_each_bit(term.t, [&](Vertex v) {
                const Mask bit = Mask{1} << v;
                auto main = solve({term.t & ~bit, term.d, term.o | bit}, depth - 1);
                if (!main) return;
                auto aux = solve({bit, term.d, term.o}, depth - 1);
                if (!aux) return;
                auto s = std::make_shared<Solution>();
                s->expr = make_product({main->expr, aux->expr});
                s->cost = main->cost + aux->cost;
                TraceEntry e;
                e.rule = "CHAIN";
                e.before = render(term);
                e.after = to_ascii(make_product({prob({term.t & ~bit, term.d, term.o | bit}), prob({bit, term.d, term.o})}));
                s->trace.push_back(std::move(e));
                append(*s, *main);
                append(*s, *aux);
                offer(s);
            });
        }
        memo_.emplace(key, best);
        return best;
    }

    std::size_t expansions() const { return expansions_; }

    ExprPtr prob(const Term& term) const { return make_prob(vars(term.t), vars(term.o), vars(term.d)); }
    std::string render(const Term& term) const { return to_ascii(prob(term)); }

private:
    static VertexSet bit_set(Vertex v) { return VertexSet{v}; }

    VertexSet set_of(Mask m) const {
        VertexSet s;
        for_each_bit(m, [&](Vertex v) { s.insert(v); });
        return s;
    }

    std::vector<Var> vars(Mask m) const {
        std::vector<Var> out;
        for_each_bit(m, [&](Vertex v) { out.push_back({g_.name(v), 0}); });
        return out;
    }

    template <class F>
    static void for_each_bit(Mask m, F f) {
        while (m) {
            const int i = std::countr_zero(m);
            f(static_cast<Vertex>(i));
            m &= m - 1;
        }
    }

    SolutionPtr leaf(const Term& term) {
        auto s = std::make_shared<Solution>();
        s->expr = prob(term);
        s->cost = 1;
        return s;
    }

    static void append(Solution& into, const Solution& child) {
        into.trace.insert(into.trace.end(), child.trace.begin(), child.trace.end());
        into.steps = static_cast<int>(into.trace.size());
    }

    template <class Offer>
    void single(const Term& term, const Term& next, Rule rule, const VertexSet& x, Mask z, Mask w, int depth, Offer& offer) {
        RuleQuery q;
        q.graph = g_;
        q.rule = rule;
        q.y = set_of(term.t);
        q.x = x;
        q.z = set_of(z);
        q.w = set_of(w);
        if (!rule_applies(q)) return;
        auto child = solve(next, depth - 1);
        if (!child) return;
        auto s = std::make_shared<Solution>();
        s->expr = child->expr;
        s->cost = child->cost;
        TraceEntry e;
        e.rule = to_string(rule);
        const RuleCondition c = rule_condition(q);
        e.condition = statement(q, c);
        e.mutilated = c.mutilated;
        e.before = render(term);
        e.after = render(next);
        s->trace.push_back(std::move(e));
        append(*s, *child);
        offer(s);
    }

    std::string list(const VertexSet& s) const {
        std::string out;
        for (Vertex v : s) out += (out.empty() ? "" : ",") + g_.name(v);
        return out;
    }

    std::string statement(const RuleQuery& q, const RuleCondition& c) const {
        const std::string given = c.given.empty() ? "" : " | " + list(c.given);
        return "(" + list(q.y) + " _||_ " + list(q.x) + given + ") in G[in-cut {" + list(c.incoming) +
               "}, out-cut {" + list(c.outgoing) + "}]";
    }

    const MixedGraph& g_;
    Budget budget_;
    std::size_t expansions_ = 0;
    std::map<std::tuple<Mask, Mask, Mask, int>, SolutionPtr> memo_;
};

Mask mask_of(const VertexSet& s) {
    Mask m = 0;
    for (Vertex v : s) m |= Mask{1} << v;
    return m;
}

} // namespace

Verdict identify_macro(const MixedGraph& cdmg, const ClusterSpec& spec, const VertexSet& x, const VertexSet& y,
                       const VertexSet& w, const Budget& budget) {
    require_vertices(cdmg, x);
    require_vertices(cdmg, y);
    require_vertices(cdmg, w);
    require_disjoint({&x, &y, &w});
    if (y.empty()) throw Error(ErrorCode::EmptyTarget, "the effect needs a nonempty target");
    if (cdmg.size() > 64) throw Error(ErrorCode::GraphTooLarge, "identification supports at most 64 clusters");

    Verdict v;
    v.report.budget = budget;
    v.assumption1_warning = !spec.satisfies_assumption_1();

    if (!x.empty() && w.empty()) {
        if (auto cert = find_sc_hedge(cdmg, x, y)) {
            v.kind = VerdictKind::NonIdentifiable;
            v.certificate = std::move(cert);
            v.certificate_host = sc_projection(cdmg);
            return v;
        }
    }

    Search search(cdmg, budget);
    const Term start{mask_of(y), mask_of(x), mask_of(w)};
    try {
        for (int depth = 0; depth <= budget.max_depth; ++depth) {
            v.report.depth_reached = depth;
            if (auto s = search.solve(start, depth)) {
                std::vector<std::string> free;
                for (Vertex u : y | x | w) free.push_back(cdmg.name(u));
                v.kind = VerdictKind::Identified;
                v.estimand = assign_primes(s->expr, free);
                v.trace = s->trace;
                break;
            }
        }
    } catch (const BudgetExhausted&) {
        v.report.exhausted = true;
    }
    v.report.expansions = search.expansions();
    return v;
}

} // namespace cdmg
