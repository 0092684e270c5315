#include "cdmg/probe.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace cdmg {

namespace {

using RowRule = std::function<std::vector<double>(const std::vector<int>& parent_values, const std::vector<int>& latent_values)>;

/// SCM whose tables are produced by `rules`; binary everywhere.
DiscreteScm structured_scm(const MixedGraph& admg, const std::vector<RowRule>& rules, const std::vector<double>& priors) {
    DiscreteScm scm;
    scm.admg = admg;
    const std::size_t n = admg.size();
    scm.cards.assign(n, 2);
    scm.latents = admg.bidirected_edges();
    scm.parents.resize(n);
    scm.latent_parents.resize(n);
    for (std::size_t l = 0; l < scm.latents.size(); ++l) {
        scm.latent_cards.push_back(2);
        scm.latent_priors.push_back({priors[l], 1 - priors[l]});
        scm.latent_parents[scm.latents[l].a].push_back(l);
        scm.latent_parents[scm.latents[l].b].push_back(l);
    }
    for (Vertex v = 0; v < n; ++v) scm.parents[v] = admg.parents(v);
    for (Vertex v = 0; v < n; ++v) {
        const auto& ps = scm.parents[v];
        const auto& ls = scm.latent_parents[v];
        std::vector<double> table;
        const std::size_t rows = scm.row_count(v);
        for (std::size_t r = 0; r < rows; ++r) {
            // Decode the row back into parent and latent values.
            std::vector<int> pv(ps.size()), lv(ls.size());
            std::size_t rest = r;
            for (std::size_t i = ls.size(); i-- > 0;) {
                lv[i] = static_cast<int>(rest % 2);
                rest /= 2;
            }
            for (std::size_t i = ps.size(); i-- > 0;) {
                pv[i] = static_cast<int>(rest % 2);
                rest /= 2;
            }
            auto row = rules[v](pv, lv);
            table.insert(table.end(), row.begin(), row.end());
        }
        scm.cpts.push_back(std::move(table));
    }
    validate_scm(scm);
    return scm;
}

std::vector<double> coin(double p) { return {p, 1 - p}; }

double draw(std::mt19937_64& rng) { return 0.1 + 0.8 * unit_uniform(rng); }

template <class T>
std::size_t index_in(const std::vector<T>& list, T v) {
    return static_cast<std::size_t>(std::find(list.begin(), list.end(), v) - list.begin());
}

double observational_gap(const DiscreteScm& a, const DiscreteScm& b) {
    const auto ja = exact_joint(a);
    const auto jb = exact_joint(b);
    double gap = 0;
    for (std::size_t i = 0; i < ja.p.size(); ++i) gap = std::max(gap, std::abs(ja.p[i] - jb.p[i]));
    return gap;
}

} // namespace

double interventional_gap(const MixedGraph& cdmg, const ClusterSpec& concrete, const VertexSet& x, const VertexSet& y,
                          const DiscreteScm& first, const DiscreteScm& second) {
    const MixedGraph& admg = first.admg;
    const VertexSet mx = lift(cdmg, x, admg, concrete);
    const VertexSet my = lift(cdmg, y, admg, concrete);
    const std::vector<Vertex> xs(mx.begin(), mx.end());
    double gap = 0;
    const std::size_t configs = std::size_t{1} << xs.size();
    for (std::size_t c = 0; c < configs; ++c) {
        std::map<Vertex, int> assign;
        for (std::size_t i = 0; i < xs.size(); ++i) assign[xs[i]] = static_cast<int>(c >> i & 1);
        const auto p1 = interventional_truth(first, assign, my);
        const auto p2 = interventional_truth(second, assign, my);
        for (std::size_t i = 0; i < p1.p.size(); ++i) gap = std::max(gap, std::abs(p1.p[i] - p2.p[i]));
    }
    return gap;
}

ProbeResult nonidentifiability_probe(const MixedGraph& cdmg, const ClusterSpec& spec, const VertexSet& x,
                                     const VertexSet& y, int trials, std::uint64_t seed, std::size_t limit,
                                     double min_gap) {
    require_vertices(cdmg, x);
    require_vertices(cdmg, y);
    require_disjoint({&x, &y});
    if (x.empty() || y.empty()) throw Error(ErrorCode::EmptyTarget, "probe needs nonempty x and y");
    ProbeResult result;
    const auto admgs = enumerate_compatible_admgs(cdmg, spec, limit);
    result.admgs_examined = admgs.size();
    if (admgs.empty()) return result;
    const ClusterSpec concrete = admgs.front().spec;
    const MixedGraph& any = admgs.front().admg;
    const VertexSet mx = lift(cdmg, x, any, concrete);
    const VertexSet my = lift(cdmg, y, any, concrete);

    auto attempt = [&](const CompatibleAdmgWitness& g1, const CompatibleAdmgWitness& g2, Vertex a, Vertex b,
                       bool bow) -> bool {
        for (int t = 0; t < trials; ++t) {
            ++result.candidates_tried;
            const std::uint64_t trial_seed = seed * 1000003ULL + static_cast<std::uint64_t>(t);
            std::mt19937_64 rng(trial_seed);
            const std::size_t n = g1.admg.size();
            std::vector<double> marginal(n);
            for (auto& m : marginal) m = draw(rng);
            std::vector<RowRule> r1(n), r2(n);
            for (Vertex v = 0; v < n; ++v) {
                const double m = marginal[v];
                r1[v] = r2[v] = [m](const std::vector<int>&, const std::vector<int>&) { return coin(m); };
            }
            const double pa0 = draw(rng), pa1 = draw(rng);     // P(a=0 | u) or P(a=0)
            double pb[2][2];                                    // P(b=0 | a, u)
            for (auto& row : pb)
                for (double& v : row) v = draw(rng);
            std::vector<double> priors(g1.admg.bidirected_edges().size());
            for (auto& u : priors) u = draw(rng);
            if (bow) {
                const std::size_t lat = static_cast<std::size_t>(
                    std::find(g1.admg.bidirected_edges().begin(), g1.admg.bidirected_edges().end(), BidirectedEdge(a, b)) -
                    g1.admg.bidirected_edges().begin());
                // Model 1: a and b share the latent of a <-> b.
                const double u0 = priors[lat];
                std::vector<std::size_t> la, lb;
                for (std::size_t l = 0; l < g1.admg.bidirected_edges().size(); ++l) {
                    const auto& e = g1.admg.bidirected_edges()[l];
                    if (e.a == a || e.b == a) la.push_back(l);
                    if (e.a == b || e.b == b) lb.push_back(l);
                }
                const std::size_t ia = index_in(la, lat), ib = index_in(lb, lat);
                const std::size_t pa_of_b = index_in(g1.admg.parents(b), a);
                const double pbb[2][2] = {{pb[0][0], pb[0][1]}, {pb[1][0], pb[1][1]}};
                r1[a] = [=](const std::vector<int>&, const std::vector<int>& lv) { return coin(lv[ia] == 0 ? pa0 : pa1); };
                r1[b] = [=](const std::vector<int>& pv, const std::vector<int>& lv) { return coin(pbb[pv[pa_of_b]][lv[ib]]); };
                // Model 2: the latent is ignored and the joint of (a, b) is kept.
                const double qa0 = u0 * pa0 + (1 - u0) * pa1;
                double qb[2];
                for (int av = 0; av < 2; ++av) {
                    const double w0 = u0 * (av == 0 ? pa0 : 1 - pa0);
                    const double w1 = (1 - u0) * (av == 0 ? pa1 : 1 - pa1);
                    qb[av] = (w0 * pb[av][0] + w1 * pb[av][1]) / (w0 + w1);
                }
                r2[a] = [=](const std::vector<int>&, const std::vector<int>&) { return coin(qa0); };
                r2[b] = [=](const std::vector<int>& pv, const std::vector<int>&) { return coin(qb[pv[pa_of_b]]); };
            } else {
                // Model 1 on g1: a -> b carries the only dependence.
                const std::size_t pa_of_b = index_in(g1.admg.parents(b), a);
                const std::size_t pb_of_a = index_in(g2.admg.parents(a), b);
                const double pa = pa0;
                const double pb0 = pb[0][0], pb1 = pb[1][0];
                r1[a] = [=](const std::vector<int>&, const std::vector<int>&) { return coin(pa); };
                r1[b] = [=](const std::vector<int>& pv, const std::vector<int>&) { return coin(pv[pa_of_b] == 0 ? pb0 : pb1); };
                // Model 2 on g2: the same joint of (a, b) written as b -> a.
                const double qb0 = pa * pb0 + (1 - pa) * pb1;
                const double qa_given_b0 = pa * pb0 / qb0;
                const double qa_given_b1 = pa * (1 - pb0) / (1 - qb0);
                r2[b] = [=](const std::vector<int>&, const std::vector<int>&) { return coin(qb0); };
                r2[a] = [=](const std::vector<int>& pv, const std::vector<int>&) {
                    return coin(pv[pb_of_a] == 0 ? qa_given_b0 : qa_given_b1);
                };
            }
            std::vector<double> priors2(g2.admg.bidirected_edges().size(), 0.5);
            if (bow) priors2 = priors;
            DiscreteScm s1 = structured_scm(g1.admg, r1, priors);
            DiscreteScm s2 = structured_scm(g2.admg, r2, priors2);
            const double obs = observational_gap(s1, s2);
            if (obs > 1e-12) continue;
            const double gap = interventional_gap(cdmg, concrete, x, y, s1, s2);
            if (gap > min_gap) {
                FoundPair pair;
                pair.first = {g1, std::move(s1)};
                pair.second = {g2, std::move(s2)};
                pair.strategy = bow ? "bow" : "reversal";
                pair.micro_x = g1.admg.name(a);
                pair.micro_y = g1.admg.name(b);
                pair.observational_gap = obs;
                pair.interventional_gap = gap;
                pair.seed = trial_seed;
                result.pair = std::move(pair);
                return true;
            }
        }
        return false;
    };

    for (const auto& g : admgs)
        for (Vertex a : mx)
            for (Vertex b : my)
                if (g.admg.has_directed(a, b) && g.admg.has_bidirected(a, b) && attempt(g, g, a, b, true)) return result;

    for (Vertex a : mx) {
        for (Vertex b : my) {
            const CompatibleAdmgWitness* forward = nullptr;
            const CompatibleAdmgWitness* backward = nullptr;
            for (const auto& g : admgs) {
                if (!forward && g.admg.has_directed(a, b)) forward = &g;
                if (!backward && g.admg.has_directed(b, a)) backward = &g;
            }
            if (forward && backward && attempt(*forward, *backward, a, b, false)) return result;
        }
    }
    return result;
}

} // namespace cdmg
