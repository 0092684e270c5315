#ifndef CDMG_TESTS_PROPERTIES_HPP
#define CDMG_TESTS_PROPERTIES_HPP

#include "support.hpp"

#include "cdmg/dsl.hpp"
#include "cdmg/mutilation.hpp"
#include "cdmg/separation.hpp"

#include <sstream>

namespace cdmg::testing {

struct Tally {
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++checked;
        if (ok) return;
        if (violations++ == 0) first_failure = what;
    }
    bool ok() const { return violations == 0; }
};

inline Walk random_walk(std::mt19937_64& rng, const MixedGraph& g, int length) {
    Walk w;
    w.vertices.push_back(static_cast<Vertex>(pick(rng, static_cast<int>(g.size()))));
    for (int i = 0; i < length; ++i) {
        const Vertex v = w.vertices.back();
        std::vector<std::pair<Vertex, EdgeKind>> moves;
        for (Vertex c : g.children(v)) moves.emplace_back(c, EdgeKind::Forward);
        for (Vertex p : g.parents(v)) moves.emplace_back(p, EdgeKind::Backward);
        for (Vertex s : g.siblings(v)) moves.emplace_back(s, EdgeKind::Bidirected);
        if (moves.empty()) break;
        const auto& [next, kind] = moves[pick(rng, static_cast<int>(moves.size()))];
        w.vertices.push_back(next);
        w.edges.push_back(kind);
    }
    return w;
}

/// An active walk always has an active primary path.
inline Tally walk_primary_path_property(std::uint64_t seed, int graphs) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (int i = 0; i < graphs; ++i) {
        const int n = 3 + pick(rng, 8);
        const MixedGraph g = coin(rng, 0.5) ? random_admg(rng, n, 0.35, 0.2) : random_cdmg(rng, n, 0.25, 0.15, 0.3);
        for (int k = 0; k < 200; ++k) {
            const Walk w = random_walk(rng, g, 1 + pick(rng, 8));
            if (w.edges.empty() || w.vertices.front() == w.vertices.back()) continue;
            VertexSet z;
            for (Vertex v = 0; v < g.size(); ++v)
                if (v != w.vertices.front() && v != w.vertices.back() && coin(rng, 0.2)) z.insert(v);
            if (is_blocked(g, w, z)) continue;
            const Walk p = primary_path(w);
            t.record(p.is_path() && !is_blocked(g, p, z), "walk " + format_walk(g, w));
        }
    }
    return t;
}

/// Reachability-based d-separation agrees with path enumeration.
inline Tally dsep_agreement_property(std::uint64_t seed, int graphs) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (int i = 0; i < graphs; ++i) {
        const int n = 2 + pick(rng, 7);
        const MixedGraph g = coin(rng, 0.5) ? random_admg(rng, n, 0.35, 0.25) : random_cdmg(rng, n, 0.3, 0.2, 0.3);
        for (int k = 0; k < 5; ++k) {
            const Triple q = random_triple(rng, g);
            t.record(d_separated(g, q.x, q.y, q.w) == d_separated_exhaustive(g, q.x, q.y, q.w, 8),
                     "graph of " + std::to_string(n) + " vertices");
        }
    }
    return t;
}

/// Mutilating then clustering equals clustering then mutilating.
inline Tally mutilation_commutation_property(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (int i = 0; i < trials; ++i) {
        const MixedGraph admg = random_admg(rng, 2 + pick(rng, 7), 0.35, 0.25);
        const ClusterSpec spec = random_partition(rng, admg, 3);
        const MixedGraph c = cluster_graph_of(admg, spec);
        VertexSet a, b;
        for (Vertex v = 0; v < c.size(); ++v) {
            if (coin(rng, 0.3)) a.insert(v);
            if (coin(rng, 0.3)) b.insert(v);
        }
        t.record(check_mutilation_compatibility(admg, spec, c, a, b), "trial " + std::to_string(i));
    }
    return t;
}

/// Random document text with shuffled lines, comments and odd spacing.
inline std::string random_document_text(std::mt19937_64& rng) {
    std::vector<std::string> lines;
    const bool cdmg = coin(rng, 0.5);
    const int n = 1 + pick(rng, 5);
    MixedGraph g = cdmg ? random_cdmg(rng, n, 0.3, 0.2, 0.3) : random_admg(rng, n, 0.4, 0.2);
    auto sp = [&] { return std::string(1 + pick(rng, 3), ' '); };
    if (cdmg) {
        for (const auto& name : g.names()) {
            std::string line = "cluster" + sp() + name;
            const int size = 1 + pick(rng, 3);
            if (coin(rng, 0.5)) line += sp() + "size=" + std::to_string(size);
            if (coin(rng, 0.3)) {
                line += sp() + "members=";
                for (int k = 1; k <= size; ++k) line += sp() + name + "_m" + std::to_string(k);
            }
            lines.push_back(line);
        }
    } else {
        for (const auto& name : g.names()) lines.push_back("node" + sp() + name);
        if (coin(rng, 0.5)) {
            const ClusterSpec spec = random_partition(rng, g, 3);
            for (const auto& [name, info] : spec.clusters()) {
                std::string line = "cluster " + name;
                if (coin(rng, 0.5)) line += " size=" + std::to_string(*info.size);
                line += " members=";
                for (const auto& m : *info.members) line += " " + m;
                lines.push_back(line);
            }
        }
    }
    for (const auto& e : g.directed_edges()) lines.push_back(g.name(e.tail) + sp() + "->" + sp() + g.name(e.head));
    for (const auto& e : g.bidirected_edges()) lines.push_back(g.name(e.a) + sp() + "<->" + sp() + g.name(e.b));
    if (coin(rng, 0.3)) lines.push_back("# note");
    std::shuffle(lines.begin(), lines.end(), rng);
    if (n >= 2 && coin(rng, 0.7)) {
        const Triple q = random_triple(rng, g);
        auto list = [&](const VertexSet& s) {
            std::string out;
            for (Vertex v : s) out += (out.empty() ? "" : ",") + g.name(v);
            return out;
        };
        std::string line = "query effect do=(" + list(q.x) + ") on=(" + list(q.y) + ")";
        if (!q.w.empty()) line += " given=(" + list(q.w) + ")";
        lines.push_back(line);
    }
    std::string text = std::string("graph ") + (cdmg ? "cdmg" : "admg") + "\n";
    for (const auto& l : lines) text += l + (coin(rng, 0.2) ? "   # trailing\n" : "\n");
    return text;
}

/// parse(serialize(d)) == d and serialization is idempotent.
inline Tally dsl_round_trip_property(std::uint64_t seed, int docs) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (int i = 0; i < docs; ++i) {
        const std::string text = random_document_text(rng);
        try {
            const GraphDocument d = parse_document(text);
            const std::string s = serialize_document(d);
            const GraphDocument back = parse_document(s);
            t.record(back == d && serialize_document(back) == s, text);
        } catch (const Error& e) {
            t.record(false, std::string(e.what()) + "\n" + text);
        }
    }
    return t;
}

} // namespace cdmg::testing

#endif
