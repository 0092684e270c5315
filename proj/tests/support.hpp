#ifndef CDMG_TESTS_SUPPORT_HPP
#define CDMG_TESTS_SUPPORT_HPP

#include "cdmg/dsl.hpp"
#include "cdmg/graph.hpp"
#include "cdmg/oracle.hpp"

#include <random>
#include <string>

namespace cdmg::testing {

inline std::string fixture_path(const std::string& name) { return std::string(CDMG_FIXTURE_DIR) + "/" + name + ".graph"; }

inline GraphDocument fixture(const std::string& name) { return load_document(fixture_path(name)); }

inline bool coin(std::mt19937_64& rng, double p) { return unit_uniform(rng) < p; }

inline int pick(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

/// Random directed mixed graph on C0..C{n-1}; cycles and self-loops allowed.
inline MixedGraph random_cdmg(std::mt19937_64& rng, int n, double p_dir, double p_bi, double p_self) {
    GraphBuilder b;
    auto name = [](int i) { return "C" + std::to_string(i); };
    for (int i = 0; i < n; ++i) b.add_vertex(name(i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (coin(rng, i == j ? p_self : p_dir)) b.add_directed(name(i), name(j));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (coin(rng, i == j ? p_self : p_bi)) b.add_bidirected(name(i), name(j));
    return b.build();
}

/// Random ADMG on V0..V{n-1}: directed edges follow a random permutation.
inline MixedGraph random_admg(std::mt19937_64& rng, int n, double p_dir, double p_bi) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    GraphBuilder b;
    auto name = [](int i) { return "V" + std::to_string(i); };
    for (int i = 0; i < n; ++i) b.add_vertex(name(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng, p_dir)) b.add_directed(name(order[i]), name(order[j]));
            if (coin(rng, p_bi)) b.add_bidirected(name(i), name(j));
        }
    return b.build();
}

/// Partition of an ADMG into consecutive groups of at most `max_size`.
inline ClusterSpec random_partition(std::mt19937_64& rng, const MixedGraph& admg, int max_size) {
    std::vector<std::string> names = admg.names();
    std::shuffle(names.begin(), names.end(), rng);
    ClusterSpec spec;
    std::size_t i = 0;
    int k = 0;
    while (i < names.size()) {
        const int size = std::min<int>(1 + pick(rng, max_size), static_cast<int>(names.size() - i));
        std::vector<std::string> members(names.begin() + i, names.begin() + i + size);
        std::sort(members.begin(), members.end());
        spec.set("K" + std::to_string(k++), ClusterInfo{members, size});
        i += size;
    }
    return spec;
}

struct Triple {
    VertexSet x, y, w;
};

/// Disjoint X, Y (both nonempty) and W over the vertices of g.
inline Triple random_triple(std::mt19937_64& rng, const MixedGraph& g) {
    Triple t;
    const Vertex n = static_cast<Vertex>(g.size());
    t.x.insert(static_cast<Vertex>(pick(rng, n)));
    Vertex yv;
    do yv = static_cast<Vertex>(pick(rng, n));
    while (t.x.contains(yv));
    t.y.insert(yv);
    for (Vertex v = 0; v < n; ++v) {
        if (t.x.contains(v) || t.y.contains(v)) continue;
        switch (pick(rng, 5)) {
        case 0: t.x.insert(v); break;
        case 1: t.y.insert(v); break;
        case 2: t.w.insert(v); break;
        default: break;
        }
    }
    return t;
}

} // namespace cdmg::testing

#endif
