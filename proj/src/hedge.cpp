#include "cdmg/hedge.hpp"

#include "cdmg/mutilation.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace cdmg {

std::vector<VertexSet> c_components(const MixedGraph& g) {
    const std::size_t n = g.size();
    std::vector<char> seen(n, 0);
    std::vector<VertexSet> out;
    for (Vertex s = 0; s < n; ++s) {
        if (seen[s]) continue;
        VertexSet comp;
        std::vector<Vertex> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            comp.insert(v);
            for (Vertex u : g.siblings(v)) {
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

VertexSet CForest::roots() const {
    VertexSet r = vertices;
    for (const auto& e : directed) r.erase(e.tail);
    return r;
}

MixedGraph CForest::as_graph(const MixedGraph& host) const {
    std::vector<Vertex> remap(host.size(), 0);
    std::vector<std::string> names;
    for (Vertex v : vertices) {
        remap[v] = static_cast<Vertex>(names.size());
        names.push_back(host.name(v));
    }
    std::vector<DirectedEdge> d;
    for (const auto& e : directed) {
        if (!vertices.contains(e.tail) || !vertices.contains(e.head))
            throw Error(ErrorCode::InvalidArgument, "forest edge leaves the forest's vertex set");
        d.push_back({remap[e.tail], remap[e.head]});
    }
    std::vector<BidirectedEdge> b;
    for (const auto& e : bidirected) {
        if (!vertices.contains(e.a) || !vertices.contains(e.b))
            throw Error(ErrorCode::InvalidArgument, "forest edge leaves the forest's vertex set");
        b.emplace_back(remap[e.a], remap[e.b]);
    }
    return MixedGraph(std::move(names), std::move(d), std::move(b));
}

bool is_c_forest(const MixedGraph& g) {
    if (g.size() == 0) return false;
    if (g.has_self_loops() || !is_acyclic(g)) return false;
    for (Vertex v = 0; v < g.size(); ++v)
        if (g.children(v).size() > 1) return false;
    return c_components(g).size() == 1;
}

std::vector<BidirectedEdge> sc_projection_added(const MixedGraph& cdmg) {
    std::vector<BidirectedEdge> added;
    for (const auto& comp : strongly_connected_components(cdmg)) {
        for (auto a = comp.begin(); a != comp.end(); ++a)
            for (auto b = std::next(a); b != comp.end(); ++b)
                if (!cdmg.has_bidirected(*a, *b)) added.emplace_back(*a, *b);
    }
    std::sort(added.begin(), added.end());
    return added;
}

MixedGraph sc_projection(const MixedGraph& cdmg) {
    auto bidirected = cdmg.bidirected_edges();
    for (const auto& e : sc_projection_added(cdmg)) bidirected.push_back(e);
    return cdmg.with_edges(cdmg.directed_edges(), std::move(bidirected));
}

namespace {

/// Largest vertex set inside `region` that can carry an R-rooted C-forest,
/// or nothing. Every admissible set is contained in the result.
std::optional<VertexSet> max_admissible(const MixedGraph& g, VertexSet region, const VertexSet& r) {
    if (!r.subset_of(region)) return std::nullopt;
    while (true) {
        // Keep vertices with a directed path into r inside the region.
        std::vector<char> in(g.size(), 0);
        for (Vertex v : region) in[v] = 1;
        std::vector<char> reach(g.size(), 0);
        std::vector<Vertex> stack(r.begin(), r.end());
        for (Vertex v : r) reach[v] = 1;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex p : g.parents(v)) {
                if (in[p] && !reach[p]) {
                    reach[p] = 1;
                    stack.push_back(p);
                }
            }
        }
        VertexSet next;
        for (Vertex v : region)
            if (reach[v]) next.insert(v);
        // Keep the bidirected component holding r.
        std::vector<char> in_next(g.size(), 0);
        for (Vertex v : next) in_next[v] = 1;
        std::vector<char> comp(g.size(), 0);
        stack.assign(1, r.front());
        comp[r.front()] = 1;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex u : g.siblings(v)) {
                if (in_next[u] && !comp[u]) {
                    comp[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        for (Vertex v : r)
            if (!comp[v]) return std::nullopt;
        VertexSet connected;
        for (Vertex v : next)
            if (comp[v]) connected.insert(v);
        if (connected == region) return region;
        region = std::move(connected);
    }
}

/// Forest on `vertices` rooted at r, reusing `base` (a forest on a subset
/// that already contains r).
CForest build_forest(const MixedGraph& g, const VertexSet& vertices, const CForest& base) {
    CForest f;
    f.vertices = vertices;
    f.directed = base.directed;
    std::vector<char> in(g.size(), 0);
    for (Vertex v : vertices) in[v] = 1;
    std::vector<char> done(g.size(), 0);
    std::deque<Vertex> queue;
    for (Vertex v : base.vertices) {
        done[v] = 1;
        queue.push_back(v);
    }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex p : g.parents(v)) {
            if (in[p] && !done[p]) {
                done[p] = 1;
                f.directed.push_back({p, v});
                queue.push_back(p);
            }
        }
    }
    for (const auto& e : g.bidirected_edges())
        if (e.a != e.b && in[e.a] && in[e.b]) f.bidirected.push_back(e);
    std::sort(f.directed.begin(), f.directed.end());
    return f;
}

CForest forest_from_roots(const MixedGraph& g, const VertexSet& vertices, const VertexSet& r) {
    CForest seed;
    seed.vertices = r;
    return build_forest(g, vertices, seed);
}

/// Nonempty subsets of `pool`, smallest first, then lexicographic.
template <class Visit>
bool for_each_subset(const VertexSet& pool, Visit visit) {
    const std::vector<Vertex>& items = pool.items();
    const std::size_t n = items.size();
    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k <= n; ++k) {
        idx.resize(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            VertexSet s;
            for (std::size_t i : idx) s.insert(items[i]);
            if (visit(s)) return true;
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return false;
}

} // namespace

std::optional<HedgeCertificate> find_hedge(const MixedGraph& g, const VertexSet& x, const VertexSet& y) {
    require_vertices(g, x);
    require_vertices(g, y);
    require_disjoint({&x, &y});
    if (x.empty() || y.empty()) throw Error(ErrorCode::EmptyTarget, "hedge search needs nonempty x and y");
    const VertexSet pool = ancestors(mutilate(g, {}, x), y) - x;
    const VertexSet outside_x = g.all() - x;
    std::optional<HedgeCertificate> found;
    for_each_subset(pool, [&](const VertexSet& r) {
        auto small = max_admissible(g, outside_x, r);
        if (!small) return false;
        auto large = max_admissible(g, g.all(), r);
        if (!large || !large->intersects(x)) return false;
        HedgeCertificate cert;
        cert.roots = r;
        cert.x = x;
        cert.y = y;
        cert.f_prime = forest_from_roots(g, *small, r);
        cert.f = build_forest(g, *large, cert.f_prime);
        found = std::move(cert);
        return true;
    });
    return found;
}

std::optional<HedgeCertificate> find_sc_hedge(const MixedGraph& cdmg, const VertexSet& x, const VertexSet& y) {
    const MixedGraph host = sc_projection(cdmg);
    auto cert = find_hedge(host, x, y);
    if (!cert) return cert;
    const auto added = sc_projection_added(cdmg);
    for (const auto& e : cert->f.bidirected)
        if (std::binary_search(added.begin(), added.end(), e)) cert->projection_edges_used.push_back(e);
    return cert;
}

bool verify_hedge(const MixedGraph& host, const HedgeCertificate& cert, std::string* why) {
    auto fail = [&](const char* reason) {
        if (why) *why = reason;
        return false;
    };
    for (const CForest* f : {&cert.f, &cert.f_prime}) {
        for (Vertex v : f->vertices)
            if (v >= host.size()) return fail("forest vertex outside the host graph");
        for (const auto& e : f->directed) {
            if (!f->vertices.contains(e.tail) || !f->vertices.contains(e.head)) return fail("forest edge leaves its vertices");
            if (!host.has_directed(e.tail, e.head)) return fail("forest edge missing from the host graph");
        }
        for (const auto& e : f->bidirected) {
            if (!f->vertices.contains(e.a) || !f->vertices.contains(e.b)) return fail("forest edge leaves its vertices");
            if (!host.has_bidirected(e.a, e.b)) return fail("forest edge missing from the host graph");
        }
        if (!is_c_forest(f->as_graph(host))) return fail("subgraph is not a C-forest");
        if (f->roots() != cert.roots) return fail("forest roots differ from the certificate roots");
    }
    if (!cert.f_prime.vertices.subset_of(cert.f.vertices)) return fail("F' vertices not contained in F");
    for (const auto& e : cert.f_prime.directed)
        if (std::find(cert.f.directed.begin(), cert.f.directed.end(), e) == cert.f.directed.end())
            return fail("F' directed edge not in F");
    for (const auto& e : cert.f_prime.bidirected)
        if (std::find(cert.f.bidirected.begin(), cert.f.bidirected.end(), e) == cert.f.bidirected.end())
            return fail("F' bidirected edge not in F");
    if (!cert.f.vertices.intersects(cert.x)) return fail("F does not meet x");
    if (cert.f_prime.vertices.intersects(cert.x)) return fail("F' meets x");
    if (cert.roots.empty()) return fail("empty root set");
    if (!cert.roots.subset_of(ancestors(mutilate(host, {}, cert.x), cert.y)))
        return fail("roots are not ancestors of y once edges out of x are cut");
    return true;
}

} // namespace cdmg
