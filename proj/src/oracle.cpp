#include "cdmg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

namespace cdmg {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ClusterSpec concrete_spec(const MixedGraph& cdmg, const ClusterSpec& spec) {
    ClusterSpec filled;
    for (const auto& name : cdmg.names()) {
        const auto* info = spec.find(name);
        if (info && (info->members || info->size)) {
            filled.set(name, *info);
        } else {
            filled.set(name, ClusterInfo{std::nullopt, 2});
        }
    }
    return filled.with_generated_members(cdmg);
}

namespace {

struct MicroLayout {
    std::vector<std::string> names;                // sorted micro names
    std::vector<std::vector<Vertex>> members;      // per cluster, in member order
};

MicroLayout layout_of(const MixedGraph& cdmg, const ClusterSpec& concrete) {
    MicroLayout out;
    for (const auto& c : cdmg.names())
        for (const auto& m : *concrete.find(c)->members) out.names.push_back(m);
    std::sort(out.names.begin(), out.names.end());
    if (std::adjacent_find(out.names.begin(), out.names.end()) != out.names.end())
        throw Error(ErrorCode::NotAPartition, "cluster members overlap");
    for (const auto& c : cdmg.names()) {
        std::vector<Vertex> ids;
        for (const auto& m : *concrete.find(c)->members)
            ids.push_back(static_cast<Vertex>(std::lower_bound(out.names.begin(), out.names.end(), m) - out.names.begin()));
        out.members.push_back(std::move(ids));
    }
    return out;
}

bool collider_at(const Walk& p, std::size_t i) {
    return p.edges[i - 1] != EdgeKind::Backward && p.edges[i] != EdgeKind::Forward;
}

} // namespace

std::vector<Vertex> descent_order(const MixedGraph& g, const VertexSet& w) {
    const std::size_t n = g.size();
    constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(n, unreachable);
    std::deque<Vertex> queue;
    for (Vertex v : w) {
        dist[v] = 0;
        queue.push_back(v);
    }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex p : g.parents(v)) {
            if (dist[p] == unreachable) {
                dist[p] = dist[v] + 1;
                queue.push_back(p);
            }
        }
    }
    std::vector<Vertex> order(n);
    for (Vertex v = 0; v < n; ++v) order[v] = v;
    // Farther from w comes first, so shortest descents increase in the order.
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
        const std::size_t da = dist[a] == unreachable ? n + 1 : dist[a];
        const std::size_t db = dist[b] == unreachable ? n + 1 : dist[b];
        return da > db;
    });
    return order;
}

CompatibleAdmgWitness theorem2_witness(const MixedGraph& cdmg, const ClusterSpec& spec, const MixedGraph& path_graph,
                                       const Walk& path, const VertexSet& w, const std::vector<Vertex>& order) {
    if (path.empty()) throw Error(ErrorCode::EmptyWalk, "witness needs a nonempty path");
    if (path_graph.names() != cdmg.names())
        throw Error(ErrorCode::InvalidArgument, "path graph must share the vertices of the C-DMG");
    require_walk(path_graph, path);
    require_walk(cdmg, path);
    if (!path.is_path()) throw Error(ErrorCode::PathNotActive, "the walk repeats a vertex");
    if (is_blocked(path_graph, path, w)) throw Error(ErrorCode::PathNotActive, format_walk(cdmg, path) + " is blocked");

    const std::size_t n = cdmg.size();
    std::vector<std::size_t> rank(n, n);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] >= n || rank[order[i]] != n) throw Error(ErrorCode::OrderIncompatible, "order is not a permutation");
        rank[order[i]] = i;
    }
    if (order.size() != n) throw Error(ErrorCode::OrderIncompatible, "order is not a permutation");

    // Every collider must descend into w along order-increasing edges.
    for (std::size_t i = 1; i + 1 < path.vertices.size(); ++i) {
        if (!collider_at(path, i)) continue;
        std::vector<char> seen(n, 0);
        std::vector<Vertex> stack{path.vertices[i]};
        seen[path.vertices[i]] = 1;
        bool reached = false;
        while (!stack.empty() && !reached) {
            Vertex v = stack.back();
            stack.pop_back();
            if (w.contains(v)) reached = true;
            for (Vertex c : path_graph.children(v)) {
                if (!seen[c] && rank[v] < rank[c]) {
                    seen[c] = 1;
                    stack.push_back(c);
                }
            }
        }
        if (!reached)
            throw Error(ErrorCode::OrderIncompatible, "collider " + cdmg.name(path.vertices[i]) + " cannot descend to w");
    }

    const ClusterSpec concrete = concrete_spec(cdmg, spec);
    for (const auto& [name, info] : concrete.clusters())
        if (info.members->size() < 2)
            throw Error(ErrorCode::AssumptionOneViolated, "cluster '" + name + "' has fewer than two members");
    const MicroLayout layout = layout_of(cdmg, concrete);
    auto v0 = [&](Vertex c) { return layout.members[c][0]; };
    auto v1 = [&](Vertex c) { return layout.members[c][1]; };

    std::set<DirectedEdge> directed;
    std::set<BidirectedEdge> bidirected;
    for (const auto& e : cdmg.directed_edges()) {
        directed.insert({v0(e.tail), v1(e.head)});
        if (e.tail != e.head && rank[e.tail] < rank[e.head]) directed.insert({v1(e.tail), v1(e.head)});
    }
    for (std::size_t i = 0; i < path.edges.size(); ++i) {
        const Vertex a = path.vertices[i];
        const Vertex b = path.vertices[i + 1];
        if (path.edges[i] == EdgeKind::Forward) directed.insert({v0(a), v0(b)});
        if (path.edges[i] == EdgeKind::Backward) directed.insert({v0(b), v0(a)});
    }
    for (const auto& e : cdmg.bidirected_edges()) {
        if (e.a == e.b) {
            bidirected.insert(BidirectedEdge(v0(e.a), v1(e.a)));
        } else {
            bidirected.insert(BidirectedEdge(v0(e.a), v0(e.b)));
        }
    }

    CompatibleAdmgWitness out;
    out.admg = MixedGraph(layout.names, {directed.begin(), directed.end()}, {bidirected.begin(), bidirected.end()});
    out.spec = concrete;
    out.construction = Construction::Theorem2Construction;
    out.order_used = order;
    Walk micro;
    for (Vertex c : path.vertices) micro.vertices.push_back(v0(c));
    micro.edges = path.edges;
    out.active_path = micro;
    return out;
}

CompatibleAdmgWitness theorem2_witness(const MixedGraph& cdmg, const Walk& path, const VertexSet& w,
                                       const std::vector<Vertex>& order) {
    return theorem2_witness(cdmg, ClusterSpec{}, cdmg, path, w, order);
}

namespace {

struct EdgeChoice {
    bool directed = true;
    std::vector<std::pair<Vertex, Vertex>> candidates;
};

std::vector<EdgeChoice> edge_choices(const MixedGraph& cdmg, const MicroLayout& layout) {
    std::vector<EdgeChoice> out;
    for (const auto& e : cdmg.directed_edges()) {
        EdgeChoice c;
        for (Vertex a : layout.members[e.tail])
            for (Vertex b : layout.members[e.head])
                if (a != b) c.candidates.emplace_back(a, b);
        out.push_back(std::move(c));
    }
    for (const auto& e : cdmg.bidirected_edges()) {
        EdgeChoice c;
        c.directed = false;
        for (Vertex a : layout.members[e.a])
            for (Vertex b : layout.members[e.b])
                if (a < b || (e.a != e.b && a != b)) c.candidates.emplace_back(std::min(a, b), std::max(a, b));
        std::sort(c.candidates.begin(), c.candidates.end());
        c.candidates.erase(std::unique(c.candidates.begin(), c.candidates.end()), c.candidates.end());
        out.push_back(std::move(c));
    }
    return out;
}

ClusterSpec known_spec(const MixedGraph& cdmg, const ClusterSpec& spec) {
    for (const auto& name : cdmg.names())
        if (!spec.known_size(name)) throw Error(ErrorCode::UnknownSizes, "size of cluster '" + name + "' is unknown");
    return spec.with_generated_members(cdmg);
}

} // namespace

double enumeration_space(const MixedGraph& cdmg, const ClusterSpec& spec) {
    const ClusterSpec concrete = known_spec(cdmg, spec);
    const MicroLayout layout = layout_of(cdmg, concrete);
    double total = 1;
    for (const auto& c : edge_choices(cdmg, layout)) total *= std::ldexp(1.0, static_cast<int>(c.candidates.size())) - 1;
    return total;
}

void enumerate_compatible_admgs(const MixedGraph& cdmg, const ClusterSpec& spec, std::size_t limit,
                                const std::function<bool(const CompatibleAdmgWitness&)>& visit) {
    if (cdmg.size() > 4) throw Error(ErrorCode::SearchSpaceTooLarge, "enumeration is limited to 4 clusters");
    const ClusterSpec concrete = known_spec(cdmg, spec);
    for (const auto& name : cdmg.names())
        if (*concrete.known_size(name) > 3)
            throw Error(ErrorCode::SearchSpaceTooLarge, "enumeration is limited to clusters of size 3");
    const double space = enumeration_space(cdmg, concrete);
    if (space > static_cast<double>(limit))
        throw Error(ErrorCode::SearchSpaceTooLarge,
                    "enumeration would visit " + std::to_string(static_cast<long double>(space)) + " assignments (limit " +
                        std::to_string(limit) + ")");
    const MicroLayout layout = layout_of(cdmg, concrete);
    const auto choices = edge_choices(cdmg, layout);
    for (const auto& c : choices)
        if (c.candidates.empty()) return; // an edge with no possible witness: nothing is compatible

    const std::size_t n = layout.names.size();
    // reach[a] = bitmask of vertices reachable from a (n <= 12).
    std::vector<std::uint32_t> reach(n);
    for (std::size_t v = 0; v < n; ++v) reach[v] = 1u << v;
    std::vector<DirectedEdge> directed;
    std::vector<BidirectedEdge> bidirected;
    bool keep_going = true;

    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (!keep_going) return;
        if (k == choices.size()) {
            CompatibleAdmgWitness wit;
            wit.admg = MixedGraph(layout.names, directed, bidirected);
            wit.spec = concrete;
            wit.construction = Construction::Enumerated;
            keep_going = visit(wit);
            return;
        }
        const auto& c = choices[k];
        const std::size_t m = c.candidates.size();
        for (std::uint32_t mask = 1; mask < (1u << m) && keep_going; ++mask) {
            if (!c.directed) {
                const std::size_t before = bidirected.size();
                for (std::size_t i = 0; i < m; ++i)
                    if (mask >> i & 1) bidirected.emplace_back(c.candidates[i].first, c.candidates[i].second);
                rec(k + 1);
                bidirected.resize(before);
                continue;
            }
            const auto saved = reach;
            const std::size_t before = directed.size();
            bool acyclic = true;
            for (std::size_t i = 0; i < m && acyclic; ++i) {
                if (!(mask >> i & 1)) continue;
                const auto [a, b] = c.candidates[i];
                if (reach[b] >> a & 1) {
                    acyclic = false;
                    break;
                }
                directed.push_back({a, b});
                for (std::size_t u = 0; u < n; ++u)
                    if (reach[u] >> a & 1) reach[u] |= reach[b];
            }
            if (acyclic) rec(k + 1);
            reach = saved;
            directed.resize(before);
        }
    };
    rec(0);
}

std::vector<CompatibleAdmgWitness> enumerate_compatible_admgs(const MixedGraph& cdmg, const ClusterSpec& spec,
                                                              std::size_t limit) {
    std::vector<CompatibleAdmgWitness> out;
    enumerate_compatible_admgs(cdmg, spec, limit, [&](const CompatibleAdmgWitness& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

std::optional<CompatibleAdmgWitness> sample_compatible_admg(const MixedGraph& cdmg, const ClusterSpec& spec,
                                                            std::mt19937_64& rng, int attempts) {
    const ClusterSpec concrete = known_spec(cdmg, spec);
    const MicroLayout layout = layout_of(cdmg, concrete);
    const auto choices = edge_choices(cdmg, layout);
    const std::size_t n = layout.names.size();
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<Vertex> perm(n);
        for (Vertex v = 0; v < n; ++v) perm[v] = v;
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
        std::vector<std::size_t> pos(n);
        for (std::size_t i = 0; i < n; ++i) pos[perm[i]] = i;
        std::vector<DirectedEdge> directed;
        std::vector<BidirectedEdge> bidirected;
        bool ok = true;
        for (const auto& c : choices) {
            std::vector<std::pair<Vertex, Vertex>> allowed;
            for (const auto& [a, b] : c.candidates)
                if (!c.directed || pos[a] < pos[b]) allowed.emplace_back(a, b);
            if (allowed.empty()) {
                ok = false;
                break;
            }
            // Random nonempty subset: each edge kept with probability 1/2, one forced.
            const std::size_t forced = rng() % allowed.size();
            for (std::size_t i = 0; i < allowed.size(); ++i) {
                if (i != forced && (rng() & 1) == 0) continue;
                if (c.directed) directed.push_back({allowed[i].first, allowed[i].second});
                else bidirected.emplace_back(allowed[i].first, allowed[i].second);
            }
        }
        if (!ok) continue;
        CompatibleAdmgWitness wit;
        wit.admg = MixedGraph(layout.names, std::move(directed), std::move(bidirected));
        wit.spec = concrete;
        wit.construction = Construction::Sampled;
        return wit;
    }
    return std::nullopt;
}

} // namespace cdmg
