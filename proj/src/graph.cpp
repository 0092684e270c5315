#include "cdmg/graph.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace cdmg {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::CycleFound: return "CycleFound";
    case ErrorCode::SelfLoopFound: return "SelfLoopFound";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::InvalidAdmg: return "InvalidAdmg";
    case ErrorCode::WalkNotInGraph: return "WalkNotInGraph";
    case ErrorCode::EmptyWalk: return "EmptyWalk";
    case ErrorCode::SetsNotDisjoint: return "SetsNotDisjoint";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::RuleActuallyApplies: return "RuleActuallyApplies";
    case ErrorCode::AssumptionOneViolated: return "AssumptionOneViolated";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::NonPositiveDistribution: return "NonPositiveDistribution";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NotObservational: return "NotObservational";
    case ErrorCode::NotIdentified: return "NotIdentified";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::UnknownSizes: return "UnknownSizes";
    case ErrorCode::PathNotActive: return "PathNotActive";
    case ErrorCode::OrderIncompatible: return "OrderIncompatible";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Syntax: return "Syntax";
    }
    return "Unknown";
}

bool is_valid_name(std::string_view name) {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) return false;
    return std::all_of(name.begin(), name.end(), [&](char c) { return alpha(c) || digit(c) || c == '.'; });
}

MixedGraph::MixedGraph(std::vector<std::string> names, std::vector<DirectedEdge> directed,
                       std::vector<BidirectedEdge> bidirected)
    : names_(std::move(names)), directed_(std::move(directed)), bidirected_(std::move(bidirected)) {
    for (std::size_t i = 1; i < names_.size(); ++i) {
        if (!(names_[i - 1] < names_[i]))
            throw Error(ErrorCode::DuplicateVertex, "vertex names must be sorted and unique near '" + names_[i] + "'");
    }
    const auto n = static_cast<Vertex>(names_.size());
    std::sort(directed_.begin(), directed_.end());
    std::sort(bidirected_.begin(), bidirected_.end());
    if (std::adjacent_find(directed_.begin(), directed_.end()) != directed_.end())
        throw Error(ErrorCode::DuplicateEdge, "duplicate directed edge");
    if (std::adjacent_find(bidirected_.begin(), bidirected_.end()) != bidirected_.end())
        throw Error(ErrorCode::DuplicateEdge, "duplicate bidirected edge");

    children_.assign(n, {});
    parents_.assign(n, {});
    siblings_.assign(n, {});
    directed_self_.assign(n, 0);
    bidirected_self_.assign(n, 0);
    for (const auto& e : directed_) {
        if (e.tail >= n || e.head >= n) throw Error(ErrorCode::UnknownVertex, "directed edge endpoint out of range");
        if (e.tail == e.head) {
            directed_self_[e.tail] = 1;
            continue;
        }
        children_[e.tail].push_back(e.head);
        parents_[e.head].push_back(e.tail);
    }
    for (const auto& e : bidirected_) {
        if (e.b >= n) throw Error(ErrorCode::UnknownVertex, "bidirected edge endpoint out of range");
        if (e.a == e.b) {
            bidirected_self_[e.a] = 1;
            continue;
        }
        siblings_[e.a].push_back(e.b);
        siblings_[e.b].push_back(e.a);
    }
    for (auto* lists : {&children_, &parents_, &siblings_})
        for (auto& l : *lists) std::sort(l.begin(), l.end());
}

MixedGraph MixedGraph::from_names(std::vector<std::string> names,
                                  const std::vector<std::pair<std::string, std::string>>& directed,
                                  const std::vector<std::pair<std::string, std::string>>& bidirected) {
    GraphBuilder b;
    for (const auto& n : names) b.add_vertex(n);
    for (const auto& [t, h] : directed) b.add_directed(t, h);
    for (const auto& [x, y] : bidirected) b.add_bidirected(x, y);
    return b.build();
}

std::optional<Vertex> MixedGraph::find(std::string_view name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name,
                               [](const std::string& a, std::string_view b) { return a < b; });
    if (it == names_.end() || *it != name) return std::nullopt;
    return static_cast<Vertex>(it - names_.begin());
}

Vertex MixedGraph::index(std::string_view name) const {
    auto v = find(name);
    if (!v) throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + std::string(name) + "'");
    return *v;
}

VertexSet MixedGraph::vertex_set(const std::vector<std::string>& names) const {
    VertexSet s;
    for (const auto& n : names) s.insert(index(n));
    return s;
}

std::vector<std::string> MixedGraph::names_of(const VertexSet& s) const {
    std::vector<std::string> out;
    out.reserve(s.size());
    for (Vertex v : s) out.push_back(name(v));
    return out;
}

bool MixedGraph::has_directed(Vertex tail, Vertex head) const {
    return std::binary_search(directed_.begin(), directed_.end(), DirectedEdge{tail, head});
}

bool MixedGraph::has_bidirected(Vertex a, Vertex b) const {
    return std::binary_search(bidirected_.begin(), bidirected_.end(), BidirectedEdge(a, b));
}

bool MixedGraph::has_self_loops() const {
    return std::any_of(directed_self_.begin(), directed_self_.end(), [](char c) { return c != 0; }) ||
           std::any_of(bidirected_self_.begin(), bidirected_self_.end(), [](char c) { return c != 0; });
}

MixedGraph MixedGraph::with_edges(std::vector<DirectedEdge> directed, std::vector<BidirectedEdge> bidirected) const {
    return MixedGraph(names_, std::move(directed), std::move(bidirected));
}

MixedGraph MixedGraph::induced(const VertexSet& keep) const {
    std::vector<std::string> names;
    std::vector<Vertex> remap(size(), static_cast<Vertex>(-1));
    for (Vertex v : keep) {
        remap[v] = static_cast<Vertex>(names.size());
        names.push_back(name(v));
    }
    std::vector<DirectedEdge> d;
    for (const auto& e : directed_)
        if (keep.contains(e.tail) && keep.contains(e.head)) d.push_back({remap[e.tail], remap[e.head]});
    std::vector<BidirectedEdge> b;
    for (const auto& e : bidirected_)
        if (keep.contains(e.a) && keep.contains(e.b)) b.emplace_back(remap[e.a], remap[e.b]);
    return MixedGraph(std::move(names), std::move(d), std::move(b));
}

GraphBuilder& GraphBuilder::add_vertex(const std::string& name) {
    if (!is_valid_name(name)) throw Error(ErrorCode::InvalidName, "invalid vertex name '" + name + "'");
    if (!vertices_.emplace(name, 0).second) throw Error(ErrorCode::DuplicateVertex, "duplicate vertex '" + name + "'");
    return *this;
}

GraphBuilder& GraphBuilder::add_directed(const std::string& tail, const std::string& head) {
    directed_.emplace_back(tail, head);
    return *this;
}

GraphBuilder& GraphBuilder::add_bidirected(const std::string& a, const std::string& b) {
    bidirected_.emplace_back(std::min(a, b), std::max(a, b));
    return *this;
}

MixedGraph GraphBuilder::build() const {
    std::vector<std::string> names;
    for (const auto& [n, _] : vertices_) names.push_back(n);
    auto idx = [&](const std::string& n) {
        auto it = std::lower_bound(names.begin(), names.end(), n);
        if (it == names.end() || *it != n) throw Error(ErrorCode::UnknownVertex, "edge endpoint '" + n + "' is not declared");
        return static_cast<Vertex>(it - names.begin());
    };
    std::vector<DirectedEdge> d;
    for (const auto& [t, h] : directed_) d.push_back({idx(t), idx(h)});
    std::vector<BidirectedEdge> b;
    for (const auto& [x, y] : bidirected_) b.emplace_back(idx(x), idx(y));
    std::sort(d.begin(), d.end());
    if (auto it = std::adjacent_find(d.begin(), d.end()); it != d.end())
        throw Error(ErrorCode::DuplicateEdge, "duplicate edge " + names[it->tail] + " -> " + names[it->head]);
    std::sort(b.begin(), b.end());
    if (auto it = std::adjacent_find(b.begin(), b.end()); it != b.end())
        throw Error(ErrorCode::DuplicateEdge, "duplicate edge " + names[it->a] + " <-> " + names[it->b]);
    return MixedGraph(std::move(names), std::move(d), std::move(b));
}

std::optional<std::vector<Vertex>> find_directed_cycle(const MixedGraph& g) {
    const std::size_t n = g.size();
    std::vector<int> color(n, 0);
    std::vector<Vertex> stack;
    std::optional<std::vector<Vertex>> found;
    std::function<bool(Vertex)> visit = [&](Vertex v) {
        color[v] = 1;
        stack.push_back(v);
        for (Vertex c : g.children(v)) {
            if (color[c] == 1) {
                auto it = std::find(stack.begin(), stack.end(), c);
                found = std::vector<Vertex>(it, stack.end());
                return true;
            }
            if (color[c] == 0 && visit(c)) return true;
        }
        stack.pop_back();
        color[v] = 2;
        return false;
    };
    for (Vertex v = 0; v < n; ++v)
        if (color[v] == 0 && visit(v)) return found;
    return std::nullopt;
}

bool is_acyclic(const MixedGraph& g) { return !find_directed_cycle(g).has_value(); }

void validate_admg(const MixedGraph& g) {
    for (Vertex v = 0; v < g.size(); ++v) {
        if (g.has_directed_self_loop(v) || g.has_bidirected_self_loop(v))
            throw Error(ErrorCode::SelfLoopFound, "self-loop on '" + g.name(v) + "'");
    }
    if (auto cycle = find_directed_cycle(g)) {
        std::ostringstream os;
        for (Vertex v : *cycle) os << g.name(v) << " -> ";
        os << g.name(cycle->front());
        throw Error(ErrorCode::CycleFound, os.str());
    }
}

std::vector<Vertex> topological_order(const MixedGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> indeg(n, 0);
    for (Vertex v = 0; v < n; ++v) indeg[v] = g.parents(v).size();
    std::set<Vertex> ready;
    for (Vertex v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.insert(v);
    std::vector<Vertex> order;
    while (!ready.empty()) {
        Vertex v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (Vertex c : g.children(v))
            if (--indeg[c] == 0) ready.insert(c);
    }
    if (order.size() != n) validate_admg(strip_self_loops(g).graph);
    return order;
}

void require_vertices(const MixedGraph& g, const VertexSet& s) {
    for (Vertex v : s)
        if (v >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v) + " out of range");
}

void require_disjoint(std::initializer_list<const VertexSet*> sets) {
    std::vector<const VertexSet*> list(sets);
    for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = i + 1; j < list.size(); ++j)
            if (list[i]->intersects(*list[j])) throw Error(ErrorCode::SetsNotDisjoint, "query sets must be pairwise disjoint");
}

VertexSet parents(const MixedGraph& g, Vertex v) {
    if (v >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index out of range");
    const auto& p = g.parents(v);
    return VertexSet(p.begin(), p.end());
}

namespace {

VertexSet closure(const MixedGraph& g, const VertexSet& s, bool forward) {
    require_vertices(g, s);
    std::vector<char> seen(g.size(), 0);
    std::vector<Vertex> frontier(s.begin(), s.end());
    for (Vertex v : s) seen[v] = 1;
    while (!frontier.empty()) {
        Vertex v = frontier.back();
        frontier.pop_back();
        for (Vertex u : forward ? g.children(v) : g.parents(v)) {
            if (!seen[u]) {
                seen[u] = 1;
                frontier.push_back(u);
            }
        }
    }
    return from_mask(seen);
}

} // namespace

VertexSet ancestors(const MixedGraph& g, const VertexSet& s) { return closure(g, s, false); }
VertexSet descendants(const MixedGraph& g, const VertexSet& s) { return closure(g, s, true); }

VertexSet scc(const MixedGraph& g, Vertex v) {
    if (v >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index out of range");
    return ancestors(g, {v}) & descendants(g, {v});
}

std::vector<VertexSet> strongly_connected_components(const MixedGraph& g) {
    const auto n = static_cast<int>(g.size());
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<Vertex> stack;
    std::vector<VertexSet> out;
    int counter = 0;
    std::function<void(Vertex)> strong = [&](Vertex v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (Vertex w : g.children(v)) {
            if (index[w] < 0) {
                strong(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            VertexSet comp;
            Vertex w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp.insert(w);
            } while (w != v);
            out.push_back(std::move(comp));
        }
    };
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v)
        if (index[v] < 0) strong(v);
    std::sort(out.begin(), out.end(), [](const VertexSet& a, const VertexSet& b) { return a.front() < b.front(); });
    return out;
}

NormalizedGraph strip_self_loops(const MixedGraph& g) {
    std::vector<DirectedEdge> d;
    std::vector<BidirectedEdge> b;
    for (const auto& e : g.directed_edges())
        if (e.tail != e.head) d.push_back(e);
    for (const auto& e : g.bidirected_edges())
        if (e.a != e.b) b.push_back(e);
    return {g.with_edges(std::move(d), std::move(b)), g.has_self_loops()};
}

// ---------------------------------------------------------------------------
// ClusterSpec

void ClusterSpec::set(const std::string& cluster, ClusterInfo info) {
    if (!is_valid_name(cluster)) throw Error(ErrorCode::InvalidName, "invalid cluster name '" + cluster + "'");
    if (info.size && *info.size <= 0)
        throw Error(ErrorCode::NotAPartition, "cluster '" + cluster + "' must have a positive size");
    if (info.members) {
        std::set<std::string> uniq(info.members->begin(), info.members->end());
        if (uniq.size() != info.members->size())
            throw Error(ErrorCode::NotAPartition, "cluster '" + cluster + "' lists a member twice");
        if (info.members->empty()) throw Error(ErrorCode::NotAPartition, "cluster '" + cluster + "' has no members");
        if (info.size && static_cast<std::size_t>(*info.size) != info.members->size())
            throw Error(ErrorCode::NotAPartition, "cluster '" + cluster + "' size does not match its member count");
        for (const auto& [other, oi] : clusters_) {
            if (other == cluster || !oi.members) continue;
            for (const auto& m : *info.members)
                if (std::find(oi.members->begin(), oi.members->end(), m) != oi.members->end())
                    throw Error(ErrorCode::NotAPartition, "member '" + m + "' appears in both '" + other + "' and '" + cluster + "'");
        }
    }
    clusters_[cluster] = std::move(info);
}

const ClusterInfo* ClusterSpec::find(const std::string& cluster) const {
    auto it = clusters_.find(cluster);
    return it == clusters_.end() ? nullptr : &it->second;
}

std::optional<int> ClusterSpec::known_size(const std::string& cluster) const {
    const auto* info = find(cluster);
    if (!info) return std::nullopt;
    if (info->size) return info->size;
    if (info->members) return static_cast<int>(info->members->size());
    return std::nullopt;
}

bool ClusterSpec::all_members_known() const {
    return std::all_of(clusters_.begin(), clusters_.end(), [](const auto& kv) { return kv.second.members.has_value(); });
}

bool ClusterSpec::satisfies_assumption_1() const {
    for (const auto& [name, _] : clusters_) {
        auto k = known_size(name);
        if (k && *k < 2) return false;
    }
    return true;
}

std::map<std::string, std::string> ClusterSpec::cluster_of() const {
    std::map<std::string, std::string> out;
    for (const auto& [name, info] : clusters_) {
        if (!info.members) throw Error(ErrorCode::UnknownSizes, "members of cluster '" + name + "' are unknown");
        for (const auto& m : *info.members) out[m] = name;
    }
    return out;
}

ClusterSpec ClusterSpec::singletons(const MixedGraph& admg) {
    ClusterSpec spec;
    for (const auto& n : admg.names()) spec.set(n, ClusterInfo{std::vector<std::string>{n}, 1});
    return spec;
}

ClusterSpec ClusterSpec::uniform(const MixedGraph& cdmg, int size) {
    ClusterSpec spec;
    for (const auto& n : cdmg.names()) spec.set(n, ClusterInfo{std::nullopt, size});
    return spec.with_generated_members(cdmg);
}

ClusterSpec ClusterSpec::with_generated_members(const MixedGraph& cdmg) const {
    ClusterSpec out;
    for (const auto& n : cdmg.names()) {
        const auto* info = find(n);
        if (info && info->members) {
            out.set(n, *info);
            continue;
        }
        auto k = known_size(n);
        if (!k) throw Error(ErrorCode::UnknownSizes, "size of cluster '" + n + "' is unknown");
        std::vector<std::string> members;
        for (int i = 1; i <= *k; ++i) members.push_back(n + "_" + std::to_string(i));
        out.set(n, ClusterInfo{members, *k});
    }
    return out;
}

MixedGraph cluster_graph_of(const MixedGraph& admg, const ClusterSpec& spec) {
    try {
        validate_admg(admg);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidAdmg, e.what());
    }
    std::vector<std::string> cluster_names;
    for (const auto& [name, _] : spec.clusters()) cluster_names.push_back(name);
    std::vector<Vertex> owner(admg.size(), static_cast<Vertex>(-1));
    for (Vertex c = 0; c < cluster_names.size(); ++c) {
        const auto* info = spec.find(cluster_names[c]);
        if (!info->members) throw Error(ErrorCode::NotAPartition, "members of cluster '" + cluster_names[c] + "' are unknown");
        for (const auto& m : *info->members) {
            auto v = admg.find(m);
            if (!v) throw Error(ErrorCode::NotAPartition, "member '" + m + "' is not a vertex of the ADMG");
            owner[*v] = c;
        }
    }
    for (Vertex v = 0; v < admg.size(); ++v)
        if (owner[v] == static_cast<Vertex>(-1))
            throw Error(ErrorCode::NotAPartition, "vertex '" + admg.name(v) + "' belongs to no cluster");
    std::set<DirectedEdge> d;
    std::set<BidirectedEdge> b;
    for (const auto& e : admg.directed_edges()) d.insert({owner[e.tail], owner[e.head]});
    for (const auto& e : admg.bidirected_edges()) b.insert(BidirectedEdge(owner[e.a], owner[e.b]));
    return MixedGraph(std::move(cluster_names), {d.begin(), d.end()}, {b.begin(), b.end()});
}

bool compatible(const MixedGraph& admg, const ClusterSpec& spec, const MixedGraph& cdmg) {
    return cluster_graph_of(admg, spec) == cdmg;
}

VertexSet lift(const MixedGraph& cdmg, const VertexSet& clusters, const MixedGraph& admg, const ClusterSpec& spec) {
    VertexSet out;
    for (Vertex c : clusters) {
        const auto* info = spec.find(cdmg.name(c));
        if (!info || !info->members) throw Error(ErrorCode::UnknownSizes, "members of cluster '" + cdmg.name(c) + "' are unknown");
        for (const auto& m : *info->members) out.insert(admg.index(m));
    }
    return out;
}

} // namespace cdmg
