#ifndef CDMG_GRAPH_HPP
#define CDMG_GRAPH_HPP

#include "cdmg/error.hpp"
#include "cdmg/vertex_set.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cdmg {

struct DirectedEdge {
    Vertex tail = 0;
    Vertex head = 0;
    friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Unordered pair, stored with a <= b.
struct BidirectedEdge {
    Vertex a = 0;
    Vertex b = 0;
    BidirectedEdge() = default;
    BidirectedEdge(Vertex x, Vertex y) : a(std::min(x, y)), b(std::max(x, y)) {}
    friend auto operator<=>(const BidirectedEdge&, const BidirectedEdge&) = default;
};

/// A directed mixed graph: directed edges, bidirected edges, cycles and
/// self-loops allowed. Serves both as ADMG (after validate_admg) and as C-DMG.
/// Immutable once built; vertices are sorted by name so that iteration order
/// is deterministic everywhere.
class MixedGraph {
public:
    MixedGraph() = default;

    /// `names` must be sorted and unique; edge endpoints are indices into it.
    MixedGraph(std::vector<std::string> names, std::vector<DirectedEdge> directed,
               std::vector<BidirectedEdge> bidirected);

    static MixedGraph from_names(std::vector<std::string> names,
                                 const std::vector<std::pair<std::string, std::string>>& directed,
                                 const std::vector<std::pair<std::string, std::string>>& bidirected);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(Vertex v) const { return names_.at(v); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<Vertex> find(std::string_view name) const;
    Vertex index(std::string_view name) const;
    VertexSet vertex_set(const std::vector<std::string>& names) const;
    std::vector<std::string> names_of(const VertexSet& s) const;
    VertexSet all() const { return VertexSet::range(static_cast<Vertex>(size())); }

    const std::vector<DirectedEdge>& directed_edges() const noexcept { return directed_; }
    const std::vector<BidirectedEdge>& bidirected_edges() const noexcept { return bidirected_; }

    // Adjacency lists never contain the vertex itself; self-loops are flags.
    const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
    const std::vector<Vertex>& parents(Vertex v) const { return parents_.at(v); }
    const std::vector<Vertex>& siblings(Vertex v) const { return siblings_.at(v); }

    bool has_directed(Vertex tail, Vertex head) const;
    bool has_bidirected(Vertex a, Vertex b) const;
    bool has_directed_self_loop(Vertex v) const { return directed_self_.at(v) != 0; }
    bool has_bidirected_self_loop(Vertex v) const { return bidirected_self_.at(v) != 0; }
    bool has_self_loops() const;

    /// Copy with only the listed edges (same vertices).
    MixedGraph with_edges(std::vector<DirectedEdge> directed, std::vector<BidirectedEdge> bidirected) const;
    /// Subgraph induced by `keep`, renumbered.
    MixedGraph induced(const VertexSet& keep) const;

    friend bool operator==(const MixedGraph& a, const MixedGraph& b) {
        return a.names_ == b.names_ && a.directed_ == b.directed_ && a.bidirected_ == b.bidirected_;
    }

private:
    std::vector<std::string> names_;
    std::vector<DirectedEdge> directed_;
    std::vector<BidirectedEdge> bidirected_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<std::vector<Vertex>> parents_;
    std::vector<std::vector<Vertex>> siblings_;
    std::vector<char> directed_self_;
    std::vector<char> bidirected_self_;
};

/// Name-based incremental construction; rejects duplicates and bad names.
class GraphBuilder {
public:
    GraphBuilder& add_vertex(const std::string& name);
    GraphBuilder& add_directed(const std::string& tail, const std::string& head);
    GraphBuilder& add_bidirected(const std::string& a, const std::string& b);
    bool has_vertex(const std::string& name) const { return vertices_.count(name) != 0; }
    MixedGraph build() const;

private:
    std::map<std::string, int> vertices_;
    std::vector<std::pair<std::string, std::string>> directed_;
    std::vector<std::pair<std::string, std::string>> bidirected_;
};

bool is_valid_name(std::string_view name);

/// Throws CycleFound (message lists one cycle) or SelfLoopFound.
void validate_admg(const MixedGraph& g);
bool is_acyclic(const MixedGraph& g);
std::optional<std::vector<Vertex>> find_directed_cycle(const MixedGraph& g);
/// Throws CycleFound if g has a directed cycle (self-loops ignored).
std::vector<Vertex> topological_order(const MixedGraph& g);

VertexSet parents(const MixedGraph& g, Vertex v);
/// Reflexive: every vertex of `s` is its own ancestor.
VertexSet ancestors(const MixedGraph& g, const VertexSet& s);
/// Reflexive: every vertex of `s` is its own descendant.
VertexSet descendants(const MixedGraph& g, const VertexSet& s);
VertexSet scc(const MixedGraph& g, Vertex v);
/// Tarjan; components sorted by smallest member.
std::vector<VertexSet> strongly_connected_components(const MixedGraph& g);

struct NormalizedGraph {
    MixedGraph graph;
    bool had_self_loops = false;
};
NormalizedGraph strip_self_loops(const MixedGraph& g);

void require_vertices(const MixedGraph& g, const VertexSet& s);
void require_disjoint(std::initializer_list<const VertexSet*> sets);

struct ClusterInfo {
    std::optional<std::vector<std::string>> members;
    std::optional<int> size;
    friend bool operator==(const ClusterInfo&, const ClusterInfo&) = default;
};

/// Cluster metadata: per cluster, optional member list and optional size.
class ClusterSpec {
public:
    ClusterSpec() = default;

    /// Throws NotAPartition on size/members mismatch, overlapping members or
    /// a non-positive size.
    void set(const std::string& cluster, ClusterInfo info);
    const std::map<std::string, ClusterInfo>& clusters() const noexcept { return clusters_; }
    bool contains(const std::string& cluster) const { return clusters_.count(cluster) != 0; }
    const ClusterInfo* find(const std::string& cluster) const;

    std::optional<int> known_size(const std::string& cluster) const;
    bool all_members_known() const;
    bool satisfies_assumption_1() const;
    /// micro vertex -> cluster name; members must be known.
    std::map<std::string, std::string> cluster_of() const;

    /// One singleton cluster per ADMG vertex, named after the vertex.
    static ClusterSpec singletons(const MixedGraph& admg);
    /// Every C-DMG vertex gets `size` generated members `<cluster>_<i>`.
    static ClusterSpec uniform(const MixedGraph& cdmg, int size);
    /// Members generated from known sizes (`<cluster>_<i>`); throws UnknownSizes.
    ClusterSpec with_generated_members(const MixedGraph& cdmg) const;

    friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;

private:
    std::map<std::string, ClusterInfo> clusters_;
};

/// Cluster graph induced by a partition of an ADMG (self-loops included).
MixedGraph cluster_graph_of(const MixedGraph& admg, const ClusterSpec& spec);
bool compatible(const MixedGraph& admg, const ClusterSpec& spec, const MixedGraph& cdmg);

/// Union of the members of the given clusters, as vertices of `admg`.
VertexSet lift(const MixedGraph& cdmg, const VertexSet& clusters, const MixedGraph& admg,
               const ClusterSpec& spec);

} // namespace cdmg

#endif
