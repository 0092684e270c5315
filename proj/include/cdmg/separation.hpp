#ifndef CDMG_SEPARATION_HPP
#define CDMG_SEPARATION_HPP

#include "cdmg/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdmg {

/// Orientation of one walk step, read from the step's first vertex:
/// Forward is `from -> to`, Backward is `from <- to`.
enum class EdgeKind { Forward, Backward, Bidirected };

/// Alternating vertex/edge sequence. `edges.size() + 1 == vertices.size()`
/// unless the walk is empty. Vertices may repeat.
struct Walk {
    std::vector<Vertex> vertices;
    std::vector<EdgeKind> edges;

    bool empty() const noexcept { return vertices.empty(); }
    std::size_t length() const noexcept { return edges.size(); }
    Vertex front() const { return vertices.front(); }
    Vertex back() const { return vertices.back(); }
    bool is_path() const;
    friend bool operator==(const Walk&, const Walk&) = default;
};

/// Throws WalkNotInGraph unless every step is an edge of g.
void require_walk(const MixedGraph& g, const Walk& w);

/// Blocking test on walks. Steps along self-loops are skipped.
bool is_blocked(const MixedGraph& g, const Walk& w, const VertexSet& z);

/// Last-occurrence reduction of a walk to a path with the same endpoints.
Walk primary_path(const Walk& w);

/// Some z-active path from x to y, or nothing if x and y are d-separated.
/// Sets must be pairwise disjoint.
std::optional<Walk> find_active_path(const MixedGraph& g, const VertexSet& x, const VertexSet& y,
                                     const VertexSet& z);

bool d_separated(const MixedGraph& g, const VertexSet& x, const VertexSet& y, const VertexSet& z);

/// Reference implementation: enumerates every simple path. Refuses graphs
/// with more than `max_vertices` vertices.
bool d_separated_exhaustive(const MixedGraph& g, const VertexSet& x, const VertexSet& y,
                            const VertexSet& z, std::size_t max_vertices = 12);

/// "A -> B <-> C <- D"
std::string format_walk(const MixedGraph& g, const Walk& w);

} // namespace cdmg

#endif
