#ifndef CDMG_HEDGE_HPP
#define CDMG_HEDGE_HPP

#include "cdmg/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdmg {

/// Maximal bidirected-connected vertex sets, sorted by smallest member.
/// Bidirected self-loops do not count.
std::vector<VertexSet> c_components(const MixedGraph& g);

/// Edge subset of a host graph, in host vertex indices.
struct CForest {
    VertexSet vertices;
    std::vector<DirectedEdge> directed;
    std::vector<BidirectedEdge> bidirected;

    /// Vertices without an outgoing directed edge.
    VertexSet roots() const;
    /// Standalone graph on the forest's vertices, named as in `host`.
    MixedGraph as_graph(const MixedGraph& host) const;
    friend bool operator==(const CForest&, const CForest&) = default;
};

/// Acyclic, every vertex has at most one child, and one C-component.
bool is_c_forest(const MixedGraph& g);

struct HedgeCertificate {
    CForest f;
    CForest f_prime;
    VertexSet roots;
    VertexSet x;
    VertexSet y;
    std::vector<BidirectedEdge> projection_edges_used;
};

/// The C-DMG plus a bidirected edge between every distinct pair of vertices
/// sharing a strongly connected component.
MixedGraph sc_projection(const MixedGraph& cdmg);
/// Only the edges sc_projection adds.
std::vector<BidirectedEdge> sc_projection_added(const MixedGraph& cdmg);

std::optional<HedgeCertificate> find_hedge(const MixedGraph& g, const VertexSet& x, const VertexSet& y);
/// Hedge in the SC-projection; `host` of the certificate is sc_projection(cdmg).
std::optional<HedgeCertificate> find_sc_hedge(const MixedGraph& cdmg, const VertexSet& x, const VertexSet& y);

/// Re-checks every hedge condition from scratch against `host`. On failure,
/// `why` (if given) names the first violated condition.
bool verify_hedge(const MixedGraph& host, const HedgeCertificate& cert, std::string* why = nullptr);

} // namespace cdmg

#endif
