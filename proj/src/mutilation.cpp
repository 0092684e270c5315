#include "cdmg/mutilation.hpp"

namespace cdmg {

MixedGraph mutilate(const MixedGraph& g, const VertexSet& incoming, const VertexSet& outgoing) {
    require_vertices(g, incoming);
    require_vertices(g, outgoing);
    std::vector<DirectedEdge> d;
    std::vector<BidirectedEdge> b;
    for (const auto& e : g.directed_edges())
        if (!incoming.contains(e.head) && !outgoing.contains(e.tail)) d.push_back(e);
    for (const auto& e : g.bidirected_edges())
        if (!incoming.contains(e.a) && !incoming.contains(e.b)) b.push_back(e);
    return g.with_edges(std::move(d), std::move(b));
}

bool check_mutilation_compatibility(const MixedGraph& admg, const ClusterSpec& spec, const MixedGraph& cdmg,
                                    const VertexSet& incoming_clusters, const VertexSet& outgoing_clusters) {
    const MixedGraph micro = mutilate(admg, lift(cdmg, incoming_clusters, admg, spec),
                                      lift(cdmg, outgoing_clusters, admg, spec));
    return cluster_graph_of(micro, spec) == mutilate(cdmg, incoming_clusters, outgoing_clusters);
}

} // namespace cdmg
