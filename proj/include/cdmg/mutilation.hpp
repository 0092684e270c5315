#ifndef CDMG_MUTILATION_HPP
#define CDMG_MUTILATION_HPP

#include "cdmg/graph.hpp"

namespace cdmg {

/// Removes edges coming into `incoming` (directed heads and both ends of
/// bidirected edges) and directed edges going out of `outgoing`.
MixedGraph mutilate(const MixedGraph& g, const VertexSet& incoming, const VertexSet& outgoing);

/// Checks that clustering commutes with mutilation for the given ADMG.
bool check_mutilation_compatibility(const MixedGraph& admg, const ClusterSpec& spec, const MixedGraph& cdmg,
                                    const VertexSet& incoming_clusters, const VertexSet& outgoing_clusters);

} // namespace cdmg

#endif
