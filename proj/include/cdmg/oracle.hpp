#ifndef CDMG_ORACLE_HPP
#define CDMG_ORACLE_HPP

#include "cdmg/graph.hpp"
#include "cdmg/separation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace cdmg {

enum class Construction { Enumerated, Theorem2Construction, Sampled };

struct CompatibleAdmgWitness {
    MixedGraph admg;
    ClusterSpec spec;
    Construction construction = Construction::Enumerated;
    std::optional<std::vector<Vertex>> order_used; // cluster order, smallest first
    std::optional<Walk> active_path;                // micro path, when constructed from one
};

/// Spec with explicit members for every cluster. Unknown sizes become 2.
ClusterSpec concrete_spec(const MixedGraph& cdmg, const ClusterSpec& spec);

/// Two-copies construction. `path` must be active given `w` in `path_graph`,
/// a subgraph of `cdmg` on the same vertices; colliders on the path must
/// reach `w` in `path_graph` along edges increasing in `order`. The first two
/// members of each cluster play the copy roles; further members stay isolated.
CompatibleAdmgWitness theorem2_witness(const MixedGraph& cdmg, const ClusterSpec& spec, const MixedGraph& path_graph,
                                       const Walk& path, const VertexSet& w, const std::vector<Vertex>& order);
CompatibleAdmgWitness theorem2_witness(const MixedGraph& cdmg, const Walk& path, const VertexSet& w,
                                       const std::vector<Vertex>& order);

/// Total order (smallest first) under which every vertex can descend to `w`
/// along increasing edges, whenever it can descend at all.
std::vector<Vertex> descent_order(const MixedGraph& g, const VertexSet& w);

/// Number of edge assignments the enumeration would walk through.
double enumeration_space(const MixedGraph& cdmg, const ClusterSpec& spec);

/// Calls `visit` for every compatible ADMG in a fixed order until it returns
/// false. Throws SearchSpaceTooLarge when enumeration_space exceeds `limit`
/// and UnknownSizes when some cluster size is unknown.
void enumerate_compatible_admgs(const MixedGraph& cdmg, const ClusterSpec& spec, std::size_t limit,
                                const std::function<bool(const CompatibleAdmgWitness&)>& visit);
std::vector<CompatibleAdmgWitness> enumerate_compatible_admgs(const MixedGraph& cdmg, const ClusterSpec& spec,
                                                              std::size_t limit);

/// One compatible ADMG drawn through a random micro topological order, or
/// nothing if `attempts` draws all fail.
std::optional<CompatibleAdmgWitness> sample_compatible_admg(const MixedGraph& cdmg, const ClusterSpec& spec,
                                                            std::mt19937_64& rng, int attempts = 200);

/// Uniform double in [0,1) from a 64-bit engine, identical on every platform.
double unit_uniform(std::mt19937_64& rng);

} // namespace cdmg

#endif
