#ifndef CDMG_PROBE_HPP
#define CDMG_PROBE_HPP

#include "cdmg/oracle.hpp"
#include "cdmg/scm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdmg {

struct ProbeModel {
    CompatibleAdmgWitness witness;
    DiscreteScm scm;
};

/// Two models with the same observational distribution but different
/// P(c_y | do(c_x)).
struct FoundPair {
    ProbeModel first;
    ProbeModel second;
    std::string strategy;            // "bow" or "reversal"
    std::string micro_x, micro_y;    // the micro pair carrying the difference
    double observational_gap = 0;    // max |P1(v) - P2(v)|
    double interventional_gap = 0;   // max |P1(y|do(x)) - P2(y|do(x))| over cluster values
    std::uint64_t seed = 0;          // seed of the winning trial
};

struct ProbeResult {
    std::optional<FoundPair> pair;
    std::size_t admgs_examined = 0;
    std::size_t candidates_tried = 0;
    bool exhausted() const { return !pair.has_value(); }
};

/// Looks for an observationally equivalent, interventionally different pair
/// among the compatible ADMGs, by coupling parameters rather than sampling
/// joints: (bow) one ADMG with a -> b and a <-> b, where the second model
/// drops the latent; (reversal) two ADMGs with a -> b and b -> a, where the
/// second model is the Bayes reversal of the first. Each candidate gets
/// `trials` parameter draws; a pair counts when the gap exceeds `min_gap`.
ProbeResult nonidentifiability_probe(const MixedGraph& cdmg, const ClusterSpec& spec, const VertexSet& x,
                                     const VertexSet& y, int trials, std::uint64_t seed,
                                     std::size_t limit = 200000, double min_gap = 0.01);

/// max over cluster configurations of x and y of |P1(c_y|do(c_x)) - P2(c_y|do(c_x))|.
double interventional_gap(const MixedGraph& cdmg, const ClusterSpec& concrete, const VertexSet& x, const VertexSet& y,
                          const DiscreteScm& first, const DiscreteScm& second);

} // namespace cdmg

#endif
