#ifndef CDMG_IDENTIFY_HPP
#define CDMG_IDENTIFY_HPP

#include "cdmg/docalc.hpp"
#include "cdmg/estimand.hpp"
#include "cdmg/hedge.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdmg {

struct Budget {
    int max_depth = 8;
    std::size_t max_nodes = 10000;
};

/// One rewrite step. `rule` is R1, R2, R3, TP (sum over a new variable) or
/// CHAIN (chain rule on a joint target).
struct TraceEntry {
    std::string rule;
    std::string condition;             // d-separation statement, empty for TP/CHAIN
    std::optional<MixedGraph> mutilated;
    std::string before;
    std::string after;
};

struct SearchReport {
    std::size_t expansions = 0;
    int depth_reached = 0;
    Budget budget;
    bool exhausted = false; // stopped by the node budget
};

enum class VerdictKind { Identified, NonIdentifiable, Unknown };
std::string to_string(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    ExprPtr estimand;
    std::vector<TraceEntry> trace;
    std::optional<HedgeCertificate> certificate;
    std::optional<MixedGraph> certificate_host;
    SearchReport report;
    bool assumption1_warning = false;
};

/// P(y | do(x), w) on a C-DMG. Hedges are only consulted when w is empty.
Verdict identify_macro(const MixedGraph& cdmg, const ClusterSpec& spec, const VertexSet& x, const VertexSet& y,
                       const VertexSet& w = {}, const Budget& budget = {});

/// Throws NotIdentified unless the verdict is Identified.
const std::vector<TraceEntry>& derivation_trace(const Verdict& v);

} // namespace cdmg

#endif
