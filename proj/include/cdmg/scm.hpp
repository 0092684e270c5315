#ifndef CDMG_SCM_HPP
#define CDMG_SCM_HPP

#include "cdmg/graph.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cdmg {

/// Full joint over named discrete variables, row-major (last variable
/// varies fastest).
struct ExactJointTable {
    std::vector<std::string> variables;
    std::vector<int> cards;
    std::vector<double> p;

    std::size_t position(const std::string& variable) const;
    double total() const;
    /// Joint over a subset of the variables, in the given order.
    ExactJointTable marginal(const std::vector<std::string>& keep) const;
    /// Merge variables into cluster variables; a cluster's value is the
    /// mixed-radix number of its members' values in member order.
    ExactJointTable group(const ClusterSpec& spec) const;
    /// Probability of a partial assignment.
    double probability(const std::map<std::string, int>& assignment) const;
    /// Row-major index -> per-variable values.
    std::vector<int> decode(std::size_t index) const;
};

/// Positive discrete SCM: one mechanism per ADMG vertex and one latent
/// variable for each bidirected edge, feeding exactly its two endpoints.
struct DiscreteScm {
    MixedGraph admg;
    std::vector<int> cards;
    std::vector<BidirectedEdge> latents;
    std::vector<int> latent_cards;
    std::vector<std::vector<double>> latent_priors;
    std::vector<std::vector<Vertex>> parents;             // observed parents per vertex
    std::vector<std::vector<std::size_t>> latent_parents; // latent indices per vertex
    /// cpts[v][row * cards[v] + value], row enumerating parents then latents
    /// in the order above, row-major.
    std::vector<std::vector<double>> cpts;

    std::size_t row_count(Vertex v) const;
    std::size_t row_of(Vertex v, const std::vector<int>& values, const std::vector<int>& latent_values) const;
};

/// Reproducible from `seed`; every table entry is at least 1e-3.
DiscreteScm random_scm(const MixedGraph& admg, std::uint64_t seed, int max_cardinality = 2);
/// Throws NonPositiveDistribution if a table is not a positive distribution.
void validate_scm(const DiscreteScm& scm);

ExactJointTable exact_joint(const DiscreteScm& scm, double max_states = 1e7);
/// P(y | do(x)) for every configuration of `y` (table over y's names, in
/// vertex order).
ExactJointTable interventional_truth(const DiscreteScm& scm, const std::map<Vertex, int>& x, const VertexSet& y,
                                     double max_states = 1e7);

} // namespace cdmg

#endif
