#ifndef CDMG_ESTIMAND_HPP
#define CDMG_ESTIMAND_HPP

#include "cdmg/scm.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cdmg {

/// A cluster variable; primes tell apart summation copies of the same cluster.
struct Var {
    std::string cluster;
    int primes = 0;
    friend auto operator<=>(const Var&, const Var&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Prob, Sum, Product, Fraction };
    Kind kind = Kind::Prob;
    // Prob
    std::vector<Var> target;
    std::vector<Var> given_obs;
    std::vector<Var> given_do;
    // Sum
    std::vector<Var> bound;
    // Sum body is children[0]; Product factors; Fraction is {num, den}.
    std::vector<ExprPtr> children;
};

ExprPtr make_prob(std::vector<Var> target, std::vector<Var> given_obs = {}, std::vector<Var> given_do = {});
ExprPtr make_sum(std::vector<Var> bound, ExprPtr body);
/// Flattens nested products; sums are moved behind the other factors.
ExprPtr make_product(std::vector<ExprPtr> factors);
ExprPtr make_fraction(ExprPtr num, ExprPtr den);

bool is_observational(const ExprPtr& e);
std::vector<Var> free_variables(const ExprPtr& e);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

/// Lowercased cluster name plus one `'` per prime.
std::string symbol(const Var& v);
/// `sum_{cw} P(cw|cx) * sum_{cx'} P(cy|cw,cx') * P(cx')`
std::string to_ascii(const ExprPtr& e);
/// Same as to_ascii after sorting variables and product factors, so that
/// equal estimands written in different orders compare equal.
std::string canonical_string(const ExprPtr& e);
nlohmann::json to_json(const ExprPtr& e);
ExprPtr from_json(const nlohmann::json& j);

/// Maps a bare symbol (no primes) to its cluster name.
using SymbolResolver = std::function<std::optional<std::string>(const std::string&)>;
SymbolResolver resolver_for(const std::vector<std::string>& cluster_names);
/// Inverse of to_ascii. Throws Syntax on malformed input.
ExprPtr parse_estimand(const std::string& text, const SymbolResolver& resolve);

/// Gives every summation variable that would shadow a variable in scope a
/// fresh prime. `free` are the variables free at the top.
ExprPtr assign_primes(const ExprPtr& e, const std::vector<std::string>& free);

/// Value of an observational estimand on a joint over cluster variables
/// (named after the clusters), with free variables bound by `assignment`.
double evaluate_estimand(const ExprPtr& e, const ExactJointTable& joint, const std::map<Var, int>& assignment);

/// Reusable evaluator that caches marginals of one joint table.
class EstimandEvaluator {
public:
    /// Throws NonPositiveDistribution unless every cell is positive.
    explicit EstimandEvaluator(const ExactJointTable& joint);
    double operator()(const ExprPtr& e, const std::map<Var, int>& assignment);

private:
    double probability(const std::map<std::string, int>& assignment);
    double eval(const Expr& e, std::map<Var, int>& assignment);

    const ExactJointTable& joint_;
    std::map<std::vector<std::string>, ExactJointTable> cache_;
};

} // namespace cdmg

#endif
