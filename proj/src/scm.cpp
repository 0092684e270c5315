#include "cdmg/scm.hpp"

#include "cdmg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cdmg {

std::size_t ExactJointTable::position(const std::string& variable) const {
    auto it = std::find(variables.begin(), variables.end(), variable);
    if (it == variables.end()) throw Error(ErrorCode::UnboundVariable, "table has no variable '" + variable + "'");
    return static_cast<std::size_t>(it - variables.begin());
}

double ExactJointTable::total() const {
    double s = 0;
    for (double x : p) s += x;
    return s;
}

std::vector<int> ExactJointTable::decode(std::size_t index) const {
    std::vector<int> values(cards.size());
    for (std::size_t i = cards.size(); i-- > 0;) {
        values[i] = static_cast<int>(index % static_cast<std::size_t>(cards[i]));
        index /= static_cast<std::size_t>(cards[i]);
    }
    return values;
}

ExactJointTable ExactJointTable::marginal(const std::vector<std::string>& keep) const {
    ExactJointTable out;
    out.variables = keep;
    std::vector<std::size_t> pos;
    std::size_t size = 1;
    for (const auto& v : keep) {
        pos.push_back(position(v));
        out.cards.push_back(cards[pos.back()]);
        size *= static_cast<std::size_t>(cards[pos.back()]);
    }
    out.p.assign(size, 0.0);
    std::vector<int> values(cards.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::size_t j = 0;
        for (std::size_t k = 0; k < pos.size(); ++k) j = j * static_cast<std::size_t>(out.cards[k]) + static_cast<std::size_t>(values[pos[k]]);
        out.p[j] += p[i];
        for (std::size_t k = cards.size(); k-- > 0;) {
            if (++values[k] < cards[k]) break;
            values[k] = 0;
        }
    }
    return out;
}

ExactJointTable ExactJointTable::group(const ClusterSpec& spec) const {
    std::vector<std::string> order;
    std::vector<std::string> clusters;
    std::vector<int> ccards;
    for (const auto& [name, info] : spec.clusters()) {
        if (!info.members) throw Error(ErrorCode::UnknownSizes, "members of cluster '" + name + "' are unknown");
        int card = 1;
        for (const auto& m : *info.members) {
            order.push_back(m);
            card *= cards[position(m)];
        }
        clusters.push_back(name);
        ccards.push_back(card);
    }
    if (order.size() != variables.size()) throw Error(ErrorCode::NotAPartition, "clusters do not cover the table");
    ExactJointTable m = marginal(order);
    // Member-major row-major order already matches cluster mixed-radix values.
    m.variables = clusters;
    m.cards = ccards;
    return m;
}

double ExactJointTable::probability(const std::map<std::string, int>& assignment) const {
    std::vector<int> want(variables.size(), -1);
    for (const auto& [name, value] : assignment) {
        const std::size_t k = position(name);
        if (value < 0 || value >= cards[k]) throw Error(ErrorCode::InvalidArgument, "value out of range for '" + name + "'");
        want[k] = value;
    }
    double s = 0;
    std::vector<int> values(cards.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < want.size() && match; ++k) match = want[k] < 0 || want[k] == values[k];
        if (match) s += p[i];
        for (std::size_t k = cards.size(); k-- > 0;) {
            if (++values[k] < cards[k]) break;
            values[k] = 0;
        }
    }
    return s;
}

std::size_t DiscreteScm::row_count(Vertex v) const {
    std::size_t rows = 1;
    for (Vertex p : parents[v]) rows *= static_cast<std::size_t>(cards[p]);
    for (std::size_t l : latent_parents[v]) rows *= static_cast<std::size_t>(latent_cards[l]);
    return rows;
}

std::size_t DiscreteScm::row_of(Vertex v, const std::vector<int>& values, const std::vector<int>& latent_values) const {
    std::size_t row = 0;
    for (Vertex p : parents[v]) row = row * static_cast<std::size_t>(cards[p]) + static_cast<std::size_t>(values[p]);
    for (std::size_t l : latent_parents[v])
        row = row * static_cast<std::size_t>(latent_cards[l]) + static_cast<std::size_t>(latent_values[l]);
    return row;
}

namespace {

std::vector<double> random_distribution(std::mt19937_64& rng, int k) {
    constexpr double floor = 1e-3;
    std::vector<double> out(static_cast<std::size_t>(k));
    double s = 0;
    for (auto& x : out) {
        x = unit_uniform(rng) + 1e-9;
        s += x;
    }
    for (auto& x : out) x = x / s * (1.0 - floor * k) + floor;
    return out;
}

} // namespace

DiscreteScm random_scm(const MixedGraph& admg, std::uint64_t seed, int max_cardinality) {
    try {
        validate_admg(admg);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidAdmg, e.what());
    }
    if (max_cardinality < 2) throw Error(ErrorCode::InvalidArgument, "cardinality must be at least 2");
    std::mt19937_64 rng(seed);
    DiscreteScm scm;
    scm.admg = admg;
    const std::size_t n = admg.size();
    for (std::size_t v = 0; v < n; ++v) scm.cards.push_back(2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_cardinality - 1)));
    scm.latents = admg.bidirected_edges();
    scm.parents.resize(n);
    scm.latent_parents.resize(n);
    for (std::size_t l = 0; l < scm.latents.size(); ++l) {
        scm.latent_cards.push_back(2);
        scm.latent_priors.push_back(random_distribution(rng, 2));
        scm.latent_parents[scm.latents[l].a].push_back(l);
        scm.latent_parents[scm.latents[l].b].push_back(l);
    }
    for (Vertex v = 0; v < n; ++v) {
        scm.parents[v] = admg.parents(v);
        std::vector<double> table;
        for (std::size_t r = 0; r < scm.row_count(v); ++r) {
            auto row = random_distribution(rng, scm.cards[v]);
            table.insert(table.end(), row.begin(), row.end());
        }
        scm.cpts.push_back(std::move(table));
    }
    return scm;
}

void validate_scm(const DiscreteScm& scm) {
    auto check = [](const std::vector<double>& t, std::size_t width, const std::string& what) {
        for (std::size_t r = 0; r * width < t.size(); ++r) {
            double s = 0;
            for (std::size_t i = 0; i < width; ++i) {
                if (!(t[r * width + i] > 0)) throw Error(ErrorCode::NonPositiveDistribution, what + " has a zero entry");
                s += t[r * width + i];
            }
            if (std::abs(s - 1) > 1e-12) throw Error(ErrorCode::NonPositiveDistribution, what + " row does not sum to 1");
        }
    };
    for (std::size_t l = 0; l < scm.latents.size(); ++l)
        check(scm.latent_priors[l], static_cast<std::size_t>(scm.latent_cards[l]), "latent prior");
    for (Vertex v = 0; v < scm.admg.size(); ++v) {
        if (scm.cpts[v].size() != scm.row_count(v) * static_cast<std::size_t>(scm.cards[v]))
            throw Error(ErrorCode::InvalidArgument, "table of '" + scm.admg.name(v) + "' has the wrong shape");
        check(scm.cpts[v], static_cast<std::size_t>(scm.cards[v]), "table of '" + scm.admg.name(v) + "'");
    }
}

namespace {

/// Sum over latent configurations of the product of mechanisms, with the
/// vertices in `clamped` having their mechanism removed.
ExactJointTable enumerate(const DiscreteScm& scm, const std::vector<char>& clamped,
                          const std::map<Vertex, int>& fixed, double max_states) {
    const std::size_t n = scm.admg.size();
    double states = 1;
    for (std::size_t v = 0; v < n; ++v) states *= scm.cards[v];
    for (int c : scm.latent_cards) states *= c;
    if (states > max_states)
        throw Error(ErrorCode::StateSpaceTooLarge, std::to_string(static_cast<long long>(states)) + " states exceed the bound");
    ExactJointTable t;
    t.variables = scm.admg.names();
    t.cards = scm.cards;
    std::size_t size = 1;
    for (int c : t.cards) size *= static_cast<std::size_t>(c);
    t.p.assign(size, 0.0);

    const std::size_t nl = scm.latents.size();
    std::vector<std::vector<int>> lat_configs(1, std::vector<int>(nl, 0));
    for (std::size_t l = 0; l < nl; ++l) {
        std::vector<std::vector<int>> next;
        for (const auto& c : lat_configs)
            for (int u = 0; u < scm.latent_cards[l]; ++u) {
                next.push_back(c);
                next.back()[l] = u;
            }
        lat_configs = std::move(next);
    }
    std::vector<double> lat_weight;
    for (const auto& c : lat_configs) {
        double w = 1;
        for (std::size_t l = 0; l < nl; ++l) w *= scm.latent_priors[l][static_cast<std::size_t>(c[l])];
        lat_weight.push_back(w);
    }
    std::vector<int> values(n, 0);
    for (std::size_t i = 0; i < size; ++i) {
        bool consistent = true;
        for (const auto& [v, x] : fixed) consistent = consistent && values[v] == x;
        if (consistent) {
            double total = 0;
            for (std::size_t c = 0; c < lat_configs.size(); ++c) {
                double w = lat_weight[c];
                for (Vertex v = 0; v < n; ++v) {
                    if (clamped[v]) continue;
                    w *= scm.cpts[v][scm.row_of(v, values, lat_configs[c]) * static_cast<std::size_t>(scm.cards[v]) +
                                     static_cast<std::size_t>(values[v])];
                }
                total += w;
            }
            t.p[i] = total;
        }
        for (std::size_t k = n; k-- > 0;) {
            if (++values[k] < scm.cards[k]) break;
            values[k] = 0;
        }
    }
    return t;
}

} // namespace

ExactJointTable exact_joint(const DiscreteScm& scm, double max_states) {
    return enumerate(scm, std::vector<char>(scm.admg.size(), 0), {}, max_states);
}

ExactJointTable interventional_truth(const DiscreteScm& scm, const std::map<Vertex, int>& x, const VertexSet& y,
                                     double max_states) {
    std::vector<char> clamped(scm.admg.size(), 0);
    for (const auto& [v, value] : x) {
        if (v >= scm.admg.size()) throw Error(ErrorCode::UnknownVertex, "intervened vertex out of range");
        if (value < 0 || value >= scm.cards[v]) throw Error(ErrorCode::InvalidArgument, "intervention value out of range");
        clamped[v] = 1;
    }
    const ExactJointTable full = enumerate(scm, clamped, x, max_states);
    return full.marginal(scm.admg.names_of(y));
}

} // namespace cdmg
