#include "support.hpp"

#include "cdmg/scm.hpp"

#include <doctest.h>

using namespace cdmg;

TEST_SUITE("scm") {

TEST_CASE("same seed, same model") {
    auto g = cdmg::testing::fixture("fig1a").graph;
    auto a = random_scm(g, 42), b = random_scm(g, 42);
    CHECK(a.cpts == b.cpts);
    CHECK(a.latent_priors == b.latent_priors);
    CHECK(random_scm(g, 43).cpts != a.cpts);
    CHECK_NOTHROW(validate_scm(a));
}

TEST_CASE("one latent per bidirected edge") {
    auto g = MixedGraph::from_names({"A", "B"}, {}, {{"A", "B"}});
    auto scm = random_scm(g, 1);
    CHECK(scm.latents.size() == 1);
    CHECK(scm.latent_parents[0] == std::vector<std::size_t>{0});
    CHECK(scm.latent_parents[1] == std::vector<std::size_t>{0});
}

TEST_CASE("empty graph") {
    auto scm = random_scm(MixedGraph{}, 1);
    auto joint = exact_joint(scm);
    REQUIRE(joint.p.size() == 1);
    CHECK(joint.p[0] == doctest::Approx(1.0));
}

TEST_CASE("independent uniform variables") {
    auto g = MixedGraph::from_names({"X", "Y"}, {}, {});
    auto scm = random_scm(g, 3);
    scm.cpts = {{0.5, 0.5}, {0.5, 0.5}};
    auto joint = exact_joint(scm);
    for (double p : joint.p) CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("chain matches a hand computation") {
    auto g = MixedGraph::from_names({"X", "Y"}, {{"X", "Y"}}, {});
    auto scm = random_scm(g, 3);
    scm.cpts = {{0.9, 0.1}, {0.8, 0.2, 0.3, 0.7}};
    auto joint = exact_joint(scm);
    CHECK(joint.probability({{"X", 0}, {"Y", 0}}) == doctest::Approx(0.72));
    CHECK(joint.probability({{"X", 0}, {"Y", 1}}) == doctest::Approx(0.18));
    CHECK(joint.probability({{"X", 1}, {"Y", 0}}) == doctest::Approx(0.03));
    CHECK(joint.probability({{"X", 1}, {"Y", 1}}) == doctest::Approx(0.07));
}

TEST_CASE("tables sum to one and are positive") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        auto g = cdmg::testing::random_admg(rng, 5, 0.4, 0.3);
        auto scm = random_scm(g, i, 3);
        auto joint = exact_joint(scm);
        CHECK(joint.total() == doctest::Approx(1.0).epsilon(1e-12));
        for (double p : joint.p) CHECK(p > 0);
    }
}

TEST_CASE("interventions") {
    auto g = MixedGraph::from_names({"X", "Y", "Z"}, {{"X", "Y"}}, {{"X", "Y"}});
    auto scm = random_scm(g, 5);
    auto joint = exact_joint(scm);
    auto none = interventional_truth(scm, {}, {g.index("Y")});
    CHECK(none.p[0] == doctest::Approx(joint.probability({{"Y", 0}})).epsilon(1e-12));
    // Z is not a descendant of X.
    auto z = interventional_truth(scm, {{g.index("X"), 1}}, {g.index("Z")});
    CHECK(z.p[0] == doctest::Approx(joint.probability({{"Z", 0}})).epsilon(1e-12));
}

TEST_CASE("state space guard") {
    std::vector<std::string> names;
    for (int i = 0; i < 30; ++i) names.push_back("V" + std::to_string(i));
    auto scm = random_scm(MixedGraph::from_names(names, {}, {}), 1);
    CHECK_THROWS_AS(exact_joint(scm), Error);
}

}
