#include "support.hpp"
#include "validation.hpp"

#include "cdmg/estimand.hpp"
#include "cdmg/scm.hpp"

#include <doctest.h>

using namespace cdmg;

namespace {

Var v(const char* c, int primes = 0) { return Var{c, primes}; }

ExprPtr front_door() {
    return make_sum({v("CW")}, make_product({make_prob({v("CW")}, {v("CX")}),
                                             make_sum({v("CX", 1)}, make_product({make_prob({v("CY")}, {v("CW"), v("CX", 1)}),
                                                                                  make_prob({v("CX", 1)})}))}));
}

} // namespace

TEST_SUITE("estimand") {

TEST_CASE("ascii rendering") {
    CHECK(to_ascii(make_prob({v("CY")}, {v("CX")})) == "P(cy|cx)");
    CHECK(to_ascii(make_prob({v("CY")}, {v("CW")}, {v("CX")})) == "P(cy|do(cx),cw)");
    CHECK(to_ascii(front_door()) == "sum_{cw} P(cw|cx) * sum_{cx'} P(cy|cw,cx') * P(cx')");
}

TEST_CASE("parse inverts rendering") {
    auto resolve = resolver_for({"CW", "CX", "CY"});
    auto e = front_door();
    CHECK(structurally_equal(parse_estimand(to_ascii(e), resolve), e));
    auto f = make_fraction(make_prob({v("CY"), v("CW")}, {v("CX")}), make_prob({v("CW")}, {v("CX")}));
    CHECK(structurally_equal(parse_estimand(to_ascii(f), resolve), f));
    CHECK_THROWS_AS(parse_estimand("P(cy|", resolve), Error);
    CHECK_THROWS_AS(parse_estimand("P(cq)", resolve), Error);
}

TEST_CASE("json round trip") {
    auto e = front_door();
    CHECK(structurally_equal(from_json(to_json(e)), e));
    CHECK(to_json(e)["kind"] == "sum");
}

TEST_CASE("canonical form ignores factor order and bound names") {
    auto a = make_product({make_prob({v("CY")}, {v("CX")}), make_prob({v("CW")})});
    auto b = make_product({make_prob({v("CW")}), make_prob({v("CY")}, {v("CX")})});
    CHECK(canonical_string(a) == canonical_string(b));
    auto s1 = make_sum({v("CW")}, make_prob({v("CY")}, {v("CW")}));
    auto s2 = make_sum({v("CW", 2)}, make_prob({v("CY")}, {v("CW", 2)}));
    CHECK(canonical_string(s1) == canonical_string(s2));
}

TEST_CASE("free variables and primes") {
    auto e = front_door();
    auto free = free_variables(e);
    CHECK(free == std::vector<Var>{v("CX"), v("CY")});
    auto raw = make_sum({v("CX")}, make_prob({v("CY")}, {v("CX")}));
    auto primed = assign_primes(raw, {"CX", "CY"});
    CHECK(to_ascii(primed) == "sum_{cx'} P(cy|cx')");
    auto nested = make_sum({v("CX", 3)}, make_prob({v("CY")}, {v("CX"), v("CX", 3)}));
    CHECK(to_ascii(assign_primes(nested, {"CX", "CY"})) == "sum_{cx'} P(cy|cx,cx')");
}

TEST_CASE("conditional of independent variables is the marginal") {
    auto g = MixedGraph::from_names({"CX", "CY"}, {}, {});
    auto joint = exact_joint(random_scm(g, 9));
    auto e = make_prob({v("CY")}, {v("CX")});
    for (int x = 0; x < 2; ++x)
        CHECK(evaluate_estimand(e, joint, {{v("CX"), x}, {v("CY"), 1}}) ==
              doctest::Approx(joint.probability({{"CY", 1}})).epsilon(1e-12));
}

TEST_CASE("front-door expression on a front-door model") {
    auto g = MixedGraph::from_names({"CW", "CX", "CY"}, {{"CX", "CW"}, {"CW", "CY"}}, {{"CX", "CY"}});
    auto spec = ClusterSpec::singletons(g);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto scm = random_scm(g, seed);
        CHECK(cdmg::testing::estimand_error(g, spec, {g.index("CX")}, {g.index("CY")}, {}, front_door(), scm) < 1e-9);
    }
}

TEST_CASE("interventional distribution normalizes") {
    auto g = MixedGraph::from_names({"CW", "CX", "CY"}, {{"CX", "CW"}, {"CW", "CY"}}, {{"CX", "CY"}});
    auto joint = exact_joint(random_scm(g, 4));
    for (int x = 0; x < 2; ++x) {
        double total = 0;
        for (int y = 0; y < 2; ++y) total += evaluate_estimand(front_door(), joint, {{v("CX"), x}, {v("CY"), y}});
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("evaluation errors") {
    auto g = MixedGraph::from_names({"CX", "CY"}, {}, {});
    auto joint = exact_joint(random_scm(g, 9));
    CHECK_THROWS_AS(evaluate_estimand(make_prob({v("CY")}, {v("CX")}), joint, {{v("CY"), 0}}), Error);
    CHECK_THROWS_AS(evaluate_estimand(make_prob({v("CY")}, {}, {v("CX")}), joint, {{v("CX"), 0}, {v("CY"), 0}}), Error);
}

}
