#include "support.hpp"

#include "cdmg/probe.hpp"

#include <doctest.h>

using namespace cdmg;
using cdmg::testing::fixture;

namespace {

ProbeResult probe(const char* name, std::uint64_t seed = 1) {
    auto g = fixture(name).graph;
    return nonidentifiability_probe(g, ClusterSpec::uniform(g, 2), {g.index("CX")}, {g.index("CY")}, 20, seed);
}

} // namespace

TEST_SUITE("probe") {

TEST_CASE("bow pattern") {
    auto r = probe("fig3b");
    REQUIRE(r.pair);
    CHECK(r.pair->interventional_gap > 0.01);
    CHECK(r.pair->observational_gap < 1e-12);
    CHECK(r.pair->strategy == "bow");
}

TEST_CASE("two-cycle") {
    auto r = probe("fig3a");
    REQUIRE(r.pair);
    CHECK(r.pair->interventional_gap > 0.01);
    CHECK(r.pair->strategy == "reversal");
}

TEST_CASE("identifiable effect admits no pair") {
    auto r = probe("fig2a");
    CHECK_FALSE(r.pair);
    CHECK(r.exhausted());
    CHECK(r.admgs_examined > 0);
}

TEST_CASE("reported gap is reproducible") {
    auto g = fixture("fig3b").graph;
    auto r = probe("fig3b", 5);
    REQUIRE(r.pair);
    auto concrete = concrete_spec(g, ClusterSpec::uniform(g, 2));
    double gap = interventional_gap(g, concrete, {g.index("CX")}, {g.index("CY")}, r.pair->first.scm, r.pair->second.scm);
    CHECK(gap == doctest::Approx(r.pair->interventional_gap).epsilon(1e-12));
    auto again = probe("fig3b", 5);
    CHECK(again.pair->interventional_gap == r.pair->interventional_gap);
}

}
