#include "support.hpp"

#include "cdmg/oracle.hpp"
#include "cdmg/separation.hpp"

#include <doctest.h>

using namespace cdmg;
using cdmg::testing::fixture;

TEST_SUITE("oracle") {

TEST_CASE("Figure 5 has exactly two compatible ADMGs") {
    auto doc = fixture("fig5");
    auto all = enumerate_compatible_admgs(doc.graph, doc.clusters, 1000);
    REQUIRE(all.size() == 2);
    for (const auto& w : all) {
        CHECK(compatible(w.admg, w.spec, doc.graph));
        const auto& a = w.admg;
        CHECK(a.has_directed(a.index("X1"), a.index("Y1")));
        // Y1 feeds one W, the other W feeds X1.
        CHECK(a.directed_edges().size() == 3);
    }
    CHECK(all[0].admg != all[1].admg);
}

TEST_CASE("single isolated cluster") {
    auto g = MixedGraph::from_names({"C"}, {}, {});
    auto all = enumerate_compatible_admgs(g, ClusterSpec::uniform(g, 1), 10);
    REQUIRE(all.size() == 1);
    CHECK(all[0].admg.size() == 1);
}

TEST_CASE("two-cycle enumeration matches a hand count") {
    // Sizes (2,2), edges CX->CY, CY->CX plus the self-loops and dashed
    // self-loops of Figure 3a. Every ADMG must carry both directions.
    auto g = fixture("fig3a").graph;
    auto all = enumerate_compatible_admgs(g, ClusterSpec::uniform(g, 2), 100000);
    CHECK(!all.empty());
    for (const auto& w : all) {
        bool xy = false, yx = false;
        for (const auto& e : w.admg.directed_edges()) {
            xy |= w.admg.name(e.tail)[1] == 'X' && w.admg.name(e.head)[1] == 'Y';
            yx |= w.admg.name(e.tail)[1] == 'Y' && w.admg.name(e.head)[1] == 'X';
        }
        CHECK((xy && yx));
        CHECK(is_acyclic(w.admg));
    }
    // Brute force over all micro edge sets of the 4 vertices.
    auto spec = concrete_spec(g, ClusterSpec::uniform(g, 2));
    const std::vector<std::string> names{"CX_1", "CX_2", "CY_1", "CY_2"};
    std::vector<std::pair<int, int>> dpairs, bpairs;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) dpairs.emplace_back(i, j);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) bpairs.emplace_back(i, j);
    std::size_t count = 0;
    for (std::uint32_t dm = 0; dm < (1u << dpairs.size()); ++dm)
        for (std::uint32_t bm = 0; bm < (1u << bpairs.size()); ++bm) {
            std::vector<std::pair<std::string, std::string>> d, b;
            for (std::size_t k = 0; k < dpairs.size(); ++k)
                if (dm >> k & 1) d.emplace_back(names[dpairs[k].first], names[dpairs[k].second]);
            for (std::size_t k = 0; k < bpairs.size(); ++k)
                if (bm >> k & 1) b.emplace_back(names[bpairs[k].first], names[bpairs[k].second]);
            auto a = MixedGraph::from_names(names, d, b);
            if (is_acyclic(a) && compatible(a, spec, g)) ++count;
        }
    CHECK(all.size() == count);
}

TEST_CASE("two-copies witness on Figure 2a") {
    auto g = fixture("fig2a").graph;
    auto path = find_active_path(g, {g.index("CW")}, {g.index("CY")}, {});
    REQUIRE(path);
    auto wit = theorem2_witness(g, *path, {}, descent_order(g, {}));
    CHECK(wit.admg.size() == 6);
    CHECK(compatible(wit.admg, wit.spec, g));
    REQUIRE(wit.active_path);
    CHECK(format_walk(wit.admg, *wit.active_path) == "CW_1 -> CX_1 -> CY_1");
    CHECK_FALSE(is_blocked(wit.admg, *wit.active_path, {}));
}

TEST_CASE("witness for a single edge") {
    auto g = MixedGraph::from_names({"A", "B"}, {{"A", "B"}}, {});
    auto path = find_active_path(g, {0}, {1}, {});
    auto wit = theorem2_witness(g, *path, {}, descent_order(g, {}));
    REQUIRE(wit.active_path);
    CHECK(wit.active_path->length() == 1);
    CHECK(wit.admg.has_directed(wit.admg.index("A_1"), wit.admg.index("B_1")));
}

TEST_CASE("witness through a collider with a conditioned descendant") {
    auto g = MixedGraph::from_names({"A", "B", "C", "D"}, {{"A", "C"}, {"B", "C"}, {"C", "D"}, {"D", "D"}}, {});
    const VertexSet w{g.index("D")};
    auto path = find_active_path(g, {g.index("A")}, {g.index("B")}, w);
    REQUIRE(path);
    CHECK(format_walk(g, *path) == "A -> C <- B");
    auto wit = theorem2_witness(g, *path, w, descent_order(g, w));
    CHECK(compatible(wit.admg, wit.spec, g));
    CHECK_FALSE(is_blocked(wit.admg, *wit.active_path, lift(g, w, wit.admg, wit.spec)));
}

TEST_CASE("witnesses on Figure 2c") {
    auto g = fixture("fig2c").graph;
    for (Vertex a = 0; a < g.size(); ++a)
        for (Vertex b = a + 1; b < g.size(); ++b)
            for (Vertex c = 0; c < g.size(); ++c) {
                if (c == a || c == b) continue;
                const VertexSet w{c};
                auto path = find_active_path(g, {a}, {b}, w);
                if (!path) continue;
                auto wit = theorem2_witness(g, *path, w, descent_order(g, w));
                CHECK(compatible(wit.admg, wit.spec, g));
                CHECK_FALSE(is_blocked(wit.admg, *wit.active_path, lift(g, w, wit.admg, wit.spec)));
            }
}

TEST_CASE("sampling yields compatible ADMGs") {
    auto g = fixture("fig2d").graph;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 5; ++i) {
        auto w = sample_compatible_admg(g, ClusterSpec::uniform(g, 2), rng);
        REQUIRE(w);
        CHECK(compatible(w->admg, w->spec, g));
    }
}

TEST_CASE("enumeration guards") {
    auto g = fixture("fig2d").graph;
    CHECK_THROWS_AS(enumerate_compatible_admgs(g, ClusterSpec::uniform(g, 2), 10), Error);
}

}
