#include "support.hpp"

#include "cdmg/dsl.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace cdmg;
using cdmg::testing::fixture;
using cdmg::testing::fixture_path;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_comments(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line))
        if (!line.starts_with("#")) out << line << "\n";
    return out.str();
}

ErrorCode code_of(const std::string& text) {
    try {
        parse_document(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("parsed: " << text);
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_SUITE("dsl") {

TEST_CASE("Figure 2a document") {
    auto doc = fixture("fig2a");
    CHECK(doc.kind == GraphKind::Cdmg);
    CHECK(doc.graph.size() == 3);
    CHECK(doc.graph.has_directed_self_loop(doc.graph.index("CX")));
    REQUIRE(doc.queries.size() == 1);
    CHECK(doc.queries[0] == Query{{"CX"}, {"CY"}, {}});
    CHECK(parse_document(serialize_document(doc)) == doc);
}

TEST_CASE("golden files are in canonical form") {
    for (const char* name : {"fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c",
                             "fig3d", "fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f", "fig4g", "fig4h", "fig5"}) {
        CAPTURE(name);
        CHECK(serialize_document(fixture(name)) == without_comments(slurp(fixture_path(name))));
    }
}

TEST_CASE("semantic errors") {
    CHECK(code_of("graph admg\nnode A\nA -> A\n") == ErrorCode::SelfLoopFound);
    CHECK(code_of("graph admg\nnode A\nnode A\n") == ErrorCode::DuplicateVertex);
    CHECK(code_of("graph admg\nnode A\nA -> B\n") == ErrorCode::UnknownVertex);
    CHECK(code_of("graph admg\nnode A\nnode B\nA -> B\nB -> A\n") == ErrorCode::CycleFound);
    CHECK(code_of("graph cdmg\ncluster C size=2 members= A\n") == ErrorCode::NotAPartition);
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_document("graph admg\nnode A\nA => A\n");
        FAIL("parsed");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() >= 2);
        CHECK_FALSE(e.expected().empty());
    }
    CHECK(code_of("") == ErrorCode::Syntax);
    CHECK(code_of("graph dag\n") == ErrorCode::Syntax);
    CHECK(code_of("graph admg\nquery effect do=(A on=(B)\n") == ErrorCode::Syntax);
}

TEST_CASE("Figure 5 sizes") {
    auto doc = fixture("fig5");
    CHECK(doc.clusters.known_size("CX") == 1);
    CHECK_FALSE(doc.clusters.satisfies_assumption_1());
}

TEST_CASE("empty graph") {
    GraphDocument d;
    CHECK(serialize_document(d) == "graph admg\n");
    CHECK(parse_document("graph admg\n") == d);
}

TEST_CASE("dot export") {
    auto dot = to_dot(fixture("fig3b"));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("\"CX\" -> \"CY\"") != std::string::npos);
    CHECK(dot.find("dashed") != std::string::npos);
}

}
