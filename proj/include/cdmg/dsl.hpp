#ifndef CDMG_DSL_HPP
#define CDMG_DSL_HPP

#include "cdmg/graph.hpp"

#include <string>
#include <vector>

namespace cdmg {

struct Query {
    std::vector<std::string> do_vars;
    std::vector<std::string> on;
    std::vector<std::string> given;
    friend bool operator==(const Query&, const Query&) = default;
};

enum class GraphKind { Admg, Cdmg };

/// Parsed graph file. For `cdmg` documents the graph's vertices are the
/// clusters; for `admg` documents `clusters` describes a partition of the
/// nodes (possibly empty).
struct GraphDocument {
    GraphKind kind = GraphKind::Admg;
    MixedGraph graph;
    ClusterSpec clusters;
    std::vector<Query> queries;
    friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, std::vector<std::string> expected, const std::string& found);
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

/// Syntax problems throw SyntaxError; semantic ones throw Error with the
/// graph-core code (DuplicateVertex, UnknownVertex, SelfLoopFound, ...)
/// and the line number in the message.
GraphDocument parse_document(const std::string& text);
std::string serialize_document(const GraphDocument& doc);
std::string to_dot(const GraphDocument& doc);

GraphDocument load_document(const std::string& path);

} // namespace cdmg

#endif
