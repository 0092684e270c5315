#include "cdmg/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace cdmg {

namespace {

std::string describe(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
    }
    return out;
}

} // namespace

SyntaxError::SyntaxError(int line, int column, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorCode::Syntax, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": expected " +
                                   describe(expected) + ", found " + found),
      line_(line), column_(column), expected_(std::move(expected)) {}

namespace {

struct Token {
    enum Kind { Word, Arrow, BiArrow, Equals, LParen, RParen, Comma, End } kind = End;
    std::string text;
    int column = 0;
};

std::string found(const Token& t) { return t.kind == Token::End ? "end of line" : "'" + t.text + "'"; }

std::vector<Token> lex(const std::string& line, int lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; };
    while (i < line.size()) {
        const char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.column = static_cast<int>(i) + 1;
        if (line.compare(i, 3, "<->") == 0) {
            t.kind = Token::BiArrow;
            t.text = "<->";
            i += 3;
        } else if (line.compare(i, 2, "->") == 0) {
            t.kind = Token::Arrow;
            t.text = "->";
            i += 2;
        } else if (c == '=' || c == '(' || c == ')' || c == ',') {
            t.kind = c == '=' ? Token::Equals : c == '(' ? Token::LParen : c == ')' ? Token::RParen : Token::Comma;
            t.text = std::string(1, c);
            ++i;
        } else if (word(c)) {
            const std::size_t start = i;
            while (i < line.size() && word(line[i])) ++i;
            t.kind = Token::Word;
            t.text = line.substr(start, i - start);
        } else {
            throw SyntaxError(lineno, static_cast<int>(i) + 1, {"name", "'->'", "'<->'", "'#'"},
                              "'" + std::string(1, c) + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.column = static_cast<int>(line.size()) + 1;
    out.push_back(end);
    return out;
}

class LineParser {
public:
    LineParser(std::vector<Token> tokens, int line) : toks_(std::move(tokens)), line_(line) {}

    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Token::End; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw SyntaxError(line_, peek().column, std::move(expected), found(peek()));
    }
    Token take(Token::Kind kind, const std::string& what) {
        if (peek().kind != kind) fail({what});
        return toks_[pos_++];
    }
    std::string name() {
        const Token t = take(Token::Word, "name");
        if (!is_valid_name(t.text)) {
            --pos_;
            fail({"name starting with a letter or '_'"});
        }
        return t.text;
    }
    bool accept_word(const std::string& w) {
        if (peek().kind == Token::Word && peek().text == w) {
            ++pos_;
            return true;
        }
        return false;
    }
    void finish() {
        if (!at_end()) fail({"end of line"});
    }
    std::vector<std::string> name_list() {
        take(Token::LParen, "'('");
        std::vector<std::string> out;
        if (peek().kind != Token::RParen) {
            out.push_back(name());
            while (peek().kind == Token::Comma) {
                ++pos_;
                out.push_back(name());
            }
        }
        take(Token::RParen, "')' or ','");
        return out;
    }
    int line() const { return line_; }
    std::size_t pos_ = 0;

private:
    std::vector<Token> toks_;
    int line_;
};

struct PendingEdge {
    std::string a, b;
    bool directed;
    int line;
};

struct PendingCluster {
    std::string name;
    ClusterInfo info;
    int line;
};

[[noreturn]] void semantic(ErrorCode code, int line, const std::string& msg) {
    throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

} // namespace

GraphDocument parse_document(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::optional<GraphKind> kind;
    std::vector<std::pair<std::string, int>> nodes;
    std::vector<PendingCluster> clusters;
    std::vector<PendingEdge> edges;
    std::vector<std::pair<Query, int>> queries;

    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        LineParser p(lex(raw, lineno), lineno);
        if (p.at_end()) continue;
        if (!kind) {
            if (!p.accept_word("graph")) p.fail({"'graph'"});
            if (p.accept_word("admg")) kind = GraphKind::Admg;
            else if (p.accept_word("cdmg")) kind = GraphKind::Cdmg;
            else p.fail({"'admg'", "'cdmg'"});
            p.finish();
            continue;
        }
        if (p.accept_word("graph")) semantic(ErrorCode::Syntax, lineno, "graph kind declared twice");
        // Keywords are only keywords when followed by a name, so a vertex
        // called `node` can still appear in an edge line.
        if (p.peek().kind == Token::Word && p.peek().text == "node") {
            LineParser probe = p;
            probe.pos_++;
            if (probe.peek().kind == Token::Word) {
                p.pos_++;
                const std::string n = p.name();
                p.finish();
                nodes.emplace_back(n, lineno);
                continue;
            }
        }
        if (p.peek().kind == Token::Word && p.peek().text == "cluster") {
            LineParser probe = p;
            probe.pos_++;
            if (probe.peek().kind == Token::Word) {
                p.pos_++;
                PendingCluster c;
                c.name = p.name();
                c.line = lineno;
                while (!p.at_end()) {
                    if (p.accept_word("size")) {
                        p.take(Token::Equals, "'='");
                        const Token t = p.take(Token::Word, "positive integer");
                        const bool digits = std::all_of(t.text.begin(), t.text.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
                        if (!digits || t.text.size() > 6 || std::stoi(t.text) <= 0) {
                            p.pos_--;
                            p.fail({"positive integer"});
                        }
                        if (c.info.size) semantic(ErrorCode::Syntax, lineno, "size given twice");
                        c.info.size = std::stoi(t.text);
                    } else if (p.accept_word("members")) {
                        p.take(Token::Equals, "'='");
                        if (c.info.members) semantic(ErrorCode::Syntax, lineno, "members given twice");
                        std::vector<std::string> ms;
                        while (!p.at_end()) ms.push_back(p.name());
                        if (ms.empty()) p.fail({"member name"});
                        c.info.members = ms;
                    } else {
                        p.fail({"'size='", "'members='", "end of line"});
                    }
                }
                clusters.push_back(std::move(c));
                continue;
            }
        }
        if (p.peek().kind == Token::Word && p.peek().text == "query") {
            LineParser probe = p;
            probe.pos_++;
            if (probe.peek().kind == Token::Word && probe.peek().text == "effect") {
                p.pos_ += 2;
                Query q;
                bool seen_do = false, seen_on = false, seen_given = false;
                while (!p.at_end()) {
                    if (p.accept_word("do")) {
                        if (seen_do) semantic(ErrorCode::Syntax, lineno, "do= given twice");
                        p.take(Token::Equals, "'='");
                        q.do_vars = p.name_list();
                        seen_do = true;
                    } else if (p.accept_word("on")) {
                        if (seen_on) semantic(ErrorCode::Syntax, lineno, "on= given twice");
                        p.take(Token::Equals, "'='");
                        q.on = p.name_list();
                        seen_on = true;
                    } else if (p.accept_word("given")) {
                        if (seen_given) semantic(ErrorCode::Syntax, lineno, "given= given twice");
                        p.take(Token::Equals, "'='");
                        q.given = p.name_list();
                        seen_given = true;
                    } else {
                        p.fail({"'do='", "'on='", "'given='", "end of line"});
                    }
                }
                if (!seen_do || !seen_on) p.fail({seen_do ? "'on='" : "'do='"});
                queries.emplace_back(std::move(q), lineno);
                continue;
            }
        }
        PendingEdge e;
        e.line = lineno;
        e.a = p.name();
        if (p.peek().kind == Token::Arrow) e.directed = true;
        else if (p.peek().kind == Token::BiArrow) e.directed = false;
        else p.fail({"'->'", "'<->'"});
        p.pos_++;
        e.b = p.name();
        p.finish();
        edges.push_back(std::move(e));
    }
    if (!kind) throw SyntaxError(lineno + 1, 1, {"'graph'"}, "end of input");

    GraphDocument doc;
    doc.kind = *kind;
    GraphBuilder builder;
    std::map<std::string, int> declared;
    if (*kind == GraphKind::Cdmg) {
        if (!nodes.empty()) semantic(ErrorCode::Syntax, nodes.front().second, "'node' lines are not allowed in a cdmg; use 'cluster'");
        for (const auto& c : clusters) {
            if (declared.count(c.name)) semantic(ErrorCode::DuplicateVertex, c.line, "duplicate cluster '" + c.name + "'");
            declared[c.name] = c.line;
            builder.add_vertex(c.name);
        }
    } else {
        for (const auto& [n, line] : nodes) {
            if (declared.count(n)) semantic(ErrorCode::DuplicateVertex, line, "duplicate node '" + n + "'");
            declared[n] = line;
            builder.add_vertex(n);
        }
    }
    std::set<std::tuple<bool, std::string, std::string>> seen_edges;
    for (const auto& e : edges) {
        for (const auto* end : {&e.a, &e.b})
            if (!declared.count(*end)) semantic(ErrorCode::UnknownVertex, e.line, "edge endpoint '" + *end + "' is not declared");
        if (*kind == GraphKind::Admg && e.a == e.b) semantic(ErrorCode::SelfLoopFound, e.line, "self-loop on '" + e.a + "' in an admg");
        auto key = e.directed ? std::tuple(true, e.a, e.b) : std::tuple(false, std::min(e.a, e.b), std::max(e.a, e.b));
        if (!seen_edges.insert(key).second) semantic(ErrorCode::DuplicateEdge, e.line, "duplicate edge");
        if (e.directed) builder.add_directed(e.a, e.b);
        else builder.add_bidirected(e.a, e.b);
    }
    doc.graph = builder.build();
    if (*kind == GraphKind::Admg) {
        if (auto cycle = find_directed_cycle(doc.graph)) {
            std::string msg;
            for (Vertex v : *cycle) msg += doc.graph.name(v) + " -> ";
            msg += doc.graph.name(cycle->front());
            throw Error(ErrorCode::CycleFound, msg);
        }
    }
    std::set<std::string> cluster_names;
    for (const auto& c : clusters) {
        if (*kind == GraphKind::Admg) {
            if (!cluster_names.insert(c.name).second) semantic(ErrorCode::DuplicateVertex, c.line, "duplicate cluster '" + c.name + "'");
            if (c.info.members)
                for (const auto& m : *c.info.members)
                    if (!declared.count(m)) semantic(ErrorCode::UnknownVertex, c.line, "member '" + m + "' is not a declared node");
        }
        try {
            doc.clusters.set(c.name, c.info);
        } catch (const Error& err) {
            semantic(err.code(), c.line, err.what());
        }
    }
    for (auto& [q, line] : queries) {
        std::set<std::string> all;
        for (const auto* list : {&q.do_vars, &q.on, &q.given}) {
            for (const auto& n : *list) {
                if (!declared.count(n)) semantic(ErrorCode::UnknownVertex, line, "query mentions undeclared '" + n + "'");
                if (!all.insert(n).second) semantic(ErrorCode::SetsNotDisjoint, line, "query sets overlap at '" + n + "'");
            }
        }
        if (q.on.empty()) semantic(ErrorCode::EmptyTarget, line, "query needs a nonempty on=()");
        for (auto* list : {&q.do_vars, &q.on, &q.given}) std::sort(list->begin(), list->end());
        doc.queries.push_back(std::move(q));
    }
    return doc;
}

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

} // namespace

std::string serialize_document(const GraphDocument& doc) {
    std::ostringstream os;
    const MixedGraph& g = doc.graph;
    os << "graph " << (doc.kind == GraphKind::Admg ? "admg" : "cdmg") << "\n";
    if (doc.kind == GraphKind::Admg)
        for (const auto& n : g.names()) os << "node " << n << "\n";
    std::set<std::string> names(g.names().begin(), g.names().end());
    std::set<std::string> listed;
    for (const auto& [name, _] : doc.clusters.clusters()) listed.insert(name);
    if (doc.kind == GraphKind::Cdmg) listed.insert(names.begin(), names.end());
    for (const auto& name : listed) {
        os << "cluster " << name;
        if (const auto* info = doc.clusters.find(name)) {
            if (info->size) os << " size=" << *info->size;
            if (info->members) os << " members= " << join(*info->members, " ");
        }
        os << "\n";
    }
    for (const auto& e : g.directed_edges()) os << g.name(e.tail) << " -> " << g.name(e.head) << "\n";
    for (const auto& e : g.bidirected_edges()) os << g.name(e.a) << " <-> " << g.name(e.b) << "\n";
    for (const auto& q : doc.queries) {
        os << "query effect do=(" << join(q.do_vars, ",") << ") on=(" << join(q.on, ",") << ")";
        if (!q.given.empty()) os << " given=(" << join(q.given, ",") << ")";
        os << "\n";
    }
    return os.str();
}

std::string to_dot(const GraphDocument& doc) {
    std::ostringstream os;
    const MixedGraph& g = doc.graph;
    os << "digraph G {\n";
    for (const auto& n : g.names()) os << "  \"" << n << "\";\n";
    for (const auto& e : g.directed_edges()) os << "  \"" << g.name(e.tail) << "\" -> \"" << g.name(e.head) << "\";\n";
    for (const auto& e : g.bidirected_edges())
        os << "  \"" << g.name(e.a) << "\" -> \"" << g.name(e.b) << "\" [dir=both, style=dashed];\n";
    os << "}\n";
    return os.str();
}

GraphDocument load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str());
}

} // namespace cdmg
