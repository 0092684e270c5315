// Command-line front end over graph files.
#include "cdmg/docalc.hpp"
#include "cdmg/dsl.hpp"
#include "cdmg/hedge.hpp"
#include "cdmg/identify.hpp"
#include "cdmg/oracle.hpp"
#include "cdmg/probe.hpp"
#include "cdmg/separation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

using namespace cdmg;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kNonIdentifiable = 3;
constexpr int kUnknown = 4;
constexpr int kTooLarge = 5;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string locate(const std::string& file) {
    if (std::filesystem::exists(file)) return file;
    if (const char* dir = std::getenv("CDMG_FIXTURES")) {
        auto p = std::filesystem::path(dir) / file;
        if (std::filesystem::exists(p)) return p.string();
    }
    throw UsageError("cannot find '" + file + "'");
}

std::vector<std::string> split_names(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

VertexSet resolve(const MixedGraph& g, const std::vector<std::string>& raw) {
    VertexSet s;
    for (const auto& n : split_names(raw)) {
        auto v = g.find(n);
        if (!v) throw UsageError("unknown vertex '" + n + "'");
        s.insert(*v);
    }
    return s;
}

std::string names(const MixedGraph& g, const VertexSet& s) {
    std::string out;
    for (Vertex v : s) out += (out.empty() ? "" : ", ") + g.name(v);
    return out.empty() ? "(none)" : out;
}

json names_json(const MixedGraph& g, const VertexSet& s) {
    json arr = json::array();
    for (Vertex v : s) arr.push_back(g.name(v));
    return arr;
}

json walk_json(const MixedGraph& g, const Walk& w) {
    json steps = json::array();
    for (Vertex v : w.vertices) steps.push_back(g.name(v));
    json kinds = json::array();
    for (EdgeKind k : w.edges) kinds.push_back(k == EdgeKind::Forward ? "->" : k == EdgeKind::Backward ? "<-" : "<->");
    return {{"vertices", steps}, {"edges", kinds}, {"text", format_walk(g, w)}};
}

std::string edge_text(const MixedGraph& g, const BidirectedEdge& e) { return g.name(e.a) + " <-> " + g.name(e.b); }

std::string forest_text(const MixedGraph& g, const CForest& f) {
    std::string edges;
    for (const auto& e : f.directed) edges += (edges.empty() ? "" : ", ") + g.name(e.tail) + " -> " + g.name(e.head);
    for (const auto& e : f.bidirected) edges += (edges.empty() ? "" : ", ") + edge_text(g, e);
    return "vertices " + names(g, f.vertices) + "; edges " + (edges.empty() ? "(none)" : edges);
}

json forest_json(const MixedGraph& g, const CForest& f) {
    json d = json::array(), b = json::array();
    for (const auto& e : f.directed) d.push_back({g.name(e.tail), g.name(e.head)});
    for (const auto& e : f.bidirected) b.push_back({g.name(e.a), g.name(e.b)});
    return {{"vertices", names_json(g, f.vertices)}, {"directed", d}, {"bidirected", b}};
}

json certificate_json(const MixedGraph& host, const HedgeCertificate& c) {
    json used = json::array();
    for (const auto& e : c.projection_edges_used) used.push_back({host.name(e.a), host.name(e.b)});
    std::string why;
    const bool ok = verify_hedge(host, c, &why);
    return {{"roots", names_json(host, c.roots)}, {"f", forest_json(host, c.f)}, {"f_prime", forest_json(host, c.f_prime)},
            {"x", names_json(host, c.x)}, {"y", names_json(host, c.y)}, {"projection_edges_used", used},
            {"verified", ok}};
}

void print_certificate(const MixedGraph& host, const HedgeCertificate& c) {
    std::cout << "roots: " << names(host, c.roots) << "\n";
    std::cout << "F: " << forest_text(host, c.f) << "\n";
    std::cout << "F': " << forest_text(host, c.f_prime) << "\n";
    std::string used;
    for (const auto& e : c.projection_edges_used) used += (used.empty() ? "" : ", ") + edge_text(host, e);
    std::cout << "projection edges used: " << (used.empty() ? "(none)" : used) << "\n";
    std::string why;
    std::cout << "certificate verified: " << (verify_hedge(host, c, &why) ? "true" : "false (" + why + ")") << "\n";
}

struct Common {
    bool as_json = false;
    int threads = 0;
    bool strict = false;
};

struct QueryArgs {
    std::vector<std::string> do_vars, on, given;
};

/// --do/--on, or the first query of the file.
void fill_query(const GraphDocument& doc, QueryArgs& q) {
    if (!q.do_vars.empty() || !q.on.empty()) {
        if (q.on.empty()) throw UsageError("--on is required");
        return;
    }
    if (doc.queries.empty()) throw UsageError("no --do/--on given and the file has no query");
    q.do_vars = doc.queries.front().do_vars;
    q.on = doc.queries.front().on;
    if (q.given.empty()) q.given = doc.queries.front().given;
}

ClusterSpec spec_of(const GraphDocument& doc) {
    if (doc.kind == GraphKind::Cdmg) return doc.clusters;
    return ClusterSpec{};
}

const GraphDocument& require_cdmg(const GraphDocument& doc) {
    if (doc.kind != GraphKind::Cdmg) throw UsageError("this command needs a cdmg file");
    return doc;
}

ClusterSpec sized_spec(const GraphDocument& doc, int default_size) {
    ClusterSpec spec;
    for (const auto& n : doc.graph.names()) {
        const auto* info = doc.clusters.find(n);
        if (info && (info->members || info->size)) spec.set(n, *info);
        else if (default_size > 0) spec.set(n, ClusterInfo{std::nullopt, default_size});
        else throw Error(ErrorCode::UnknownSizes, "size of cluster '" + n + "' is unknown; pass --size");
    }
    return spec;
}

std::string admg_text(const CompatibleAdmgWitness& w) {
    GraphDocument d;
    d.kind = GraphKind::Admg;
    d.graph = w.admg;
    d.clusters = w.spec;
    return serialize_document(d);
}

// ---------------------------------------------------------------------------

int cmd_dsep(const std::string& file, const QueryArgs& q, const std::vector<std::string>& xs, const Common& c) {
    const GraphDocument doc = load_document(locate(file));
    const MixedGraph& g = doc.graph;
    const VertexSet x = resolve(g, xs), y = resolve(g, q.on), z = resolve(g, q.given);
    if (x.empty() || y.empty()) throw UsageError("--x and --y are required");
    if (x.intersects(y) || x.intersects(z) || y.intersects(z)) throw UsageError("--x, --y and --given must be disjoint");
    const auto path = find_active_path(g, x, y, z);
    if (c.as_json) {
        json out = {{"d_separated", !path.has_value()}};
        if (path) out["active_path"] = walk_json(g, *path);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "d-separated: " << (path ? "false" : "true") << "\n";
        if (path) std::cout << "active path: " << format_walk(g, *path) << "\n";
    }
    return kOk;
}

int cmd_identify(const std::string& file, QueryArgs q, std::size_t budget_nodes, int depth, const Common& c) {
    const GraphDocument doc = load_document(locate(file));
    fill_query(doc, q);
    const MixedGraph& g = doc.graph;
    Budget budget;
    budget.max_nodes = budget_nodes;
    budget.max_depth = depth;
    const VertexSet x = resolve(g, q.do_vars), y = resolve(g, q.on), w = resolve(g, q.given);
    if (x.intersects(y) || x.intersects(w) || y.intersects(w)) throw UsageError("--do, --on and --given must be disjoint");
    const Verdict v = identify_macro(g, spec_of(doc), x, y, w, budget);
    if (v.assumption1_warning) std::cerr << "warning: Assumption 1 violated: verdict advisory\n";
    if (c.as_json) {
        json out = {{"verdict", to_string(v.kind)}, {"assumption1_warning", v.assumption1_warning},
                    {"query", {{"do", names_json(g, x)}, {"on", names_json(g, y)}, {"given", names_json(g, w)}}}};
        if (v.estimand) {
            out["estimand"] = to_ascii(v.estimand);
            out["estimand_tree"] = to_json(v.estimand);
        }
        json trace = json::array();
        for (const auto& t : v.trace)
            trace.push_back({{"rule", t.rule}, {"condition", t.condition}, {"before", t.before}, {"after", t.after}});
        out["trace"] = trace;
        if (v.certificate) out["certificate"] = certificate_json(*v.certificate_host, *v.certificate);
        out["search"] = {{"expansions", v.report.expansions}, {"depth_reached", v.report.depth_reached},
                         {"max_depth", v.report.budget.max_depth}, {"max_nodes", v.report.budget.max_nodes},
                         {"budget_exhausted", v.report.exhausted}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "verdict: " << to_string(v.kind) << "\n";
        if (v.kind == VerdictKind::Identified) {
            std::cout << "estimand: " << to_ascii(v.estimand) << "\n";
            std::cout << "trace:" << (v.trace.empty() ? " (empty)" : "") << "\n";
            for (std::size_t i = 0; i < v.trace.size(); ++i) {
                const auto& t = v.trace[i];
                std::cout << "  " << i + 1 << ". " << t.rule << ": " << t.before << " = " << t.after;
                if (!t.condition.empty()) std::cout << "   since " << t.condition;
                std::cout << "\n";
            }
        } else if (v.kind == VerdictKind::NonIdentifiable) {
            std::cout << "SC-hedge found\n";
            print_certificate(*v.certificate_host, *v.certificate);
        } else {
            std::cout << "search: " << v.report.expansions << " expansions, depth " << v.report.depth_reached << " of "
                      << v.report.budget.max_depth << (v.report.exhausted ? ", node budget exhausted" : "") << "\n";
        }
    }
    switch (v.kind) {
    case VerdictKind::Identified: return kOk;
    case VerdictKind::NonIdentifiable: return kNonIdentifiable;
    case VerdictKind::Unknown: return kUnknown;
    }
    return kUnknown;
}

int cmd_project(const std::string& file, const Common& c) {
    GraphDocument doc = load_document(locate(file));
    const auto added = sc_projection_added(doc.graph);
    const MixedGraph original = doc.graph;
    doc.graph = sc_projection(doc.graph);
    if (c.as_json) {
        json arr = json::array();
        for (const auto& e : added) arr.push_back({original.name(e.a), original.name(e.b)});
        std::cout << json{{"graph", serialize_document(doc)}, {"added", arr}}.dump(2) << "\n";
    } else {
        std::cout << serialize_document(doc);
    }
    return kOk;
}

int cmd_hedge(const std::string& file, QueryArgs q, const Common& c) {
    const GraphDocument doc = load_document(locate(file));
    fill_query(doc, q);
    const MixedGraph& g = doc.graph;
    const VertexSet x = resolve(g, q.do_vars), y = resolve(g, q.on);
    if (x.empty()) throw UsageError("--do must be nonempty");
    if (x.intersects(y)) throw UsageError("--do and --on must be disjoint");
    const auto cert = find_sc_hedge(g, x, y);
    const MixedGraph host = sc_projection(g);
    if (c.as_json) {
        json out = {{"hedge", cert.has_value()}};
        if (cert) out["certificate"] = certificate_json(host, *cert);
        std::cout << out.dump(2) << "\n";
    } else if (cert) {
        std::cout << "SC-hedge: found\n";
        print_certificate(host, *cert);
    } else {
        std::cout << "SC-hedge: none\n";
    }
    return kOk;
}

int cmd_rules(const std::string& file, int rule, const std::vector<std::string>& ys, const std::vector<std::string>& xs,
              const std::vector<std::string>& zs, const std::vector<std::string>& ws, bool counterexample, const Common& c) {
    const GraphDocument doc = load_document(locate(file));
    const MixedGraph& g = doc.graph;
    if (rule < 1 || rule > 3) throw UsageError("--rule must be 1, 2 or 3");
    RuleQuery q;
    q.graph = g;
    q.rule = static_cast<Rule>(rule);
    q.y = resolve(g, ys);
    q.x = resolve(g, xs);
    q.z = resolve(g, zs);
    q.w = resolve(g, ws);
    if (q.y.empty()) throw UsageError("--y is required");
    for (const auto* a : {&q.y, &q.x, &q.z, &q.w})
        for (const auto* b : {&q.y, &q.x, &q.z, &q.w})
            if (a != b && a->intersects(*b)) throw UsageError("--y, --x, --z and --w must be disjoint");
    const RuleCondition cond = rule_condition(q);
    const auto path = rule_violation(q);
    std::optional<CompatibleAdmgWitness> witness;
    if (path && counterexample) {
        if (doc.kind != GraphKind::Cdmg) throw UsageError("--counterexample needs a cdmg file");
        witness = rule_counterexample(q, doc.clusters);
    }
    if (c.as_json) {
        json out = {{"rule", rule}, {"applies", !path.has_value()}, {"x_w", names_json(g, cond.x_w)},
                    {"mutilated", serialize_document(GraphDocument{doc.kind, cond.mutilated, doc.clusters, {}})}};
        if (path) out["active_path"] = walk_json(g, *path);
        if (witness) out["counterexample"] = admg_text(*witness);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "applies: " << (path ? "false" : "true") << "\n";
        if (q.rule == Rule::R3) std::cout << "X(W): " << names(g, cond.x_w) << "\n";
        if (path) std::cout << "active path: " << format_walk(g, *path) << "\n";
        if (path && counterexample) {
            if (witness) std::cout << "counterexample:\n" << admg_text(*witness);
            else std::cout << "counterexample: none found\n";
        }
    }
    return kOk;
}

int cmd_enumerate(const std::string& file, std::size_t limit, int size, const Common& c) {
    const GraphDocument doc = require_cdmg(load_document(locate(file)));
    const ClusterSpec spec = sized_spec(doc, size);
    const auto all = enumerate_compatible_admgs(doc.graph, spec, limit);
    if (c.as_json) {
        json arr = json::array();
        for (const auto& w : all) arr.push_back(admg_text(w));
        std::cout << json{{"count", all.size()}, {"admgs", arr}}.dump(2) << "\n";
    } else {
        std::cout << "compatible ADMGs: " << all.size() << "\n";
        for (std::size_t i = 0; i < all.size(); ++i) std::cout << "--- " << i + 1 << "\n" << admg_text(all[i]);
    }
    return kOk;
}

int cmd_probe(const std::string& file, QueryArgs q, int trials, std::uint64_t seed, std::size_t limit, int size,
              const Common& c) {
    const GraphDocument doc = require_cdmg(load_document(locate(file)));
    fill_query(doc, q);
    const ClusterSpec spec = sized_spec(doc, size);
    const VertexSet x = resolve(doc.graph, q.do_vars), y = resolve(doc.graph, q.on);
    const ProbeResult r = nonidentifiability_probe(doc.graph, spec, x, y, trials, seed, limit);
    if (c.as_json) {
        json out = {{"result", r.pair ? "FoundPair" : "Exhausted"}, {"seed", seed}, {"trials", trials},
                    {"admgs_examined", r.admgs_examined}, {"candidates_tried", r.candidates_tried}};
        if (r.pair) {
            out["strategy"] = r.pair->strategy;
            out["micro_pair"] = {r.pair->micro_x, r.pair->micro_y};
            out["observational_gap"] = r.pair->observational_gap;
            out["interventional_gap"] = r.pair->interventional_gap;
            out["trial_seed"] = r.pair->seed;
            out["first_admg"] = admg_text(r.pair->first.witness);
            out["second_admg"] = admg_text(r.pair->second.witness);
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "seed: " << seed << "\n";
        std::cout << "compatible ADMGs examined: " << r.admgs_examined << "\n";
        if (r.pair) {
            std::cout << "result: FoundPair (" << r.pair->strategy << " on " << r.pair->micro_x << ", " << r.pair->micro_y
                      << ")\n";
            std::cout << "observational gap: " << r.pair->observational_gap << "\n";
            std::cout << "interventional gap: " << r.pair->interventional_gap << "\n";
            std::cout << "first ADMG:\n" << admg_text(r.pair->first.witness);
            std::cout << "second ADMG:\n" << admg_text(r.pair->second.witness);
        } else {
            std::cout << "result: Exhausted after " << r.candidates_tried << " candidates\n";
        }
    }
    return kOk;
}

int cmd_witness(const std::string& file, const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                const std::vector<std::string>& ws, int size, const Common& c) {
    const GraphDocument doc = require_cdmg(load_document(locate(file)));
    const MixedGraph& g = doc.graph;
    const VertexSet x = resolve(g, xs), y = resolve(g, ys), w = resolve(g, ws);
    if (x.empty() || y.empty()) throw UsageError("--x and --y are required");
    if (x.intersects(y) || x.intersects(w) || y.intersects(w)) throw UsageError("--x, --y and --given must be disjoint");
    const auto path = find_active_path(g, x, y, w);
    if (!path) {
        if (c.as_json) std::cout << json{{"d_separated", true}}.dump(2) << "\n";
        else std::cout << "d-separated: true (no witness needed)\n";
        return kOk;
    }
    ClusterSpec spec = size > 0 ? sized_spec(doc, size) : doc.clusters;
    const auto wit = theorem2_witness(g, spec, g, *path, w, descent_order(g, w));
    const VertexSet mw = lift(g, w, wit.admg, wit.spec);
    const bool active = !is_blocked(wit.admg, *wit.active_path, mw);
    json order = json::array();
    for (Vertex v : *wit.order_used) order.push_back(g.name(v));
    if (c.as_json) {
        std::cout << json{{"d_separated", false}, {"cluster_path", walk_json(g, *path)}, {"order", order},
                          {"admg", admg_text(wit)}, {"micro_path", walk_json(wit.admg, *wit.active_path)},
                          {"micro_path_active", active}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "cluster path: " << format_walk(g, *path) << "\n";
        std::cout << "order:";
        for (Vertex v : *wit.order_used) std::cout << " " << g.name(v);
        std::cout << "\nmicro path: " << format_walk(wit.admg, *wit.active_path) << " ("
                  << (active ? "active" : "blocked") << ")\n";
        std::cout << admg_text(wit);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identifiability of macro causal effects in cluster directed mixed graphs"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--threads", common.threads, "Worker threads (default: available cores)");
    app.add_flag("--strict", common.strict, "Require an explicit --seed for randomized commands");

    std::string file;
    QueryArgs q;
    std::vector<std::string> xs, ys, zs, ws;
    std::size_t budget = 10000, limit = 200000;
    int depth = 8, rule = 0, trials = 20, size = 0;
    std::uint64_t seed = 0;
    bool counterexample = false;

    auto add_json = [&](CLI::App* s) { s->add_flag("--json", common.as_json, "Structured output"); };

    auto* dsep = app.add_subcommand("dsep", "Test d-separation");
    dsep->add_option("file", file)->required();
    dsep->add_option("--x", xs, "Comma-separated vertices")->required();
    dsep->add_option("--y", q.on, "Comma-separated vertices")->required();
    dsep->add_option("--given", q.given);
    add_json(dsep);

    auto* ident = app.add_subcommand("identify", "Decide identifiability of P(y | do(x))");
    ident->add_option("file", file)->required();
    ident->add_option("--do", q.do_vars);
    ident->add_option("--on", q.on);
    ident->add_option("--given", q.given);
    ident->add_option("--budget", budget, "Node budget of the rewrite search");
    ident->add_option("--depth", depth, "Depth bound of the rewrite search");
    add_json(ident);

    auto* project = app.add_subcommand("project", "Print the SC-projection");
    project->add_option("file", file)->required();
    add_json(project);

    auto* hedge = app.add_subcommand("hedge", "Search for an SC-hedge");
    hedge->add_option("file", file)->required();
    hedge->add_option("--do", q.do_vars);
    hedge->add_option("--on", q.on);
    add_json(hedge);

    auto* rules = app.add_subcommand("rules", "Check one do-calculus rule");
    rules->add_option("file", file)->required();
    rules->add_option("--rule", rule)->required();
    rules->add_option("--y", ys)->required();
    rules->add_option("--x", xs);
    rules->add_option("--z", zs);
    rules->add_option("--w", ws);
    rules->add_flag("--counterexample", counterexample, "Build a compatible ADMG where the rule fails");
    add_json(rules);

    auto* oracle = app.add_subcommand("oracle", "Brute-force ground truth");
    oracle->require_subcommand(1);
    bool seed_given = false;
    auto add_oracle_common = [&](CLI::App* s) {
        s->add_option("file", file)->required();
        s->add_option("--size", size, "Size for clusters without one");
        s->add_option("--limit", limit, "Enumeration limit");
        add_json(s);
    };
    auto* enumerate = oracle->add_subcommand("enumerate", "List compatible ADMGs");
    add_oracle_common(enumerate);
    auto* probe = oracle->add_subcommand("probe", "Search for two models with equal observations");
    add_oracle_common(probe);
    probe->add_option("--do", q.do_vars);
    probe->add_option("--on", q.on);
    probe->add_option("--trials", trials);
    probe->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    auto* witness = oracle->add_subcommand("witness", "Two-copies ADMG with an active micro path");
    add_oracle_common(witness);
    witness->add_option("--x", xs)->required();
    witness->add_option("--y", ys)->required();
    witness->add_option("--given", ws);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    if (common.threads < 0) {
        std::cerr << "error: --threads must be positive\n";
        return kUsage;
    }
    if (common.threads == 0) common.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    try {
        if (*dsep) return cmd_dsep(file, q, xs, common);
        if (*ident) return cmd_identify(file, q, budget, depth, common);
        if (*project) return cmd_project(file, common);
        if (*hedge) return cmd_hedge(file, q, common);
        if (*rules) return cmd_rules(file, rule, ys, xs, zs, ws, counterexample, common);
        if (*enumerate) return cmd_enumerate(file, limit, size, common);
        if (*probe) {
            if (common.strict && !seed_given) throw UsageError("--strict requires an explicit --seed");
            return cmd_probe(file, q, trials, seed, limit, size, common);
        }
        if (*witness) return cmd_witness(file, xs, ys, ws, size, common);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::SearchSpaceTooLarge ? kTooLarge : kUsage;
    }
    return kUsage;
}
