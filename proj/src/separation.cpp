#include "cdmg/separation.hpp"

#include <deque>
#include <functional>

namespace cdmg {

namespace {

bool head_at_to(EdgeKind k) { return k != EdgeKind::Backward; }
bool head_at_from(EdgeKind k) { return k != EdgeKind::Forward; }

bool step_exists(const MixedGraph& g, Vertex a, EdgeKind k, Vertex b) {
    if (a >= g.size() || b >= g.size()) return false;
    switch (k) {
    case EdgeKind::Forward: return g.has_directed(a, b);
    case EdgeKind::Backward: return g.has_directed(b, a);
    case EdgeKind::Bidirected: return g.has_bidirected(a, b);
    }
    return false;
}

Walk without_self_loop_steps(const Walk& w) {
    Walk out;
    if (w.empty()) return out;
    out.vertices.push_back(w.vertices.front());
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        if (w.vertices[i] == w.vertices[i + 1]) continue;
        out.edges.push_back(w.edges[i]);
        out.vertices.push_back(w.vertices[i + 1]);
    }
    return out;
}

} // namespace

bool Walk::is_path() const {
    VertexSet seen;
    for (Vertex v : vertices) {
        if (seen.contains(v)) return false;
        seen.insert(v);
    }
    return true;
}

void require_walk(const MixedGraph& g, const Walk& w) {
    if (w.empty()) return;
    if (w.edges.size() + 1 != w.vertices.size())
        throw Error(ErrorCode::WalkNotInGraph, "walk has mismatched vertex and edge counts");
    if (w.vertices.front() >= g.size()) throw Error(ErrorCode::WalkNotInGraph, "walk vertex out of range");
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        if (!step_exists(g, w.vertices[i], w.edges[i], w.vertices[i + 1]))
            throw Error(ErrorCode::WalkNotInGraph, "step " + std::to_string(i + 1) + " of the walk is not an edge");
    }
}

bool is_blocked(const MixedGraph& g, const Walk& walk, const VertexSet& z) {
    require_walk(g, walk);
    const Walk w = without_self_loop_steps(walk);
    if (w.empty()) return false;
    if (z.contains(w.front()) || z.contains(w.back())) return true;
    VertexSet an_z;
    bool an_z_ready = false;
    for (std::size_t i = 1; i + 1 < w.vertices.size(); ++i) {
        const Vertex v = w.vertices[i];
        const bool collider = head_at_to(w.edges[i - 1]) && head_at_from(w.edges[i]);
        if (!collider) {
            if (z.contains(v)) return true;
            continue;
        }
        if (!an_z_ready) {
            an_z = ancestors(g, z);
            an_z_ready = true;
        }
        // De(v) meets Z exactly when v is an ancestor of Z.
        if (!an_z.contains(v)) return true;
    }
    return false;
}

Walk primary_path(const Walk& w) {
    if (w.empty()) throw Error(ErrorCode::EmptyWalk, "primary path of an empty walk");
    Walk out;
    const std::size_t n = w.vertices.size();
    Vertex u = w.vertices.front();
    out.vertices.push_back(u);
    while (u != w.vertices.back()) {
        std::size_t last = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (w.vertices[i] == u) last = i;
        out.edges.push_back(w.edges[last]);
        u = w.vertices[last + 1];
        out.vertices.push_back(u);
    }
    return out;
}

std::optional<Walk> find_active_path(const MixedGraph& g, const VertexSet& x, const VertexSet& y,
                                     const VertexSet& z) {
    require_vertices(g, x);
    require_vertices(g, y);
    require_vertices(g, z);
    require_disjoint({&x, &y, &z});
    const std::size_t n = g.size();
    const auto an_z = to_mask(ancestors(g, z), n);
    const auto in_z = to_mask(z, n);
    const auto in_y = to_mask(y, n);

    // State: vertex * 2 + (arrived with an arrowhead). Starts use a sentinel.
    struct Origin {
        std::size_t state;
        EdgeKind kind;
    };
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<char> seen(2 * n, 0);
    std::vector<Origin> origin(2 * n, {none, EdgeKind::Forward});
    std::vector<char> is_start(n, 0);
    std::deque<std::size_t> queue;
    for (Vertex v : x) {
        is_start[v] = 1;
        for (int mark = 0; mark < 2; ++mark) {
            seen[2 * v + mark] = 1;
        }
        queue.push_back(2 * v);
    }

    auto build = [&](std::size_t state) {
        Walk rev;
        std::vector<Vertex> vs;
        std::vector<EdgeKind> es;
        while (true) {
            vs.push_back(static_cast<Vertex>(state / 2));
            const auto& o = origin[state];
            if (o.state == none) break;
            es.push_back(o.kind);
            state = o.state;
        }
        Walk w;
        w.vertices.assign(vs.rbegin(), vs.rend());
        w.edges.assign(es.rbegin(), es.rend());
        return primary_path(w);
    };

    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        const Vertex v = static_cast<Vertex>(s / 2);
        const bool arrived_head = (s % 2) == 1;
        const bool start = is_start[v] && origin[s].state == none;
        auto leave = [&](Vertex u, EdgeKind k) -> std::optional<Walk> {
            if (!start) {
                const bool collider = arrived_head && head_at_from(k);
                if (collider ? !an_z[v] : in_z[v]) return std::nullopt;
            }
            const std::size_t t = 2 * u + (head_at_to(k) ? 1 : 0);
            if (seen[t]) return std::nullopt;
            seen[t] = 1;
            origin[t] = {s, k};
            if (in_y[u]) return build(t);
            queue.push_back(t);
            return std::nullopt;
        };
        for (Vertex u : g.children(v))
            if (auto w = leave(u, EdgeKind::Forward)) return w;
        for (Vertex u : g.parents(v))
            if (auto w = leave(u, EdgeKind::Backward)) return w;
        for (Vertex u : g.siblings(v))
            if (auto w = leave(u, EdgeKind::Bidirected)) return w;
    }
    return std::nullopt;
}

bool d_separated(const MixedGraph& g, const VertexSet& x, const VertexSet& y, const VertexSet& z) {
    return !find_active_path(g, x, y, z).has_value();
}

bool d_separated_exhaustive(const MixedGraph& g, const VertexSet& x, const VertexSet& y, const VertexSet& z,
                            std::size_t max_vertices) {
    require_vertices(g, x);
    require_vertices(g, y);
    require_vertices(g, z);
    require_disjoint({&x, &y, &z});
    if (g.size() > max_vertices)
        throw Error(ErrorCode::GraphTooLarge, std::to_string(g.size()) + " vertices exceed the limit of " +
                                                  std::to_string(max_vertices));
    Walk path;
    std::vector<char> on_path(g.size(), 0);
    std::function<bool(Vertex)> extend = [&](Vertex v) {
        if (y.contains(v)) return !is_blocked(g, path, z);
        auto step = [&](Vertex u, EdgeKind k) {
            if (on_path[u]) return false;
            on_path[u] = 1;
            path.vertices.push_back(u);
            path.edges.push_back(k);
            const bool found = extend(u);
            path.vertices.pop_back();
            path.edges.pop_back();
            on_path[u] = 0;
            return found;
        };
        for (Vertex u : g.children(v))
            if (step(u, EdgeKind::Forward)) return true;
        for (Vertex u : g.parents(v))
            if (step(u, EdgeKind::Backward)) return true;
        for (Vertex u : g.siblings(v))
            if (step(u, EdgeKind::Bidirected)) return true;
        return false;
    };
    for (Vertex v : x) {
        path = Walk{{v}, {}};
        on_path.assign(g.size(), 0);
        on_path[v] = 1;
        if (extend(v)) return false;
    }
    return true;
}

std::string format_walk(const MixedGraph& g, const Walk& w) {
    std::string out;
    for (std::size_t i = 0; i < w.vertices.size(); ++i) {
        if (i > 0) {
            switch (w.edges[i - 1]) {
            case EdgeKind::Forward: out += " -> "; break;
            case EdgeKind::Backward: out += " <- "; break;
            case EdgeKind::Bidirected: out += " <-> "; break;
            }
        }
        out += g.name(w.vertices[i]);
    }
    return out;
}

} // namespace cdmg
