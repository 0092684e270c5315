#include "cdmg/estimand.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace cdmg {

ExprPtr make_prob(std::vector<Var> target, std::vector<Var> given_obs, std::vector<Var> given_do) {
    if (target.empty()) throw Error(ErrorCode::EmptyTarget, "probability term without target");
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Prob;
    e->target = std::move(target);
    e->given_obs = std::move(given_obs);
    e->given_do = std::move(given_do);
    return e;
}

ExprPtr make_sum(std::vector<Var> bound, ExprPtr body) {
    if (bound.empty()) return body;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Sum;
    e->bound = std::move(bound);
    e->children.push_back(std::move(body));
    return e;
}

ExprPtr make_product(std::vector<ExprPtr> factors) {
    std::vector<ExprPtr> flat;
    for (auto& f : factors) {
        if (f->kind == Expr::Kind::Product) flat.insert(flat.end(), f->children.begin(), f->children.end());
        else flat.push_back(std::move(f));
    }
    if (flat.size() == 1) return flat.front();
    std::stable_partition(flat.begin(), flat.end(), [](const ExprPtr& f) { return f->kind != Expr::Kind::Sum; });
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Product;
    e->children = std::move(flat);
    return e;
}

ExprPtr make_fraction(ExprPtr num, ExprPtr den) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Fraction;
    e->children = {std::move(num), std::move(den)};
    return e;
}

bool is_observational(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Prob) return e->given_do.empty();
    return std::all_of(e->children.begin(), e->children.end(), [](const ExprPtr& c) { return is_observational(c); });
}

namespace {

void collect_free(const Expr& e, std::set<Var>& bound, std::set<Var>& out) {
    switch (e.kind) {
    case Expr::Kind::Prob:
        for (const auto* vs : {&e.target, &e.given_obs, &e.given_do})
            for (const auto& v : *vs)
                if (!bound.count(v)) out.insert(v);
        break;
    case Expr::Kind::Sum: {
        std::vector<Var> added;
        for (const auto& v : e.bound)
            if (bound.insert(v).second) added.push_back(v);
        collect_free(*e.children[0], bound, out);
        for (const auto& v : added) bound.erase(v);
        break;
    }
    default:
        for (const auto& c : e.children) collect_free(*c, bound, out);
    }
}

} // namespace

std::vector<Var> free_variables(const ExprPtr& e) {
    std::set<Var> bound, out;
    collect_free(*e, bound, out);
    return {out.begin(), out.end()};
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind || a->target != b->target || a->given_obs != b->given_obs || a->given_do != b->given_do ||
        a->bound != b->bound || a->children.size() != b->children.size())
        return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!structurally_equal(a->children[i], b->children[i])) return false;
    return true;
}

std::string symbol(const Var& v) {
    std::string s;
    for (char c : v.cluster) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    s.append(static_cast<std::size_t>(v.primes), '\'');
    return s;
}

namespace {

std::string join(const std::vector<Var>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += symbol(vs[i]);
    }
    return out;
}

std::string render(const Expr& e, bool sorted);

std::string render_factor(const Expr& f, bool last, bool sorted) {
    const std::string body = render(f, sorted);
    if (f.kind == Expr::Kind::Sum && !last) return "(" + body + ")";
    return body;
}

std::string render(const Expr& e, bool sorted) {
    auto order = [&](std::vector<Var> vs) {
        if (sorted) std::sort(vs.begin(), vs.end());
        return vs;
    };
    switch (e.kind) {
    case Expr::Kind::Prob: {
        std::string out = "P(" + join(order(e.target));
        std::string given;
        if (!e.given_do.empty()) given = "do(" + join(order(e.given_do)) + ")";
        if (!e.given_obs.empty()) given += (given.empty() ? "" : ",") + join(order(e.given_obs));
        if (!given.empty()) out += "|" + given;
        return out + ")";
    }
    case Expr::Kind::Sum:
        return "sum_{" + join(order(e.bound)) + "} " + render(*e.children[0], sorted);
    case Expr::Kind::Product: {
        std::vector<const Expr*> factors;
        for (const auto& c : e.children) factors.push_back(c.get());
        if (sorted) {
            std::stable_sort(factors.begin(), factors.end(), [&](const Expr* a, const Expr* b) {
                const bool sa = a->kind == Expr::Kind::Sum, sb = b->kind == Expr::Kind::Sum;
                if (sa != sb) return sb;
                return render(*a, true) < render(*b, true);
            });
        }
        std::string out;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out += " * ";
            out += render_factor(*factors[i], i + 1 == factors.size(), sorted);
        }
        return out;
    }
    case Expr::Kind::Fraction:
        return "(" + render(*e.children[0], sorted) + ") / (" + render(*e.children[1], sorted) + ")";
    }
    return {};
}

} // namespace

std::string to_ascii(const ExprPtr& e) { return render(*e, false); }
std::string canonical_string(const ExprPtr& e) {
    std::vector<std::string> free;
    for (const auto& v : free_variables(e))
        if (v.primes == 0) free.push_back(v.cluster);
    return render(*assign_primes(e, free), true);
}

namespace {

nlohmann::json vars_json(const std::vector<Var>& vs) {
    auto arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back({{"cluster", v.cluster}, {"primes", v.primes}});
    return arr;
}

std::vector<Var> vars_from(const nlohmann::json& j) {
    std::vector<Var> out;
    for (const auto& v : j) out.push_back({v.at("cluster").get<std::string>(), v.at("primes").get<int>()});
    return out;
}

} // namespace

nlohmann::json to_json(const ExprPtr& e) {
    switch (e->kind) {
    case Expr::Kind::Prob:
        return {{"kind", "prob"}, {"target", vars_json(e->target)}, {"given_obs", vars_json(e->given_obs)},
                {"given_do", vars_json(e->given_do)}};
    case Expr::Kind::Sum:
        return {{"kind", "sum"}, {"bound", vars_json(e->bound)}, {"body", to_json(e->children[0])}};
    case Expr::Kind::Product: {
        auto arr = nlohmann::json::array();
        for (const auto& c : e->children) arr.push_back(to_json(c));
        return {{"kind", "product"}, {"factors", arr}};
    }
    case Expr::Kind::Fraction:
        return {{"kind", "fraction"}, {"num", to_json(e->children[0])}, {"den", to_json(e->children[1])}};
    }
    return {};
}

ExprPtr from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "prob") return make_prob(vars_from(j.at("target")), vars_from(j.at("given_obs")), vars_from(j.at("given_do")));
        if (kind == "sum") return make_sum(vars_from(j.at("bound")), from_json(j.at("body")));
        if (kind == "fraction") return make_fraction(from_json(j.at("num")), from_json(j.at("den")));
        if (kind == "product") {
            std::vector<ExprPtr> fs;
            for (const auto& f : j.at("factors")) fs.push_back(from_json(f));
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Product;
            e->children = std::move(fs);
            return e;
        }
        throw Error(ErrorCode::Syntax, "unknown estimand kind '" + kind + "'");
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::Syntax, std::string("malformed estimand JSON: ") + ex.what());
    }
}

SymbolResolver resolver_for(const std::vector<std::string>& cluster_names) {
    std::map<std::string, std::optional<std::string>> table;
    for (const auto& n : cluster_names) {
        const std::string s = symbol({n, 0});
        if (table.count(s)) table[s] = std::nullopt; // ambiguous
        else table[s] = n;
    }
    return [table](const std::string& s) -> std::optional<std::string> {
        auto it = table.find(s);
        if (it == table.end()) return std::nullopt;
        return it->second;
    };
}

namespace {

class EstimandParser {
public:
    EstimandParser(const std::string& text, const SymbolResolver& resolve) : s_(text), resolve_(resolve) {}

    ExprPtr parse() {
        ExprPtr e = product();
        skip();
        if (pos_ != s_.size()) fail("end of input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& expected) {
        throw Error(ErrorCode::Syntax, "column " + std::to_string(pos_ + 1) + ": expected " + expected);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(const std::string& tok) {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& tok) {
        if (!accept(tok)) fail("'" + tok + "'");
    }

    ExprPtr product() {
        std::vector<ExprPtr> fs{factor()};
        while (accept("*")) fs.push_back(factor());
        if (fs.size() == 1) return fs.front();
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Product;
        e->children = std::move(fs);
        return e;
    }

    ExprPtr factor() {
        if (accept("sum_{")) {
            auto bound = vars();
            expect("}");
            return make_sum(std::move(bound), product());
        }
        if (accept("(")) {
            ExprPtr inner = product();
            expect(")");
            if (accept("/")) {
                expect("(");
                ExprPtr den = product();
                expect(")");
                return make_fraction(inner, den);
            }
            return inner;
        }
        if (accept("P(")) {
            auto target = vars();
            std::vector<Var> obs, dos;
            if (accept("|")) {
                do {
                    if (accept("do(")) {
                        auto d = vars();
                        dos.insert(dos.end(), d.begin(), d.end());
                        expect(")");
                    } else {
                        obs.push_back(var());
                    }
                } while (accept(","));
            }
            expect(")");
            return make_prob(std::move(target), std::move(obs), std::move(dos));
        }
        fail("'sum_{', '(' or 'P('");
    }

    std::vector<Var> vars() {
        std::vector<Var> out{var()};
        while (accept(",")) out.push_back(var());
        return out;
    }

    Var var() {
        skip();
        const std::size_t start = pos_;
        auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; };
        while (pos_ < s_.size() && word(s_[pos_])) ++pos_;
        if (pos_ == start) fail("variable");
        const std::string base = s_.substr(start, pos_ - start);
        int primes = 0;
        while (pos_ < s_.size() && s_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        auto cluster = resolve_(base);
        if (!cluster) {
            pos_ = start;
            fail("a known variable instead of '" + base + "'");
        }
        return {*cluster, primes};
    }

    const std::string& s_;
    const SymbolResolver& resolve_;
    std::size_t pos_ = 0;
};

struct Scope {
    std::map<Var, int> names;          // original variable -> primes in output
    std::map<std::string, int> next;   // next free prime count per cluster
};

ExprPtr rename(const Expr& e, Scope& scope) {
    auto sub = [&](const std::vector<Var>& vs) {
        std::vector<Var> out;
        for (const auto& v : vs) {
            auto it = scope.names.find(v);
            out.push_back({v.cluster, it == scope.names.end() ? v.primes : it->second});
        }
        return out;
    };
    switch (e.kind) {
    case Expr::Kind::Prob:
        return make_prob(sub(e.target), sub(e.given_obs), sub(e.given_do));
    case Expr::Kind::Sum: {
        const Scope saved = scope;
        std::vector<Var> bound;
        for (const auto& v : e.bound) {
            const int primes = scope.next[v.cluster]++;
            scope.names[v] = primes;
            bound.push_back({v.cluster, primes});
        }
        ExprPtr body = rename(*e.children[0], scope);
        scope = saved;
        return make_sum(std::move(bound), std::move(body));
    }
    case Expr::Kind::Product: {
        std::vector<ExprPtr> fs;
        for (const auto& c : e.children) fs.push_back(rename(*c, scope));
        return make_product(std::move(fs));
    }
    case Expr::Kind::Fraction:
        return make_fraction(rename(*e.children[0], scope), rename(*e.children[1], scope));
    }
    return nullptr;
}

} // namespace

ExprPtr parse_estimand(const std::string& text, const SymbolResolver& resolve) {
    return EstimandParser(text, resolve).parse();
}

ExprPtr assign_primes(const ExprPtr& e, const std::vector<std::string>& free) {
    Scope scope;
    for (const auto& c : free) {
        scope.names[Var{c, 0}] = 0;
        scope.next[c] = 1;
    }
    return rename(*e, scope);
}

EstimandEvaluator::EstimandEvaluator(const ExactJointTable& joint) : joint_(joint) {
    for (double x : joint.p)
        if (!(x > 0)) throw Error(ErrorCode::NonPositiveDistribution, "joint table has a non-positive cell");
}

double EstimandEvaluator::probability(const std::map<std::string, int>& assignment) {
    std::vector<std::string> key;
    for (const auto& [name, _] : assignment) key.push_back(name);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, joint_.marginal(key)).first;
    const ExactJointTable& m = it->second;
    std::size_t index = 0;
    std::size_t k = 0;
    for (const auto& [name, value] : assignment) {
        if (value < 0 || value >= m.cards[k]) throw Error(ErrorCode::InvalidArgument, "value out of range for '" + name + "'");
        index = index * static_cast<std::size_t>(m.cards[k]) + static_cast<std::size_t>(value);
        ++k;
    }
    return m.p[index];
}

double EstimandEvaluator::eval(const Expr& e, std::map<Var, int>& assignment) {
    switch (e.kind) {
    case Expr::Kind::Prob: {
        if (!e.given_do.empty())
            throw Error(ErrorCode::NotObservational, "cannot evaluate an interventional term numerically");
        std::map<std::string, int> cond, joint;
        auto bind = [&](const Var& v, std::map<std::string, int>& into) {
            auto it = assignment.find(v);
            if (it == assignment.end()) throw Error(ErrorCode::UnboundVariable, "variable '" + symbol(v) + "' has no value");
            auto [slot, fresh] = into.emplace(v.cluster, it->second);
            if (!fresh && slot->second != it->second) return false;
            return true;
        };
        for (const auto& v : e.given_obs)
            if (!bind(v, cond)) throw Error(ErrorCode::InvalidArgument, "conflicting values for '" + v.cluster + "'");
        joint = cond;
        for (const auto& v : e.target)
            if (!bind(v, joint)) return 0.0;
        const double den = cond.empty() ? 1.0 : probability(cond);
        if (!(den > 0)) throw Error(ErrorCode::NonPositiveDistribution, "conditioning event has probability zero");
        return probability(joint) / den;
    }
    case Expr::Kind::Sum: {
        std::vector<int> cards;
        for (const auto& v : e.bound) cards.push_back(joint_.cards[joint_.position(v.cluster)]);
        std::vector<int> values(cards.size(), 0);
        std::map<Var, int> saved;
        for (const auto& v : e.bound)
            if (auto it = assignment.find(v); it != assignment.end()) saved[v] = it->second;
        double total = 0;
        while (true) {
            for (std::size_t i = 0; i < values.size(); ++i) assignment[e.bound[i]] = values[i];
            total += eval(*e.children[0], assignment);
            std::size_t k = values.size();
            while (k > 0 && ++values[k - 1] == cards[k - 1]) values[--k] = 0;
            if (k == 0) break;
        }
        for (const auto& v : e.bound) assignment.erase(v);
        for (const auto& [v, x] : saved) assignment[v] = x;
        return total;
    }
    case Expr::Kind::Product: {
        double r = 1;
        for (const auto& c : e.children) r *= eval(*c, assignment);
        return r;
    }
    case Expr::Kind::Fraction: {
        const double den = eval(*e.children[1], assignment);
        if (!(den > 0)) throw Error(ErrorCode::NonPositiveDistribution, "fraction with zero denominator");
        return eval(*e.children[0], assignment) / den;
    }
    }
    return 0;
}

double EstimandEvaluator::operator()(const ExprPtr& e, const std::map<Var, int>& assignment) {
    std::map<Var, int> a = assignment;
    return eval(*e, a);
}

double evaluate_estimand(const ExprPtr& e, const ExactJointTable& joint, const std::map<Var, int>& assignment) {
    EstimandEvaluator ev(joint);
    return ev(e, assignment);
}

} // namespace cdmg
