#include "mlc/eval.hpp"

#include "mlc/errors.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace mlc {

namespace {

template <typename T>
T from_rat(const Rat& r);
template <>
double from_rat<double>(const Rat& r) {
    return rat_to_double(r);
}
template <>
Rat from_rat<Rat>(const Rat& r) {
    return r;
}

struct Env {
    const Structure& structure;
    const Assignment& base;
    std::vector<std::pair<std::string, ElemRef>> stack;

    std::optional<ElemRef> lookup(const std::string& name) const {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            if (it->first == name) return it->second;
        auto found = base.find(name);
        if (found != base.end()) return found->second;
        return std::nullopt;
    }
};

std::string elem_label(const Structure& s, const ElemRef& e) {
    return s.sorts[static_cast<std::size_t>(e.sort)].elements[e.index];
}

std::string term_to_text(const Term& t) {
    if (t.kind == Term::Kind::Var) return t.name;
    std::string out = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        out += term_to_text(t.args[i]);
    }
    return out + ")";
}

ElemRef eval_term_env(const Env& env, const Term& term) {
    if (term.kind == Term::Kind::Var) {
        auto e = env.lookup(term.name);
        if (!e) throw EvalError("unbound variable", term.name);
        return *e;
    }
    const FunctionDef* f = env.structure.find_function(term.name);
    if (!f) throw EvalError("unknown function symbol", term.name);
    if (f->arg_sorts.size() != term.args.size())
        throw EvalError("function arity mismatch", term.name);
    std::vector<std::size_t> idx(term.args.size());
    for (std::size_t i = 0; i < term.args.size(); ++i) {
        const ElemRef a = eval_term_env(env, term.args[i]);
        if (a.sort != f->arg_sorts[i])
            throw EvalError("sort mismatch in argument of " + term.name, term_to_text(term.args[i]));
        idx[i] = a.index;
    }
    const std::int32_t v = f->table[env.structure.tuple_index(f->arg_sorts, idx)];
    if (v < 0) {
        std::string args;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i) args += ", ";
            args += env.structure.sorts[static_cast<std::size_t>(f->arg_sorts[i])].elements[idx[i]];
        }
        throw UndefinedProductError("function undefined at arguments", term.name + "(" + args + ")");
    }
    return {f->result_sort, static_cast<std::size_t>(v)};
}

template <typename T>
T eval_node(Env& env, const Formula& f, const T& D) {
    switch (f.kind) {
    case Conn::Const: {
        if (f.value > env.structure.bound)
            throw EvalError("constant exceeds bound D", rat_to_string(f.value));
        return from_rat<T>(f.value);
    }
    case Conn::Dist: {
        const ElemRef a = eval_term_env(env, f.terms[0]);
        const ElemRef b = eval_term_env(env, f.terms[1]);
        if (a.sort != b.sort)
            throw EvalError("sort mismatch in metric atom",
                            term_to_text(f.terms[0]) + " vs " + term_to_text(f.terms[1]));
        return from_rat<T>(env.structure.sorts[static_cast<std::size_t>(a.sort)].dist(a.index, b.index));
    }
    case Conn::Pred: {
        const PredicateDef* p = env.structure.find_predicate(f.symbol);
        if (!p) throw EvalError("unknown predicate symbol", f.symbol);
        if (p->arg_sorts.size() != f.terms.size())
            throw EvalError("predicate arity mismatch", f.symbol);
        std::vector<std::size_t> idx(f.terms.size());
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
            const ElemRef a = eval_term_env(env, f.terms[i]);
            if (a.sort != p->arg_sorts[i])
                throw EvalError("sort mismatch in argument of " + f.symbol,
                                term_to_text(f.terms[i]));
            idx[i] = a.index;
        }
        return from_rat<T>(p->table[env.structure.tuple_index(p->arg_sorts, idx)]);
    }
    case Conn::Neg:
        return D - eval_node(env, *f.children[0], D);
    case Conn::Half:
        return eval_node(env, *f.children[0], D) / 2;
    case Conn::TruncSub: {
        T a = eval_node(env, *f.children[0], D);
        T b = eval_node(env, *f.children[1], D);
        return a > b ? T(a - b) : T(0);
    }
    case Conn::TruncAdd: {
        T s = eval_node(env, *f.children[0], D) + eval_node(env, *f.children[1], D);
        return s < D ? s : D;
    }
    case Conn::AbsDiff: {
        T a = eval_node(env, *f.children[0], D);
        T b = eval_node(env, *f.children[1], D);
        return a > b ? T(a - b) : T(b - a);
    }
    case Conn::Min:
    case Conn::CMin: {
        if (f.children.empty()) return D; // empty min convention
        T best = eval_node(env, *f.children[0], D);
        for (std::size_t i = 1; i < f.children.size(); ++i) {
            T v = eval_node(env, *f.children[i], D);
            if (v < best) best = std::move(v);
        }
        return best;
    }
    case Conn::Max:
    case Conn::CMax: {
        if (f.children.empty()) return T(0); // empty max convention
        T best = eval_node(env, *f.children[0], D);
        for (std::size_t i = 1; i < f.children.size(); ++i) {
            T v = eval_node(env, *f.children[i], D);
            if (best < v) best = std::move(v);
        }
        return best;
    }
    case Conn::Sup:
    case Conn::Inf: {
        const int sid = env.structure.sort_id(f.sort);
        const auto& carrier = env.structure.sorts[static_cast<std::size_t>(sid)];
        if (carrier.elements.empty()) throw EvalError("empty carrier under binder", f.sort);
        env.stack.push_back({f.symbol, ElemRef{sid, 0}});
        T best{};
        for (std::size_t i = 0; i < carrier.elements.size(); ++i) {
            env.stack.back().second.index = i;
            T v = eval_node(env, *f.children[0], D);
            if (i == 0 || (f.kind == Conn::Sup ? best < v : v < best)) best = std::move(v);
        }
        env.stack.pop_back();
        return best;
    }
    }
    throw EvalError("unhandled connective");
}

} // namespace

template <typename T>
T eval(const Structure& structure, const Formula& formula, const Assignment& assignment) {
    Env env{structure, assignment, {}};
    return eval_node<T>(env, formula, from_rat<T>(structure.bound));
}

template double eval<double>(const Structure&, const Formula&, const Assignment&);
template Rat eval<Rat>(const Structure&, const Formula&, const Assignment&);

ElemRef eval_term(const Structure& structure, const Term& term, const Assignment& assignment) {
    Env env{structure, assignment, {}};
    return eval_term_env(env, term);
}

// ---------------------------------------------------------------- sorts --

namespace {

struct Unifier {
    const Structure& structure;
    std::map<std::string, std::string> parent; // var -> representative var
    std::map<std::string, int> sort_of;        // representative -> sort id

    std::string find(const std::string& v) {
        auto it = parent.find(v);
        if (it == parent.end() || it->second == v) {
            parent[v] = v;
            return v;
        }
        std::string root = find(it->second);
        parent[v] = root;
        return root;
    }

    void constrain(const std::string& v, int sort, const std::string& context) {
        const std::string r = find(v);
        auto it = sort_of.find(r);
        if (it == sort_of.end()) {
            sort_of[r] = sort;
        } else if (it->second != sort) {
            throw EvalError("sort mismatch for variable " + v, context);
        }
    }

    void unite(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra == rb) return;
        auto ia = sort_of.find(ra), ib = sort_of.find(rb);
        if (ia != sort_of.end() && ib != sort_of.end() && ia->second != ib->second)
            throw EvalError("sort mismatch between variables " + a + " and " + b);
        if (ia != sort_of.end()) sort_of[rb] = ia->second;
        parent[ra] = rb;
    }
};

struct SortWalk {
    const Structure& structure;
    Unifier uf;
    std::vector<std::pair<std::string, int>> bound; // binder stack

    std::optional<int> bound_sort(const std::string& v) const {
        for (auto it = bound.rbegin(); it != bound.rend(); ++it)
            if (it->first == v) return it->second;
        return std::nullopt;
    }

    // Returns the term's sort, or nullopt for a free variable that no
    // context has pinned yet.
    std::optional<int> walk_term(const Term& t, std::optional<int> expected) {
        if (t.kind == Term::Kind::Var) {
            if (auto bs = bound_sort(t.name)) {
                if (expected && *expected != *bs)
                    throw EvalError("sort mismatch for bound variable " + t.name);
                return *bs;
            }
            uf.find(t.name); // register
            if (expected) {
                uf.constrain(t.name, *expected, term_to_text(t));
                return expected;
            }
            const std::string r = uf.find(t.name);
            auto it = uf.sort_of.find(r);
            if (it != uf.sort_of.end()) return it->second;
            return std::nullopt;
        }
        const FunctionDef* f = structure.find_function(t.name);
        if (!f) throw EvalError("unknown function symbol", t.name);
        if (f->arg_sorts.size() != t.args.size())
            throw EvalError("function arity mismatch", t.name);
        if (expected && *expected != f->result_sort)
            throw EvalError("sort mismatch for term", term_to_text(t));
        for (std::size_t i = 0; i < t.args.size(); ++i)
            walk_term(t.args[i], f->arg_sorts[i]);
        return f->result_sort;
    }

    void walk(const Formula& f) {
        switch (f.kind) {
        case Conn::Dist: {
            auto s1 = walk_term(f.terms[0], std::nullopt);
            auto s2 = walk_term(f.terms[1], s1);
            if (!s1 && s2) walk_term(f.terms[0], s2);
            if (!s1 && !s2 && f.terms[0].kind == Term::Kind::Var &&
                f.terms[1].kind == Term::Kind::Var)
                uf.unite(f.terms[0].name, f.terms[1].name);
            return;
        }
        case Conn::Pred: {
            const PredicateDef* p = structure.find_predicate(f.symbol);
            if (!p) throw EvalError("unknown predicate symbol", f.symbol);
            if (p->arg_sorts.size() != f.terms.size())
                throw EvalError("predicate arity mismatch", f.symbol);
            for (std::size_t i = 0; i < f.terms.size(); ++i)
                walk_term(f.terms[i], p->arg_sorts[i]);
            return;
        }
        case Conn::Sup:
        case Conn::Inf: {
            const int sid = structure.sort_id(f.sort);
            bound.push_back({f.symbol, sid});
            walk(*f.children[0]);
            bound.pop_back();
            return;
        }
        default:
            for (const auto& c : f.children) walk(*c);
        }
    }
};

} // namespace

std::map<std::string, std::string> infer_sorts(const Structure& structure, const Formula& formula) {
    SortWalk w{structure, Unifier{structure, {}, {}}, {}};
    w.walk(formula);
    std::map<std::string, std::string> out;
    for (const auto& v : formula.free_vars()) {
        const std::string r = w.uf.find(v);
        auto it = w.uf.sort_of.find(r);
        out[v] = it == w.uf.sort_of.end()
                     ? std::string{}
                     : structure.sorts[static_cast<std::size_t>(it->second)].name;
    }
    return out;
}

// -------------------------------------------------------------- modulus --

namespace {

std::optional<Modulus> term_modulus(const Structure& st, const Term& t, const std::string& var) {
    if (t.kind == Term::Kind::Var)
        return t.name == var ? std::optional<Modulus>(Modulus::identity()) : std::nullopt;
    const FunctionDef* f = st.find_function(t.name);
    if (!f) throw EvalError("unknown function symbol", t.name);
    std::vector<std::pair<std::size_t, Modulus>> contributing;
    for (std::size_t i = 0; i < t.args.size(); ++i)
        if (auto m = term_modulus(st, t.args[i], var)) contributing.push_back({i, std::move(*m)});
    if (contributing.empty()) return std::nullopt;
    const unsigned c = static_cast<unsigned>(contributing.size());
    std::optional<Modulus> acc;
    for (auto& [i, g] : contributing) {
        Modulus gi = g.compose(f->arg_moduli[i]).shrink_arg(c);
        acc = acc ? acc->min_with(gi) : gi;
    }
    return acc;
}

std::optional<Modulus> formula_modulus(const Structure& st, const Formula& f,
                                       const std::string& var) {
    switch (f.kind) {
    case Conn::Const:
        return std::nullopt;
    case Conn::Dist: {
        std::vector<Modulus> mods;
        for (const auto& t : f.terms)
            if (auto m = term_modulus(st, t, var)) mods.push_back(std::move(*m));
        if (mods.empty()) return std::nullopt;
        const unsigned c = static_cast<unsigned>(mods.size());
        std::optional<Modulus> acc;
        for (auto& m : mods) {
            Modulus gi = m.shrink_arg(c); // metric atoms are 1-Lipschitz per side
            acc = acc ? acc->min_with(gi) : gi;
        }
        return acc;
    }
    case Conn::Pred: {
        const PredicateDef* p = st.find_predicate(f.symbol);
        if (!p) throw EvalError("unknown predicate symbol", f.symbol);
        std::vector<std::pair<std::size_t, Modulus>> contributing;
        for (std::size_t i = 0; i < f.terms.size(); ++i)
            if (auto m = term_modulus(st, f.terms[i], var))
                contributing.push_back({i, std::move(*m)});
        if (contributing.empty()) return std::nullopt;
        const unsigned c = static_cast<unsigned>(contributing.size());
        std::optional<Modulus> acc;
        for (auto& [i, g] : contributing) {
            Modulus gi = g.compose(p->arg_moduli[i]).shrink_arg(c);
            acc = acc ? acc->min_with(gi) : gi;
        }
        return acc;
    }
    case Conn::Neg:
        return formula_modulus(st, *f.children[0], var);
    case Conn::Half: {
        auto m = formula_modulus(st, *f.children[0], var);
        if (!m) return std::nullopt;
        return m->scale_input(Rat(2)); // child budget is 2ε
    }
    case Conn::TruncSub:
    case Conn::TruncAdd:
    case Conn::AbsDiff: {
        std::vector<Modulus> mods;
        for (const auto& ch : f.children)
            if (auto m = formula_modulus(st, *ch, var)) mods.push_back(std::move(*m));
        if (mods.empty()) return std::nullopt;
        const unsigned c = static_cast<unsigned>(mods.size());
        std::optional<Modulus> acc;
        for (auto& m : mods) {
            Modulus gi = m.shrink_arg(c);
            acc = acc ? acc->min_with(gi) : gi;
        }
        return acc;
    }
    case Conn::Min:
    case Conn::Max:
    case Conn::CMin:
    case Conn::CMax: {
        // min/max are jointly 1-Lipschitz in the sup norm: pointwise min.
        std::optional<Modulus> acc;
        for (const auto& ch : f.children)
            if (auto m = formula_modulus(st, *ch, var))
                acc = acc ? acc->min_with(*m) : *m;
        return acc;
    }
    case Conn::Sup:
    case Conn::Inf:
        if (f.symbol == var) return std::nullopt; // var is rebound inside
        return formula_modulus(st, *f.children[0], var);
    }
    return std::nullopt;
}

} // namespace

Modulus modulus_of(const Structure& structure, const Formula& formula, const std::string& var) {
    auto m = formula_modulus(structure, formula, var);
    return m ? *m : Modulus::identity();
}

// --------------------------------------------------------- check_modulus --

ModulusCheckReport check_modulus(const Structure& structure, const Formula& formula,
                                 const std::string& var, const Modulus& claimed,
                                 std::size_t samples, Rng& rng) {
    ModulusCheckReport report;

    const auto var_sorts = infer_sorts(structure, formula);
    auto vit = var_sorts.find(var);
    if (vit == var_sorts.end()) {
        // Variable not free: formula constant in it, any modulus is sound.
        report.exhaustive = true;
        return report;
    }
    if (vit->second.empty())
        throw EvalError("cannot infer sort of variable", var);
    const int vsort = structure.sort_id(vit->second);
    const std::size_t nv = structure.sorts[static_cast<std::size_t>(vsort)].size();

    std::vector<std::pair<std::string, int>> ctx; // (name, sort id), fixed order
    for (const auto& [name, sort] : var_sorts) {
        if (name == var) continue;
        if (sort.empty()) throw EvalError("cannot infer sort of variable", name);
        ctx.push_back({name, structure.sort_id(sort)});
    }

    std::size_t ctx_count = 1;
    bool overflow = false;
    for (const auto& [_, sid] : ctx) {
        const std::size_t n = structure.sorts[static_cast<std::size_t>(sid)].size();
        if (ctx_count > samples / (n ? n : 1) + 1) overflow = true;
        ctx_count *= n;
    }
    const std::size_t pair_count = nv * (nv - 1) / 2;
    const bool exhaustive = !overflow && pair_count > 0 && ctx_count * pair_count <= samples;
    report.exhaustive = exhaustive || nv < 2;

    auto context_assignment = [&](std::size_t code) {
        Assignment a;
        for (const auto& [name, sid] : ctx) {
            const std::size_t n = structure.sorts[static_cast<std::size_t>(sid)].size();
            a[name] = ElemRef{sid, code % n};
            code /= n;
        }
        return a;
    };
    auto context_text = [&](const Assignment& a, std::size_t i, std::size_t j) {
        std::ostringstream os;
        for (const auto& [name, e] : a) os << name << "=" << elem_label(structure, e) << " ";
        os << "| " << var << ": " << structure.sorts[static_cast<std::size_t>(vsort)].elements[i]
           << " vs " << structure.sorts[static_cast<std::size_t>(vsort)].elements[j];
        return os.str();
    };

    auto check_pair = [&](Assignment& a, std::size_t i, std::size_t j) {
        a[var] = ElemRef{vsort, i};
        const Rat vi = eval<Rat>(structure, formula, a);
        a[var] = ElemRef{vsort, j};
        const Rat vj = eval<Rat>(structure, formula, a);
        const Rat delta = rat_abs(vi - vj);
        const Rat d = structure.sorts[static_cast<std::size_t>(vsort)].dist(i, j);
        const Rat margin = claimed(delta) - d;
        ++report.pairs_checked;
        if (margin > report.worst_margin) {
            report.worst_margin = margin;
            report.worst_delta_phi = delta;
            report.worst_dist = d;
            report.worst_context = context_text(a, i, j);
            if (margin > 0) report.pass = false;
        }
    };

    if (nv < 2) return report;

    if (exhaustive) {
        for (std::size_t code = 0; code < ctx_count; ++code) {
            Assignment a = context_assignment(code);
            for (std::size_t i = 0; i < nv; ++i)
                for (std::size_t j = i + 1; j < nv; ++j) check_pair(a, i, j);
        }
    } else {
        for (std::size_t s = 0; s < samples; ++s) {
            Rng local = rng.fork(s);
            Assignment a;
            for (const auto& [name, sid] : ctx) {
                const std::size_t n = structure.sorts[static_cast<std::size_t>(sid)].size();
                a[name] = ElemRef{sid, static_cast<std::size_t>(local.below(n))};
            }
            const std::size_t i = static_cast<std::size_t>(local.below(nv));
            std::size_t j = static_cast<std::size_t>(local.below(nv - 1));
            if (j >= i) ++j;
            check_pair(a, i < j ? i : j, i < j ? j : i);
        }
    }
    return report;
}

} // namespace mlc
