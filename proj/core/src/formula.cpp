#include "mlc/formula.hpp"

#include "mlc/errors.hpp"

#include <algorithm>

namespace mlc {

namespace {

std::shared_ptr<Formula> node(Conn k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}

void term_vars(const Term& t, std::vector<std::string>& out, const std::set<std::string>& bound) {
    if (t.kind == Term::Kind::Var) {
        if (!bound.count(t.name) && std::find(out.begin(), out.end(), t.name) == out.end())
            out.push_back(t.name);
        return;
    }
    for (const auto& a : t.args) term_vars(a, out, bound);
}

void collect_free(const Formula& f, std::vector<std::string>& out, std::set<std::string>& bound) {
    for (const auto& t : f.terms) term_vars(t, out, bound);
    if (f.kind == Conn::Sup || f.kind == Conn::Inf) {
        const bool already = bound.count(f.symbol) > 0;
        bound.insert(f.symbol);
        for (const auto& c : f.children) collect_free(*c, out, bound);
        if (!already) bound.erase(f.symbol);
        return;
    }
    for (const auto& c : f.children) collect_free(*c, out, bound);
}

} // namespace

FormulaPtr Formula::constant(Rat v) {
    if (v < 0) throw Error("formula constant must be nonnegative", rat_to_string(v));
    auto f = node(Conn::Const);
    f->value = std::move(v);
    return f;
}

FormulaPtr Formula::dist(Term a, Term b) {
    auto f = node(Conn::Dist);
    f->terms = {std::move(a), std::move(b)};
    return f;
}

FormulaPtr Formula::pred(std::string name, std::vector<Term> args) {
    auto f = node(Conn::Pred);
    f->symbol = std::move(name);
    f->terms = std::move(args);
    return f;
}

FormulaPtr Formula::neg(FormulaPtr x) {
    auto f = node(Conn::Neg);
    f->children = {std::move(x)};
    return f;
}

FormulaPtr Formula::half(FormulaPtr x) {
    auto f = node(Conn::Half);
    f->children = {std::move(x)};
    return f;
}

FormulaPtr Formula::trunc_sub(FormulaPtr x, FormulaPtr y) {
    auto f = node(Conn::TruncSub);
    f->children = {std::move(x), std::move(y)};
    return f;
}

FormulaPtr Formula::trunc_add(FormulaPtr x, FormulaPtr y) {
    auto f = node(Conn::TruncAdd);
    f->children = {std::move(x), std::move(y)};
    return f;
}

FormulaPtr Formula::abs_diff(FormulaPtr x, FormulaPtr y) {
    auto f = node(Conn::AbsDiff);
    f->children = {std::move(x), std::move(y)};
    return f;
}

FormulaPtr Formula::min_of(std::vector<FormulaPtr> xs) {
    auto f = node(Conn::Min);
    f->children = std::move(xs);
    return f;
}

FormulaPtr Formula::max_of(std::vector<FormulaPtr> xs) {
    auto f = node(Conn::Max);
    f->children = std::move(xs);
    return f;
}

FormulaPtr Formula::cmin(std::vector<FormulaPtr> xs, std::size_t bound, Modulus shared) {
    if (xs.empty()) throw Error("cmin requires at least one listed member");
    if (bound < xs.size()) throw Error("cmin declared bound smaller than member count");
    auto f = node(Conn::CMin);
    f->children = std::move(xs);
    f->family_bound = bound;
    f->family_modulus = std::move(shared);
    return f;
}

FormulaPtr Formula::cmax(std::vector<FormulaPtr> xs, std::size_t bound, Modulus shared) {
    if (xs.empty()) throw Error("cmax requires at least one listed member");
    if (bound < xs.size()) throw Error("cmax declared bound smaller than member count");
    auto f = node(Conn::CMax);
    f->children = std::move(xs);
    f->family_bound = bound;
    f->family_modulus = std::move(shared);
    return f;
}

FormulaPtr Formula::sup(std::string var, std::string sort, FormulaPtr body) {
    auto f = node(Conn::Sup);
    f->symbol = std::move(var);
    f->sort = std::move(sort);
    f->children = {std::move(body)};
    return f;
}

FormulaPtr Formula::inf(std::string var, std::string sort, FormulaPtr body) {
    auto f = node(Conn::Inf);
    f->symbol = std::move(var);
    f->sort = std::move(sort);
    f->children = {std::move(body)};
    return f;
}

bool Formula::equals(const Formula& other) const {
    if (kind != other.kind) return false;
    if (value != other.value || symbol != other.symbol || sort != other.sort) return false;
    if (!(terms == other.terms)) return false;
    if (family_bound != other.family_bound) return false;
    if (!(family_modulus == other.family_modulus)) return false;
    if (children.size() != other.children.size()) return false;
    for (std::size_t i = 0; i < children.size(); ++i)
        if (!children[i]->equals(*other.children[i])) return false;
    return true;
}

std::vector<std::string> Formula::free_vars() const {
    std::vector<std::string> out;
    std::set<std::string> bound;
    collect_free(*this, out, bound);
    return out;
}

std::size_t Formula::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c->node_count();
    return n;
}

} // namespace mlc
