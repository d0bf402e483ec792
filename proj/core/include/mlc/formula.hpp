#pragma once

#include "mlc/modulus.hpp"
#include "mlc/rational.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace mlc {

// First-order term: a variable or a function application.
struct Term {
    enum class Kind { Var, App };
    Kind kind = Kind::Var;
    std::string name;       // variable name or function symbol
    std::vector<Term> args; // empty for Var

    static Term var(std::string n) { return {Kind::Var, std::move(n), {}}; }
    static Term app(std::string f, std::vector<Term> a) {
        return {Kind::App, std::move(f), std::move(a)};
    }

    bool operator==(const Term& o) const {
        return kind == o.kind && name == o.name && args == o.args;
    }
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Connectives of [0, D]-valued continuous logic. CMin / CMax are the finite
// truncations of countable min / max families: a declared index bound plus a
// shared continuity modulus for the whole family.
enum class Conn {
    Const,    // rational constant in [0, D]
    Dist,     // d(t1, t2)
    Pred,     // R(t1, ..., tn)
    Neg,      // D − x
    Half,     // x / 2
    TruncSub, // x ∸ y = max(x − y, 0)
    TruncAdd, // x +̇ y = min(x + y, D)
    AbsDiff,  // |x − y|
    Min,      // finite min (0 children allowed: evaluates to D)
    Max,      // finite max (0 children allowed: evaluates to 0)
    CMin,     // truncated countable min
    CMax,     // truncated countable max
    Sup,      // sup over a sort
    Inf       // inf over a sort
};

// Immutable AST node. Children are shared so large schematic formulas
// (e.g. the matching formulas with a common atom pool) stay compact.
class Formula {
public:
    Conn kind;
    Rat value;                         // Const
    std::string symbol;                // Pred name, or binder variable
    std::string sort;                  // binder sort
    std::vector<Term> terms;           // Dist: exactly 2; Pred: arity
    std::vector<FormulaPtr> children;  // connective operands / binder body
    std::size_t family_bound = 0;      // CMin/CMax declared truncation index
    Modulus family_modulus;            // CMin/CMax shared modulus

    static FormulaPtr constant(Rat v);
    static FormulaPtr dist(Term a, Term b);
    static FormulaPtr pred(std::string name, std::vector<Term> args);
    static FormulaPtr neg(FormulaPtr x);
    static FormulaPtr half(FormulaPtr x);
    static FormulaPtr trunc_sub(FormulaPtr x, FormulaPtr y);
    static FormulaPtr trunc_add(FormulaPtr x, FormulaPtr y);
    static FormulaPtr abs_diff(FormulaPtr x, FormulaPtr y);
    static FormulaPtr min_of(std::vector<FormulaPtr> xs);
    static FormulaPtr max_of(std::vector<FormulaPtr> xs);
    static FormulaPtr cmin(std::vector<FormulaPtr> xs, std::size_t bound, Modulus shared);
    static FormulaPtr cmax(std::vector<FormulaPtr> xs, std::size_t bound, Modulus shared);
    static FormulaPtr sup(std::string var, std::string sort, FormulaPtr body);
    static FormulaPtr inf(std::string var, std::string sort, FormulaPtr body);

    bool equals(const Formula& other) const;

    // Free variables in order of first occurrence.
    std::vector<std::string> free_vars() const;

    std::size_t node_count() const;
};

// A checkable condition: φ = 0 (exact) or φ <= r.
struct Condition {
    FormulaPtr formula;
    Rat threshold;  // 0 for "= 0"
    bool eq_zero = true;
};

// One entry of a named-formula file.
struct NamedFormula {
    std::string name;
    FormulaPtr formula;
    bool has_condition = false;
    Rat threshold;
    bool eq_zero = true;
};

} // namespace mlc
