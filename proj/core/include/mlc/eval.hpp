#pragma once

#include "mlc/formula.hpp"
#include "mlc/rng.hpp"
#include "mlc/structure.hpp"

#include <map>
#include <string>

namespace mlc {

// Evaluate `formula` in `structure` under `assignment` (must bind every free
// variable to an element of the right sort).
//
// T = Rat  : exact rational semantics (the reference mode).
// T = double: IEEE semantics; structure data converted per lookup.
//
// Errors (EvalError / UndefinedProductError): unbound variable, sort
// mismatch, unknown symbol, arity mismatch, constant above D, undefined
// function value, empty carrier under a binder.
template <typename T>
T eval(const Structure& structure, const Formula& formula, const Assignment& assignment);

// Evaluate a term to an element. Exposed for tooling.
ElemRef eval_term(const Structure& structure, const Term& term, const Assignment& assignment);

// Infer the sort of every free variable from how it is used (function /
// predicate argument positions and metric atoms). Variables equated by
// d(x,y) unify. Throws EvalError on conflicts, unknown symbols, or arity
// errors; variables with no constraining occurrence map to "".
std::map<std::string, std::string> infer_sorts(const Structure& structure, const Formula& formula);

// Conservative continuity modulus of `formula` with respect to `var`,
// assembled from the structure's declared symbol moduli:
//   - metric atoms are 1-Lipschitz in each side,
//   - Min/Max/CMin/CMax take pointwise minima of child moduli,
//   - additive connectives (+., -., absdiff) split the budget across the
//     children containing the variable (ε/c for c occurrences),
//   - half doubles the budget, neg keeps it,
//   - function/predicate arguments compose with the declared argument
//     modulus.
// If the variable does not occur free, the formula is constant in it and
// Identity is returned.
Modulus modulus_of(const Structure& structure, const Formula& formula, const std::string& var);

struct ModulusCheckReport {
    bool pass = true;
    bool exhaustive = false;     // true if every context/pair was enumerated
    std::size_t pairs_checked = 0;
    // Worst pair: maximizes claimed(δφ) − d; a positive margin is a violation.
    Rat worst_margin{-1};
    Rat worst_delta_phi{0};
    Rat worst_dist{0};
    std::string worst_context; // printable assignment
};

// Empirically test a claimed modulus: for sampled contexts and element pairs
// (a, a') in `var`, verify claimed(|φ(a) − φ(a')|) <= d(a, a'). For
// piecewise-linear moduli this single exact inequality is equivalent to the
// ε-δ soundness condition. Enumerates exhaustively when the pair count is
// within `samples`, otherwise samples with `rng`.
ModulusCheckReport check_modulus(const Structure& structure, const Formula& formula,
                                 const std::string& var, const Modulus& claimed,
                                 std::size_t samples, Rng& rng);

} // namespace mlc
