#pragma once

#include "mlc/formula.hpp"
#include "mlc/group.hpp"
#include "mlc/matching.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mlc {

// Parameters of the matching formulas φ_{k,q,θ} (positive) and φ⁻_{k,q,θ}
// (negative). The positive variant pairs with the closed ball of radius q,
// the negative with the open ball.
struct PhiSpec {
    int k = 1;
    Rat q{1, 2};
    Rat theta{1, 2};
    bool positive = true;

    void validate() const; // k >= 1, 0 < theta <= 1, q >= 0
};

// Literal matching formula (positive/negative variant) over x1..xk and y:
//
//  positive:  max_{S ⊆ {x̄}} min { dist_{S,S',ρ} : S' ⊆ {y·x̄},
//                 |S'| >= |S| − k + θk, ρ : S' → S }  -. q
//      with  dist_{S,S',ρ} = max_{y·x_i ∈ S'} d(y·x_i, ρ(y·x_i))
//
//  negative:  min_{S} min { q -. dbar_{S,S'} : |S'| < |S| − k + θk }
//      with  dbar_{S,S'} = min { d(y·x_i, x_j) : x_j ∈ S, y·x_i ∉ S' }
//
// Empty min evaluates to D, empty max to 0. Metric atoms are shared across
// the whole tree. Throws BudgetError when the (S, S', ρ) family exceeds
// `node_budget`.
FormulaPtr build_phi(const PhiSpec& spec, std::size_t node_budget = 2'000'000);

// Fast combinatorial evaluation on concrete data: F lists k group elements
// (the values of x̄), y a group element. Computes W = the largest over
// S ⊆ F of the ⌈t(S)⌉-th smallest distance from translates y·F to S, via a
// Hall-type threshold scan; then φ = W ∸ q and φ⁻ = q ∸ W.
Rat phi_value_fast(const MetricGroup& group, const std::vector<std::size_t>& F, std::size_t y,
                   const PhiSpec& spec);

// Decision only. Positive: μ(H_{<=q}) >= θk (closed ball); negative holds
// when the open-ball matching bound fails: μ(H_{<q}) < θk.
bool phi_holds_fast(const MetricGroup& group, const std::vector<std::size_t>& F, std::size_t y,
                    const PhiSpec& spec);

struct LemmaCheck {
    Rat ast_value;   // exact evaluation of build_phi
    Rat fast_value;  // phi_value_fast
    bool agree;      // values equal and decision consistent
    bool fast_holds;
};

// Oracle cross-check: evaluates the literal formula and the fast path on the
// same data and compares exactly.
LemmaCheck lemma_equivalence_check(const MetricGroup& group, const std::vector<std::size_t>& F,
                                   std::size_t y, const PhiSpec& spec);

// ---------------------------------------------------------- certificates --

enum class CertificateStatus { Valid, Invalid, Inconclusive };

struct Certificate {
    std::vector<std::size_t> E; // tested translations
    Rat theta;
    Rat q;
    bool closed = true; // ball kind for U
    std::vector<std::size_t> F;
    std::vector<Rat> margins; // per g ∈ E: μ(F, gF, U) − θ|F|
    Rat min_margin{0};
    CertificateStatus status = CertificateStatus::Invalid;
    std::string note; // failure/inconclusive witness
};

// Recompute every margin of a claimed certificate. Margins use
// μ(F, gF, U) via build_RU. Undefined products ⇒ Inconclusive with witness.
Certificate verify_certificate(const MetricGroup& group, const std::vector<std::size_t>& E,
                               const Rat& theta, const Rat& q, bool closed,
                               const std::vector<std::size_t>& F);

enum class SearchStrategy { Exhaustive, BallGrowing, GreedyLocal };
enum class SearchStatus { Found, NotFound, BudgetExhausted };

struct SearchConfig {
    SearchStrategy strategy = SearchStrategy::Exhaustive;
    std::vector<std::size_t> ground; // candidate pool; empty → all elements
    std::size_t size_cap = 0;        // max |F|; 0 → |ground|
    std::uint64_t budget = 1'000'000; // candidates examined before giving up
    int workers = 0;
};

struct CandidateEvidence {
    std::vector<std::size_t> F;
    Rat margin; // worst margin over E
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::NotFound;
    std::optional<Certificate> certificate; // set when Found
    bool exhaustive = false;                // full family examined
    std::uint64_t examined = 0;
    std::uint64_t skipped_undefined = 0; // candidates with undefined products
    std::vector<CandidateEvidence> closest; // best non-valid candidates (≤ 10)
};

// Search for a Følner-type certificate F with margin >= 0 for every g ∈ E.
//
//  - Exhaustive: all nonempty subsets of `ground` with |F| <= size_cap, in
//    ascending mask order; among valid candidates the best by
//    (max min-margin, then lexicographically least F) is returned.
//  - BallGrowing: word balls of increasing radius (enumerated balls) or
//    E-generated Cayley balls (finite tables); first valid wins.
//  - GreedyLocal: hill climbing from {e} by single-element toggles,
//    accepting non-decreasing worst margin; first valid wins.
//
// NotFound (with `exhaustive` evidence and the closest candidates) is
// distinct from BudgetExhausted (budget ran out before the family did).
SearchOutcome folner_search(const MetricGroup& group, const std::vector<std::size_t>& E,
                            const Rat& theta, const Rat& q, bool closed,
                            const SearchConfig& config);

// ----------------------------------------------------------------- schema --

struct SchemaConfig {
    int k_max = 4;
    std::vector<std::size_t> ground;                 // empty → all elements
    std::vector<std::vector<std::size_t>> y_tuples;  // explicit tuples; empty → sample
    int tuple_len = 1;
    std::size_t tuple_samples = 4;
    std::uint64_t seed = 0;
    std::uint64_t budget_per_k = 1'000'000;
};

struct SchemaKEntry {
    int k = 0;
    Rat value{0};                  // min over F candidates of max_i φ(F, y_i)
    std::vector<std::size_t> best_F;
    bool exhaustive = false;       // every k-subset of ground examined
    std::uint64_t examined = 0;
    std::string bound_kind;        // "exact" or "upper-bound"
};

enum class TupleStatus { HoldsCertified, FailsCertified, Undetermined };

struct SchemaTupleReport {
    std::vector<std::size_t> y; // tuple elements
    std::vector<SchemaKEntry> per_k;
    TupleStatus status = TupleStatus::Undetermined;
};

enum class SchemaVerdict { CertifiedForSamples, RefutedForSample, Inconclusive };

struct SchemaReport {
    bool positive = true;
    Rat theta;
    Rat q;
    std::vector<SchemaTupleReport> tuples;
    SchemaVerdict verdict = SchemaVerdict::Inconclusive;
};

// Truncated schema evaluation: for each y-tuple and each k <= k_max,
// minimize max_i φ_{k,q,θ}(F, y_i) over k-subsets F of the ground set
// (lexicographic enumeration, capped by budget_per_k).
//
// Positive variant: a tuple holds when some k attains 0 (a certified upper
// bound); it fails-certified only when every k was exhausted over the full
// ground with k_max >= |ground| and no zero appeared. Negative variant:
// dual (a zero certifies failure; all-positive needs exhaustion to certify).
SchemaReport schema_value(const MetricGroup& group, const PhiSpec& base,
                          const SchemaConfig& config);

} // namespace mlc
