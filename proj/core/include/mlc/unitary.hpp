#pragma once

#include "mlc/group.hpp"
#include "mlc/hilbert.hpp"
#include "mlc/modulus.hpp"
#include "mlc/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mlc {

// Unitary representation of a MetricGroup on C^dim, stored as one matrix per
// group element (possibly partial for enumerated balls), plus the declared
// continuity modulus F of the action G × B_1 → B_1. The B_i extension uses
// F_i(ε) = F(ε/i).
class UnitaryRep {
  public:
    // Matrices keyed by element label; every key must name a group element.
    static UnitaryRep from_matrices(const MetricGroup& group, int dim,
                                    const std::map<std::string, Eigen::MatrixXcd>& matrices,
                                    Modulus f = {});

    // Matrices on a generating set, completed over all products reachable
    // from the identity (BFS; identity gets I). Elements not reached stay
    // undefined. Conflicting completions surface in check_rep.
    static UnitaryRep from_generators(const MetricGroup& group, int dim,
                                      const std::map<std::string, Eigen::MatrixXcd>& generators,
                                      Modulus f = {});

    const MetricGroup& group() const { return *group_; }
    int dim() const { return dim_; }
    const Modulus& modulus() const { return modulus_; }

    bool defined(std::size_t g) const { return bool(matrices_[g]); }
    const Eigen::MatrixXcd& matrix(std::size_t g) const; // throws RepError when undefined
    std::vector<std::size_t> defined_elements() const;

  private:
    UnitaryRep(const MetricGroup& group, int dim, Modulus f);
    const MetricGroup* group_;
    int dim_;
    Modulus modulus_;
    std::vector<std::optional<Eigen::MatrixXcd>> matrices_;
};

// All-identity matrices on every element.
UnitaryRep trivial_rep(const MetricGroup& group, int dim);

// Left regular representation on L²(G) (FiniteTable only): permutation
// matrices e_h ↦ e_{gh}.
UnitaryRep regular_rep(const MetricGroup& group);

// Regular representation restricted to the orthogonal complement of the
// constants (dim |G|−1), via a fixed deterministic orthonormal basis.
UnitaryRep regular_rep_complement(const MetricGroup& group);

// Character family on an enumerated ball of Z (labels parse as integers):
// r(x) = diag(e^{i·thetas[j]·x}).
UnitaryRep z_character_rep(const MetricGroup& group, const std::vector<double>& thetas,
                           Modulus f = {});

// ------------------------------------------------------------- validation --

struct RepCheckReport {
    bool pass = false;
    double tol = 0;
    double worst_unitarity = 0; // max ‖U*U − I‖_F over defined elements
    std::string worst_unitarity_at;
    double worst_hom = 0; // max ‖r(g)r(h) − r(gh)‖_F over defined products
    std::string worst_hom_at;
    double identity_residual = 0; // ‖r(e) − I‖_F
};

RepCheckReport check_rep(const UnitaryRep& rep, double tol = 1e-6);

struct FContinuityReport {
    bool pass = false;
    double worst_excess = 0; // max over premise-true cases of residual − ε
    std::string witness;
    std::vector<double> eps_grid;
    std::size_t samples = 0;
    bool extension_pass = false; // F_i(ε) = F(ε/i) spot-check on B_i, i = 2, 3
};

// For sampled v ∈ B_1 and all defined pairs (g, h): d(g, h) < F(ε) must give
// ‖r(g)v − r(h)v‖ ≤ ε on every ε of the grid (default 1, 1/2, ..., 1/16).
FContinuityReport check_F_continuity(const UnitaryRep& rep, std::size_t samples = 16,
                                     std::vector<double> eps_grid = {}, std::uint64_t seed = 0);

// ------------------------------------------------------------ invariance --

struct FixedSpace {
    int dim = 0;
    Eigen::MatrixXcd basis;           // orthonormal columns spanning the fixed space
    std::vector<double> eigenvalues;  // spectrum of Δ = Σ (I−r(x))*(I−r(x)), ascending
};

// Joint fixed space {v : r(x)v = v for all x}. `gens` empty: FiniteTable
// groups use every element; enumerated balls require an explicit generating
// set (RepError otherwise).
FixedSpace fixed_space(const UnitaryRep& rep, const std::vector<std::size_t>& gens = {});

struct InvarianceReport {
    std::vector<std::size_t> Q;
    double lo = 0; // √(λ_min(Δ_Q)/|Q|) <= ρ(Q)
    double hi = 0; // upper bound at the witness vector
    Eigen::VectorXcd witness;
    int fixed_space_dim = 0; // joint fixed space of Q's operators
    std::string method;      // "eigen" or "refined"
};

// Bounds ρ(Q) = min over unit v of max_{x∈Q} ‖r(x)v − v‖ through the
// Hermitian operator Δ_Q. Base hi = √λ_min; refinement replaces it with the
// actual max residual at the witness (always <= √λ_min). lo = hi when |Q| = 1.
InvarianceReport epsilon_invariant_radius(const UnitaryRep& rep,
                                          const std::vector<std::size_t>& Q, bool refine = true);

struct KazhdanReport {
    bool pass = false;
    std::size_t samples = 0;
    double min_max_residual = 0; // min over samples of max_{g∈G} ‖r(g)v − v‖
    double threshold = 0;        // √2 − tol
    std::string witness; // sample index + element of the minimal max-residual
};

// (G, √2) is a Kazhdan pair: with trivial fixed space every unit vector must
// satisfy max_{g∈G} ‖r(g)v − v‖ >= √2. FiniteTable only; RepError when the
// fixed space is nontrivial (check not applicable).
KazhdanReport kazhdan_pair_check(const UnitaryRep& rep, std::size_t samples = 100,
                                 double tol = 1e-9, std::uint64_t seed = 0);

struct NivReport {
    int value = 0;        // 0 or 1
    std::string tag;      // "kazhdan-pair" or "invariant-witness"
    double sampled_estimate = 0; // estimate of sup_v inf_x (1 ∸ (‖xv−v‖ + |1−‖v‖|))
    std::size_t samples = 0;
};

// NIV condition sup_{v∈B_1} inf_{x∈G} (1 ∸ (‖r(x)v − v‖ + |1 − ‖v‖|)):
// exactly 0 when the fixed space is trivial (Kazhdan inequality), exactly 1
// otherwise (invariant unit witness). FiniteTable only.
NivReport niv_value(const UnitaryRep& rep, std::size_t samples = 200, std::uint64_t seed = 0);

// --------------------------------------------------------- K_δ truncation --

struct KDeltaConfig {
    Rat delta{1, 2};
    int k = 1;
    int m = 1; // ball sort of the inf
    int n = 4; // invariance level 1/n
    std::vector<std::vector<std::size_t>> tuples; // explicit; empty → enumerate
    std::size_t tuple_samples = 16; // sampled tuples when enumeration exceeds budget
    std::uint64_t seed = 0;
    std::uint64_t budget = 100000; // max enumerated tuples
    bool net_refine = false;       // add lattice-net candidates (small dims only)
    double net_h = 0.5;
};

struct KDeltaTupleResult {
    std::vector<std::size_t> x;
    double residual = 0;
};

struct KDeltaReport {
    Rat delta;
    int k = 1, m = 1, n = 4;
    bool exhaustive = false; // all k-tuples of the carrier were evaluated
    std::vector<KDeltaTupleResult> tuples;
    double worst_residual = 0;
    std::vector<std::size_t> worst_tuple;
    bool holds = false; // worst residual <= τ
    std::string method; // "eigen" or "eigen+net"
};

// Truncated axiom of Definition 4.3: for each tuple (x_1..x_k), evaluates
// inf over v ∈ B_m of max over x ∈ ⋃ x_i·K_δ of
//     max(‖r(x)v − v‖ ∸ 1/n, |1 − ‖v‖|),
// with K_δ the closed δ-ball at the identity. The inf uses unit-scaled
// eigenvector candidates of Δ over ⋃ x_i·K_δ (the |1−‖v‖| term drives the
// optimum to the sphere), optionally refined by a lattice net.
KDeltaReport kdelta_axiom_check(const UnitaryRep& rep, const KDeltaConfig& config);

struct RefuteOutcome {
    bool found = false;
    std::size_t rep_index = 0; // valid when found
    InvarianceReport report;   // of the witness rep
};

// First representation in the family with hi < ε and trivial joint fixed
// space (computed over Q for enumerated groups, the whole group otherwise):
// a counterexample to "(Q, ε) is a Kazhdan pair" relative to this family.
RefuteOutcome refute_kazhdan_set(const std::vector<UnitaryRep>& reps,
                                 const std::vector<std::size_t>& Q, double eps);

} // namespace mlc
