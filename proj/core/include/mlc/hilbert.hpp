#pragma once

#include "mlc/rational.hpp"
#include "mlc/structure.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace mlc {

// A vector together with the ball sort it inhabits: ‖coords‖ <= sort + τ.
struct SortedVector {
    Eigen::VectorXcd coords;
    int sort = 1;
};

// Finite net of a ball sort: points h·z (z an integer lattice vector over the
// 2·dim real coordinates) of norm <= sort + τ, in odometer order.
struct BallNet {
    int sort = 1;
    double resolution = 1.0;
    std::vector<Eigen::VectorXcd> points;
    std::vector<std::string> labels; // integer lattice coordinates, e.g. "[1,-2]"
};

// Many-sorted presentation of C^dim through nested ball sorts B_1..B_ceiling,
// B_n = {v : ‖v‖ <= n}. Operations move between sorts: add/sub double the
// sort, scalar(c, ·) multiplies it by the unique k >= 1 with k−1 <= |c| < k,
// include embeds a smaller ball into a larger one.
class HilbertStructure {
  public:
    HilbertStructure(int dim, int ceiling);

    int dim() const { return dim_; }
    int ceiling() const { return ceiling_; }

    // Admission: checks dimension, 1 <= sort <= ceiling and ‖v‖ <= sort + τ.
    SortedVector make(const Eigen::VectorXcd& coords, int sort) const;
    SortedVector zero(int sort = 1) const;

    // Equal sorts required; target sort 2n must not exceed the ceiling.
    SortedVector add(const SortedVector& u, const SortedVector& v) const;
    SortedVector sub(const SortedVector& u, const SortedVector& v) const;

    // Target sort k·m with k = floor(|c|) + 1 (the unique k−1 <= |c| < k).
    SortedVector scalar(std::complex<double> c, const SortedVector& v) const;
    static int scalar_factor(std::complex<double> c);

    // Hermitian inner product ⟨u, v⟩ = Σ u_i · conj(v_i), linear in the first
    // argument; equal sorts required. Value range [−n², n²] per component.
    std::complex<double> inner(const SortedVector& u, const SortedVector& v) const;

    static double norm(const SortedVector& v) { return v.coords.norm(); }
    // d(u, v) = √⟨u−v, u−v⟩; equal sorts required.
    double dist(const SortedVector& u, const SortedVector& v) const;

    // I_{mn}, n > m: same coordinates, larger sort.
    SortedVector include(const SortedVector& v, int n) const;

    // Deterministic finite net for one ball sort at resolution h.
    BallNet net(int sort, double h, std::size_t cap = 20000) const;

    // Realize the ball sorts as a finite metric structure over shared-grid
    // nets: sorts B1..B_ceiling, inclusion functions, add/sub where the
    // target sort exists, and inner-product predicates in the affine
    // encoding ip(u,v) = (⟨u,v⟩_component + n²) / n² ∈ [0, 2]. Metric bound
    // D = 2·ceiling. Scalar maps are omitted: they do not preserve nets.
    Structure as_structure(double h, std::size_t cap = 512) const;

  private:
    void check_sorted(const SortedVector& v, const char* who) const;
    int dim_;
    int ceiling_;
};

} // namespace mlc
