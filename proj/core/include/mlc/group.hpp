#pragma once

#include "mlc/rational.hpp"
#include "mlc/structure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mlc {

// Ball {x : d(e, x) <= radius} (closed) or {x : d(e, x) < radius} (open).
struct BallSpec {
    Rat radius;
    bool closed = true;
};

// Square integer matrix with exact big-integer entries; used for
// generator-specified matrix groups.
struct IntMatrix {
    int n = 0;
    std::vector<Int> a; // row-major

    static IntMatrix identity(int n);
    static std::optional<IntMatrix> parse(const std::string& text); // "[1,1;0,1]"

    const Int& at(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
    Int& at(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }

    IntMatrix mul(const IntMatrix& o) const;
    Int det() const;
    IntMatrix inverse_unimodular() const; // requires |det| = 1
    std::string label() const;
    bool operator==(const IntMatrix& o) const { return n == o.n && a == o.a; }
};

// Specification of an enumerated ball of a finitely generated group.
struct BallFamilySpec {
    enum class Family { Free, ZPow, MatrixGen };
    Family family = Family::Free;
    int rank = 2;                      // Free: generator count (1..26)
    int dim = 1;                       // ZPow: Z^dim
    std::vector<IntMatrix> generators; // MatrixGen
    int radius = 2;                    // word-length enumeration radius
    std::size_t cap = 1'000'000;       // element-count budget; exceeded → GroupError
};

// Finite group with a rational metric table, or a finite radius-R ball of a
// finitely generated infinite group with the discrete metric. Elements are
// addressed by dense indices; index 0 is the identity for enumerated balls.
class MetricGroup {
public:
    enum class Kind { FiniteTable, EnumeratedBall };

    Kind kind() const { return kind_; }
    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<std::size_t> find(const std::string& label) const;

    std::size_t identity() const { return identity_; }
    // nullopt when the product leaves an enumerated ball.
    std::optional<std::size_t> mul(std::size_t x, std::size_t y) const;
    std::size_t inv(std::size_t x) const;

    Rat dist(std::size_t x, std::size_t y) const {
        return metric_.dist(labels_.size(), x, y);
    }
    const Rat& bound() const { return bound_; }
    const MetricTable& metric() const { return metric_; }

    // Bi-invariance of the metric on all defined triples; on failure the
    // witness "(u, x, y)" with the violating side is returned.
    bool check_biinvariance(std::string* witness = nullptr) const;
    bool check_abelian(std::string* witness = nullptr) const;

    // EnumeratedBall only: enumeration radius and per-element word length.
    int word_radius() const { return word_radius_; }
    int word_length(std::size_t i) const { return word_length_[i]; }
    std::vector<std::size_t> word_ball(int r) const;

    // Metric ball around the identity, ascending element index.
    std::vector<std::size_t> ball(const BallSpec& spec) const;

    // sup_{u,v} d(u x v, u y v); FiniteTable only.
    Rat dstar(std::size_t x, std::size_t y) const;

    // FiniteTable only: replace d by d*(x, y) = sup_{u,v} d(uxv, uyv).
    MetricGroup biinvariantized() const;

    // Realize as a one-sorted logic structure: sort "G", functions mul/inv/e
    // with moduli derived from the metric (Identity when bi-invariant).
    Structure as_structure() const;

    static MetricGroup make_finite(std::vector<std::string> labels,
                                   std::vector<std::int32_t> mul_table,
                                   const std::string& identity_label, MetricTable metric,
                                   Rat bound);
    static MetricGroup enumerate_ball(const BallFamilySpec& spec);

    // Declared expected properties (loaded from JSON; checked by tooling):
    // e.g. {"biinvariant": true, "abelian": false}.
    std::map<std::string, bool> assertions;

private:
    Kind kind_ = Kind::FiniteTable;
    std::vector<std::string> labels_;
    std::map<std::string, std::size_t> index_;
    std::size_t identity_ = 0;
    MetricTable metric_;
    Rat bound_{1};

    // FiniteTable: dense total multiplication and inverse tables.
    std::vector<std::int32_t> mul_table_;
    std::vector<std::int32_t> inv_table_;

    // EnumeratedBall: canonical element data per family.
    BallFamilySpec::Family family_ = BallFamilySpec::Family::Free;
    int word_radius_ = -1;
    std::vector<int> word_length_;
    std::vector<std::vector<std::int8_t>> free_words_;   // Free: reduced words
    std::vector<std::vector<long long>> z_coords_;       // ZPow
    std::vector<IntMatrix> matrices_;                    // MatrixGen
    int free_rank_ = 0;
    int z_dim_ = 0;

    std::optional<std::size_t> lookup_product(std::size_t x, std::size_t y) const;
};

} // namespace mlc
