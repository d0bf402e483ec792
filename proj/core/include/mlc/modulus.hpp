#pragma once

#include "mlc/rational.hpp"

#include <utility>
#include <vector>

namespace mlc {

// Continuity modulus γ: ε ↦ δ, meaning: to move the formula value by less
// than ε it suffices to move the variable by less than γ(ε).
//
// Soundness contract (the property check_modulus tests):
//     d(a, a') <= γ(ε)  implies  |φ(a) − φ(a')| <= ε.
//
// Representation: nondecreasing piecewise-linear function through the
// origin, given by a finite breakpoint table (e_i, d_i) with 0 < e_1 < ... ,
// 0 < d_1 <= d_2 <= ..., plus a tail slope s >= 0 applied beyond the last
// breakpoint. Below e_1 the function is linear from the origin. An empty
// table is the pure line δ = s·ε; Identity is s = 1 with an empty table.
//
// All knots and values are exact rationals, and min/compose/scale are exact,
// so modulus bookkeeping never drifts.
class Modulus {
public:
    struct Point {
        Rat eps;   // input breakpoint, strictly increasing, > 0
        Rat delta; // output value at eps, > 0, nondecreasing
    };

    // δ(ε) = ε.
    static Modulus identity();
    // δ(ε) = slope·ε, slope > 0.
    static Modulus linear(const Rat& slope);
    // General table + tail slope; validates shape.
    static Modulus table(std::vector<Point> points, const Rat& tail_slope);

    Modulus() : tail_slope_(1) {} // identity by default

    bool is_identity() const { return points_.empty() && tail_slope_ == 1; }

    Rat operator()(const Rat& eps) const;
    double operator()(double eps) const;

    // Pointwise minimum (still a valid modulus; used when a variable occurs
    // in several subformulas).
    Modulus min_with(const Modulus& other) const;

    // (*this) ∘ inner : ε ↦ this(inner(ε)). Used when a term is nested
    // through a uniformly continuous function symbol.
    Modulus compose(const Modulus& inner) const;

    // ε ↦ this(r·ε) for rational r > 0.
    Modulus scale_input(const Rat& r) const;

    // ε ↦ this(ε / c) for integer c >= 1: the count-aware weakening applied
    // when a variable occurs in c additively-combined positions.
    Modulus shrink_arg(unsigned c) const { return scale_input(Rat(1) / Rat(static_cast<long>(c))); }

    const std::vector<Point>& points() const { return points_; }
    const Rat& tail_slope() const { return tail_slope_; }

    bool operator==(const Modulus& other) const {
        return tail_slope_ == other.tail_slope_ && points_.size() == other.points_.size() &&
               [&] {
                   for (std::size_t i = 0; i < points_.size(); ++i)
                       if (points_[i].eps != other.points_[i].eps ||
                           points_[i].delta != other.points_[i].delta)
                           return false;
                   return true;
               }();
    }

private:
    std::vector<Point> points_;
    Rat tail_slope_;

    void validate() const;
    // Slope of the linear piece containing ε (right-continuous choice).
    Rat value_at(const Rat& eps) const;
};

} // namespace mlc
