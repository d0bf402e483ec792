#include "mlc/modulus.hpp"

#include "mlc/errors.hpp"

#include <algorithm>

namespace mlc {

Modulus Modulus::identity() { return Modulus(); }

Modulus Modulus::linear(const Rat& slope) {
    if (slope <= 0) throw Error("modulus slope must be positive", rat_to_string(slope));
    Modulus m;
    m.tail_slope_ = slope;
    return m;
}

Modulus Modulus::table(std::vector<Point> points, const Rat& tail_slope) {
    Modulus m;
    m.points_ = std::move(points);
    m.tail_slope_ = tail_slope;
    m.validate();
    return m;
}

void Modulus::validate() const {
    if (tail_slope_ < 0) throw Error("modulus tail slope must be nonnegative");
    Rat prev_e(0), prev_d(0);
    for (const auto& p : points_) {
        if (p.eps <= prev_e)
            throw Error("modulus breakpoints must be strictly increasing and positive",
                        rat_to_string(p.eps));
        if (p.delta <= 0 || p.delta < prev_d)
            throw Error("modulus values must be positive and nondecreasing",
                        rat_to_string(p.delta));
        prev_e = p.eps;
        prev_d = p.delta;
    }
    if (points_.empty() && tail_slope_ == 0)
        throw Error("modulus must be positive for positive arguments");
}

Rat Modulus::value_at(const Rat& eps) const {
    if (eps <= 0) return Rat(0);
    if (points_.empty()) return tail_slope_ * eps;
    if (eps <= points_.front().eps)
        return points_.front().delta * eps / points_.front().eps;
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (eps <= points_[i].eps) {
            const auto& a = points_[i - 1];
            const auto& b = points_[i];
            return a.delta + (b.delta - a.delta) * (eps - a.eps) / (b.eps - a.eps);
        }
    }
    const auto& last = points_.back();
    return last.delta + tail_slope_ * (eps - last.eps);
}

Rat Modulus::operator()(const Rat& eps) const { return value_at(eps); }

double Modulus::operator()(double eps) const {
    return rat_to_double(value_at(rat_from_double(eps)));
}

namespace {

// All input breakpoints of m (not including origin).
void collect_knots(const Modulus& m, std::vector<Rat>& out) {
    for (const auto& p : m.points()) out.push_back(p.eps);
}

std::vector<Rat> sorted_unique(std::vector<Rat> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Slope of m on the piece strictly beyond its last knot.
Rat final_slope(const Modulus& m) { return m.tail_slope(); }

} // namespace

Modulus Modulus::min_with(const Modulus& other) const {
    if (is_identity() && other.is_identity()) return identity();

    std::vector<Rat> knots;
    collect_knots(*this, knots);
    collect_knots(other, knots);
    knots = sorted_unique(std::move(knots));

    // Both functions are linear on each cell of the union grid; a crossing
    // inside a cell adds one knot. The cell [0, first] needs no crossing
    // check: both pieces are lines through the origin there, so the min is
    // again a line through the origin.
    std::vector<Rat> extra;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const Rat &x0 = knots[i], &x1 = knots[i + 1];
        const Rat a0 = value_at(x0), a1 = value_at(x1);
        const Rat b0 = other.value_at(x0), b1 = other.value_at(x1);
        const Rat d0 = a0 - b0, d1 = a1 - b1;
        if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
            // linear interpolation crossing
            extra.push_back(x0 + (x1 - x0) * d0 / (d0 - d1));
        }
    }
    // Beyond the last knot both are affine: possibly one more crossing.
    if (!knots.empty()) {
        const Rat& L = knots.back();
        const Rat va = value_at(L), vb = other.value_at(L);
        const Rat sa = final_slope(*this), sb = final_slope(other);
        if (sa != sb) {
            // Lines va + sa·t and vb + sb·t (t = ε − L) cross at t* > 0?
            const Rat t = (vb - va) / (sa - sb);
            if (t > 0) extra.push_back(L + t);
            // After the crossing the smaller-slope line is the min forever.
        }
    }
    for (auto& k : extra) knots.push_back(std::move(k));
    knots = sorted_unique(std::move(knots));

    std::vector<Point> pts;
    pts.reserve(knots.size());
    for (const auto& k : knots)
        pts.push_back({k, rat_min(value_at(k), other.value_at(k))});

    // Tail slope: whichever function is smaller just beyond the final knot
    // stays smaller (no further crossings), so take its slope; on a tie of
    // values take the smaller slope.
    Rat tail_slope;
    if (knots.empty()) {
        tail_slope = rat_min(final_slope(*this), final_slope(other));
    } else {
        const Rat& L = knots.back();
        const Rat va = value_at(L), vb = other.value_at(L);
        if (va < vb)
            tail_slope = final_slope(*this);
        else if (vb < va)
            tail_slope = final_slope(other);
        else
            tail_slope = rat_min(final_slope(*this), final_slope(other));
    }

    return Modulus::table(std::move(pts), tail_slope);
}

Modulus Modulus::compose(const Modulus& inner) const {
    if (is_identity()) return inner;
    if (inner.is_identity()) return *this;

    // Knots of the composition: knots of inner, plus preimages under inner
    // of the knots of *this*. inner is nondecreasing piecewise linear, so
    // preimages are computed per piece.
    std::vector<Rat> knots;
    collect_knots(inner, knots);

    // Build inner's piece list as (x0, x1, y0, y1) with x1 possibly "inf".
    struct Piece {
        Rat x0, y0, slope;
        Rat x1;      // valid if bounded
        bool bounded;
    };
    std::vector<Piece> pieces;
    {
        Rat x0(0), y0(0);
        for (const auto& p : inner.points()) {
            Rat slope = (p.delta - y0) / (p.eps - x0);
            pieces.push_back({x0, y0, slope, p.eps, true});
            x0 = p.eps;
            y0 = p.delta;
        }
        pieces.push_back({x0, y0, inner.tail_slope(), Rat(0), false});
    }
    for (const auto& q : points_) { // target values to hit: q.eps
        for (const auto& pc : pieces) {
            if (pc.slope == 0) continue;
            const Rat x = pc.x0 + (q.eps - pc.y0) / pc.slope;
            if (x <= pc.x0) continue;
            if (pc.bounded && x > pc.x1) continue;
            knots.push_back(x);
        }
    }
    knots = sorted_unique(std::move(knots));

    std::vector<Point> pts;
    pts.reserve(knots.size());
    for (const auto& k : knots) pts.push_back({k, value_at(inner.value_at(k))});
    const Rat tail = tail_slope_ * inner.tail_slope();
    return Modulus::table(std::move(pts), tail);
}

Modulus Modulus::scale_input(const Rat& r) const {
    if (r <= 0) throw Error("modulus input scale must be positive", rat_to_string(r));
    if (r == 1) return *this;
    // result(ε) = this(r·ε): breakpoint inputs divide by r, values keep.
    std::vector<Point> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back({p.eps / r, p.delta});
    Modulus m;
    m.points_ = std::move(pts);
    m.tail_slope_ = tail_slope_ * r;
    m.validate();
    return m;
}

} // namespace mlc
