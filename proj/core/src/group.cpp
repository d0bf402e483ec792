#include "mlc/group.hpp"

#include "mlc/errors.hpp"

#include <algorithm>
#include <deque>

namespace mlc {

// ------------------------------------------------------------ IntMatrix --

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Int(0));
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::optional<IntMatrix> IntMatrix::parse(const std::string& text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') return std::nullopt;
    std::vector<std::vector<Int>> rows(1);
    std::string cur;
    auto flush = [&]() -> bool {
        if (cur.empty()) return false;
        try {
            rows.back().push_back(Int(cur));
        } catch (...) {
            return false;
        }
        cur.clear();
        return true;
    };
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
        const char c = text[i];
        if (c == ',') {
            if (!flush()) return std::nullopt;
        } else if (c == ';') {
            if (!flush()) return std::nullopt;
            rows.emplace_back();
        } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            cur += c;
        } else if (c == ' ') {
            continue;
        } else {
            return std::nullopt;
        }
    }
    if (!flush()) return std::nullopt;
    const std::size_t n = rows.size();
    IntMatrix m;
    m.n = static_cast<int>(n);
    for (const auto& r : rows) {
        if (r.size() != n) return std::nullopt;
        for (const auto& v : r) m.a.push_back(v);
    }
    return m;
}

IntMatrix IntMatrix::mul(const IntMatrix& o) const {
    IntMatrix r;
    r.n = n;
    r.a.assign(a.size(), Int(0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Int& aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += aik * o.at(k, j);
        }
    return r;
}

namespace {

Int minor_det(const IntMatrix& m, std::vector<int>& cols, int row) {
    if (static_cast<std::size_t>(row) == static_cast<std::size_t>(m.n)) return Int(1);
    // Laplace expansion along `row` using the remaining columns.
    Int sum(0);
    int sign = 1;
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
        const int col = cols[ci];
        if (col < 0) continue;
        const Int& v = m.at(row, col);
        if (v != 0) {
            cols[ci] = -1;
            sum += sign * v * minor_det(m, cols, row + 1);
            cols[ci] = col;
        }
        sign = -sign;
    }
    return sum;
}

} // namespace

Int IntMatrix::det() const {
    std::vector<int> cols(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) cols[static_cast<std::size_t>(i)] = i;
    return minor_det(*this, cols, 0);
}

IntMatrix IntMatrix::inverse_unimodular() const {
    const Int d = det();
    if (d != 1 && d != -1)
        throw GroupError("matrix is not unimodular", label());
    IntMatrix inv;
    inv.n = n;
    inv.a.assign(a.size(), Int(0));
    // adj(A)_{ji} = (−1)^{i+j} · minor_{ij}; A⁻¹ = adj(A) / det.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMatrix sub;
            sub.n = n - 1;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    sub.a.push_back(at(r, c));
                }
            }
            Int cof = sub.n == 0 ? Int(1) : sub.det();
            if ((i + j) % 2 == 1) cof = -cof;
            inv.at(j, i) = cof * d; // divide by det = multiply by ±1
        }
    return inv;
}

std::string IntMatrix::label() const {
    std::string out = "[";
    for (int i = 0; i < n; ++i) {
        if (i) out += ";";
        for (int j = 0; j < n; ++j) {
            if (j) out += ",";
            out += at(i, j).str();
        }
    }
    return out + "]";
}

// ----------------------------------------------------------- MetricGroup --

std::optional<std::size_t> MetricGroup::find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> MetricGroup::mul(std::size_t x, std::size_t y) const {
    if (kind_ == Kind::FiniteTable) {
        const auto v = mul_table_[x * labels_.size() + y];
        return static_cast<std::size_t>(v);
    }
    return lookup_product(x, y);
}

namespace {

std::vector<std::int8_t> free_reduce_concat(const std::vector<std::int8_t>& u,
                                            const std::vector<std::int8_t>& v) {
    std::vector<std::int8_t> out(u);
    for (std::int8_t l : v) {
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

std::string free_label(const std::vector<std::int8_t>& w) {
    if (w.empty()) return "e";
    std::string out;
    for (std::int8_t l : w)
        out += l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1);
    return out;
}

std::string z_label(const std::vector<long long>& c) {
    if (c.size() == 1) return std::to_string(c[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(c[i]);
    }
    return out + ")";
}

} // namespace

std::optional<std::size_t> MetricGroup::lookup_product(std::size_t x, std::size_t y) const {
    std::string key;
    switch (family_) {
    case BallFamilySpec::Family::Free:
        key = free_label(free_reduce_concat(free_words_[x], free_words_[y]));
        break;
    case BallFamilySpec::Family::ZPow: {
        std::vector<long long> s(z_coords_[x]);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += z_coords_[y][i];
        key = z_label(s);
        break;
    }
    case BallFamilySpec::Family::MatrixGen:
        key = matrices_[x].mul(matrices_[y]).label();
        break;
    }
    return find(key);
}

std::size_t MetricGroup::inv(std::size_t x) const {
    if (kind_ == Kind::FiniteTable) return static_cast<std::size_t>(inv_table_[x]);
    std::string key;
    switch (family_) {
    case BallFamilySpec::Family::Free: {
        std::vector<std::int8_t> w(free_words_[x].rbegin(), free_words_[x].rend());
        for (auto& l : w) l = static_cast<std::int8_t>(-l);
        key = free_label(w);
        break;
    }
    case BallFamilySpec::Family::ZPow: {
        std::vector<long long> c(z_coords_[x]);
        for (auto& v : c) v = -v;
        key = z_label(c);
        break;
    }
    case BallFamilySpec::Family::MatrixGen:
        key = matrices_[x].inverse_unimodular().label();
        break;
    }
    auto i = find(key);
    if (!i)
        throw GroupError("inverse escapes the enumerated ball", labels_[x]);
    return *i;
}

bool MetricGroup::check_biinvariance(std::string* witness) const {
    const std::size_t n = size();
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y) {
                const Rat dxy = dist(x, y);
                const auto ux = mul(u, x), uy = mul(u, y);
                if (ux && uy && dist(*ux, *uy) != dxy) {
                    if (witness)
                        *witness = "d(" + labels_[u] + "*" + labels_[x] + ", " + labels_[u] + "*" +
                                   labels_[y] + ") != d(" + labels_[x] + ", " + labels_[y] + ")";
                    return false;
                }
                const auto xu = mul(x, u), yu = mul(y, u);
                if (xu && yu && dist(*xu, *yu) != dxy) {
                    if (witness)
                        *witness = "d(" + labels_[x] + "*" + labels_[u] + ", " + labels_[y] + "*" +
                                   labels_[u] + ") != d(" + labels_[x] + ", " + labels_[y] + ")";
                    return false;
                }
            }
    return true;
}

bool MetricGroup::check_abelian(std::string* witness) const {
    const std::size_t n = size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            const auto xy = mul(x, y), yx = mul(y, x);
            if (xy && yx && *xy != *yx) {
                if (witness) *witness = labels_[x] + "*" + labels_[y] + " != " + labels_[y] + "*" + labels_[x];
                return false;
            }
        }
    return true;
}

std::vector<std::size_t> MetricGroup::word_ball(int r) const {
    if (kind_ != Kind::EnumeratedBall)
        throw GroupError("word_ball is only defined for enumerated balls");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (word_length_[i] <= r) out.push_back(i);
    return out;
}

std::vector<std::size_t> MetricGroup::ball(const BallSpec& spec) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
        const Rat d = dist(identity_, i);
        if (spec.closed ? d <= spec.radius : d < spec.radius) out.push_back(i);
    }
    return out;
}

Rat MetricGroup::dstar(std::size_t x, std::size_t y) const {
    if (kind_ != Kind::FiniteTable)
        throw GroupError("d* requires a finite group table");
    const std::size_t n = size();
    Rat best(0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            const std::size_t uxv = *mul(*mul(u, x), v);
            const std::size_t uyv = *mul(*mul(u, y), v);
            const Rat d = dist(uxv, uyv);
            if (d > best) best = d;
        }
    return best;
}

MetricGroup MetricGroup::biinvariantized() const {
    if (kind_ != Kind::FiniteTable)
        throw GroupError("biinvariantize requires a finite group table",
                         "enumerated balls admit no sup over the full group");
    MetricGroup g(*this);
    const std::size_t n = size();
    MetricTable m;
    m.discrete = false;
    m.table.assign(n * n, Rat(0));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            Rat d = dstar(x, y);
            m.table[x * n + y] = d;
            m.table[y * n + x] = std::move(d);
        }
    g.metric_ = std::move(m);
    g.assertions["biinvariant"] = true;
    return g;
}

MetricGroup MetricGroup::make_finite(std::vector<std::string> labels,
                                     std::vector<std::int32_t> mul_table,
                                     const std::string& identity_label, MetricTable metric,
                                     Rat bound) {
    MetricGroup g;
    g.kind_ = Kind::FiniteTable;
    const std::size_t n = labels.size();
    if (n == 0) throw GroupError("group must be nonempty");
    if (mul_table.size() != n * n) throw GroupError("multiplication table size mismatch");
    g.labels_ = std::move(labels);
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.index_.emplace(g.labels_[i], i).second)
            throw GroupError("duplicate element label", g.labels_[i]);
    }
    for (const auto v : mul_table)
        if (v < 0 || v >= static_cast<std::int32_t>(n))
            throw GroupError("multiplication table entry out of range", std::to_string(v));
    g.mul_table_ = std::move(mul_table);

    auto idx = g.find(identity_label);
    if (!idx) throw GroupError("identity label not found", identity_label);
    g.identity_ = *idx;

    auto tab = [&](std::size_t x, std::size_t y) {
        return static_cast<std::size_t>(g.mul_table_[x * n + y]);
    };
    for (std::size_t x = 0; x < n; ++x) {
        if (tab(g.identity_, x) != x || tab(x, g.identity_) != x)
            throw GroupError("identity law fails", g.labels_[x]);
    }
    // Associativity (O(n³) exact check) and inverses.
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z)
                if (tab(tab(x, y), z) != tab(x, tab(y, z)))
                    throw GroupError("associativity fails",
                                     "(" + g.labels_[x] + "*" + g.labels_[y] + ")*" + g.labels_[z]);
    g.inv_table_.assign(n, -1);
    for (std::size_t x = 0; x < n; ++x) {
        bool found = false;
        for (std::size_t y = 0; y < n; ++y)
            if (tab(x, y) == g.identity_ && tab(y, x) == g.identity_) {
                g.inv_table_[x] = static_cast<std::int32_t>(y);
                found = true;
                break;
            }
        if (!found) throw GroupError("element has no inverse", g.labels_[x]);
    }

    g.metric_ = std::move(metric);
    g.bound_ = std::move(bound);

    // Metric sanity via the structure validator semantics (exact).
    Structure check;
    check.bound = g.bound_;
    check.sorts.push_back({"G", g.labels_, g.metric_});
    check.validate(Rat(0));
    return g;
}

MetricGroup MetricGroup::enumerate_ball(const BallFamilySpec& spec) {
    MetricGroup g;
    g.kind_ = Kind::EnumeratedBall;
    g.family_ = spec.family;
    g.word_radius_ = spec.radius;
    g.metric_ = MetricTable{}; // discrete
    g.bound_ = Rat(1);
    if (spec.radius < 0) throw GroupError("enumeration radius must be nonnegative");

    auto add = [&](const std::string& label, int depth) -> bool {
        if (g.index_.count(label)) return false;
        if (g.labels_.size() >= spec.cap)
            throw BudgetError("enumeration cap exceeded",
                              "cap=" + std::to_string(spec.cap) + " at radius " + std::to_string(depth));
        g.index_.emplace(label, g.labels_.size());
        g.labels_.push_back(label);
        g.word_length_.push_back(depth);
        return true;
    };

    switch (spec.family) {
    case BallFamilySpec::Family::Free: {
        if (spec.rank < 1 || spec.rank > 26)
            throw GroupError("free-group rank must be between 1 and 26");
        g.free_rank_ = spec.rank;
        g.free_words_.push_back({});
        add("e", 0);
        std::deque<std::size_t> frontier{0};
        for (int depth = 1; depth <= spec.radius; ++depth) {
            std::deque<std::size_t> next;
            for (std::size_t cur : frontier) {
                for (int s = 1; s <= spec.rank; ++s) {
                    for (int sign : {+1, -1}) {
                        const auto l = static_cast<std::int8_t>(sign * s);
                        const auto& w = g.free_words_[cur];
                        if (!w.empty() && w.back() == -l) continue;
                        std::vector<std::int8_t> nw(w);
                        nw.push_back(l);
                        const std::string lbl = free_label(nw);
                        if (add(lbl, depth)) {
                            g.free_words_.push_back(std::move(nw));
                            next.push_back(g.labels_.size() - 1);
                        }
                    }
                }
            }
            frontier = std::move(next);
        }
        break;
    }
    case BallFamilySpec::Family::ZPow: {
        if (spec.dim < 1) throw GroupError("Z^d dimension must be positive");
        g.z_dim_ = spec.dim;
        g.z_coords_.push_back(std::vector<long long>(static_cast<std::size_t>(spec.dim), 0));
        add(z_label(g.z_coords_[0]), 0);
        std::deque<std::size_t> frontier{0};
        for (int depth = 1; depth <= spec.radius; ++depth) {
            std::deque<std::size_t> next;
            for (std::size_t cur : frontier) {
                for (int axis = 0; axis < spec.dim; ++axis) {
                    for (int sign : {+1, -1}) {
                        std::vector<long long> c(g.z_coords_[cur]);
                        c[static_cast<std::size_t>(axis)] += sign;
                        const std::string lbl = z_label(c);
                        if (add(lbl, depth)) {
                            g.z_coords_.push_back(std::move(c));
                            next.push_back(g.labels_.size() - 1);
                        }
                    }
                }
            }
            frontier = std::move(next);
        }
        break;
    }
    case BallFamilySpec::Family::MatrixGen: {
        if (spec.generators.empty())
            throw GroupError("matrix family requires at least one generator");
        const int dim = spec.generators.front().n;
        if (dim < 1 || dim > 6)
            throw GroupError("matrix dimension must be between 1 and 6");
        std::vector<IntMatrix> gens;
        for (const auto& m : spec.generators) {
            if (m.n != dim) throw GroupError("generator dimensions differ", m.label());
            const Int d = m.det();
            if (d != 1 && d != -1)
                throw GroupError("generator determinant must be ±1", m.label());
            gens.push_back(m);
            IntMatrix inv = m.inverse_unimodular();
            if (!(inv == m)) gens.push_back(std::move(inv));
        }
        g.matrices_.push_back(IntMatrix::identity(dim));
        add(g.matrices_[0].label(), 0);
        std::deque<std::size_t> frontier{0};
        for (int depth = 1; depth <= spec.radius; ++depth) {
            std::deque<std::size_t> next;
            for (std::size_t cur : frontier) {
                for (const auto& gen : gens) {
                    IntMatrix prod = g.matrices_[cur].mul(gen);
                    const std::string lbl = prod.label();
                    if (add(lbl, depth)) {
                        g.matrices_.push_back(std::move(prod));
                        next.push_back(g.labels_.size() - 1);
                    }
                }
            }
            frontier = std::move(next);
        }
        break;
    }
    }
    g.identity_ = 0;
    return g;
}

Structure MetricGroup::as_structure() const {
    const std::size_t n = size();
    if (n > 4096)
        throw GroupError("group too large to realize as a structure",
                         std::to_string(n) + " elements");
    Structure st;
    st.bound = bound_;
    st.sorts.push_back({"G", labels_, metric_});

    const bool bi = check_biinvariance();

    // Conservative linear modulus from an exact table scan: the largest c
    // with d(out, out') >= c·d(in, in') never exceeded, inverted. With
    // bi-invariance both translations are isometries, so Identity is exact
    // (and inversion is an isometry as well).
    auto scan_slope = [&](bool left_arg) {
        Rat best(-1);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = x + 1; y < n; ++y) {
                    const auto a = left_arg ? mul(x, u) : mul(u, x);
                    const auto b = left_arg ? mul(y, u) : mul(u, y);
                    if (!a || !b) continue;
                    const Rat dout = dist(*a, *b);
                    if (dout == 0) continue;
                    const Rat ratio = dist(x, y) / dout;
                    if (best < 0 || ratio < best) best = ratio;
                }
        return best <= 0 ? Modulus::identity() : Modulus::linear(best);
    };

    Modulus mul_m0 = bi ? Modulus::identity() : scan_slope(true);
    Modulus mul_m1 = bi ? Modulus::identity() : scan_slope(false);
    Modulus inv_m = Modulus::identity();
    if (!bi) {
        Rat best(-1);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y) {
                const Rat dout = dist(inv(x), inv(y));
                if (dout == 0) continue;
                const Rat ratio = dist(x, y) / dout;
                if (best < 0 || ratio < best) best = ratio;
            }
        inv_m = best <= 0 ? Modulus::identity() : Modulus::linear(best);
    }

    FunctionDef mulf;
    mulf.name = "mul";
    mulf.arg_sorts = {0, 0};
    mulf.result_sort = 0;
    mulf.arg_moduli = {mul_m0, mul_m1};
    mulf.table.assign(n * n, -1);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (auto p = mul(x, y)) mulf.table[x * n + y] = static_cast<std::int32_t>(*p);

    FunctionDef invf;
    invf.name = "inv";
    invf.arg_sorts = {0};
    invf.result_sort = 0;
    invf.arg_moduli = {inv_m};
    invf.table.assign(n, -1);
    for (std::size_t x = 0; x < n; ++x)
        invf.table[x] = static_cast<std::int32_t>(inv(x));

    FunctionDef ef;
    ef.name = "e";
    ef.result_sort = 0;
    ef.table = {static_cast<std::int32_t>(identity_)};

    st.functions = {std::move(mulf), std::move(invf), std::move(ef)};
    return st;
}

} // namespace mlc
