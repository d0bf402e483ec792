#include "mlc/hilbert.hpp"

#include "mlc/errors.hpp"
#include "mlc/version.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace mlc {

namespace {

std::string lattice_label(const std::vector<long>& key) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) os << ',';
        os << key[i];
    }
    os << ']';
    return os.str();
}

struct KeyedNet {
    BallNet net;
    std::vector<std::vector<long>> keys;
    std::map<std::vector<long>, std::size_t> index;
};

} // namespace

HilbertStructure::HilbertStructure(int dim, int ceiling) : dim_(dim), ceiling_(ceiling) {
    if (dim < 1) throw StructureError("dimension must be >= 1", std::to_string(dim));
    if (ceiling < 1) throw StructureError("sort ceiling must be >= 1", std::to_string(ceiling));
}

void HilbertStructure::check_sorted(const SortedVector& v, const char* who) const {
    if (v.coords.size() != dim_)
        throw StructureError(std::string(who) + ": wrong dimension",
                             std::to_string(v.coords.size()) + " vs " + std::to_string(dim_));
    if (v.sort < 1 || v.sort > ceiling_)
        throw StructureError(std::string(who) + ": sort out of range", std::to_string(v.sort));
}

SortedVector HilbertStructure::make(const Eigen::VectorXcd& coords, int sort) const {
    SortedVector v{coords, sort};
    check_sorted(v, "make");
    const double n = coords.norm();
    if (n > sort + kFloatTolerance)
        throw StructureError("vector norm exceeds its sort",
                             std::to_string(n) + " > " + std::to_string(sort));
    return v;
}

SortedVector HilbertStructure::zero(int sort) const {
    return make(Eigen::VectorXcd::Zero(dim_), sort);
}

SortedVector HilbertStructure::add(const SortedVector& u, const SortedVector& v) const {
    check_sorted(u, "add");
    check_sorted(v, "add");
    if (u.sort != v.sort)
        throw StructureError("add: sort mismatch (include first)",
                             std::to_string(u.sort) + " vs " + std::to_string(v.sort));
    const int target = 2 * u.sort;
    if (target > ceiling_)
        throw StructureError("add: target sort exceeds ceiling", std::to_string(target));
    return SortedVector{u.coords + v.coords, target};
}

SortedVector HilbertStructure::sub(const SortedVector& u, const SortedVector& v) const {
    check_sorted(u, "sub");
    check_sorted(v, "sub");
    if (u.sort != v.sort)
        throw StructureError("sub: sort mismatch (include first)",
                             std::to_string(u.sort) + " vs " + std::to_string(v.sort));
    const int target = 2 * u.sort;
    if (target > ceiling_)
        throw StructureError("sub: target sort exceeds ceiling", std::to_string(target));
    return SortedVector{u.coords - v.coords, target};
}

int HilbertStructure::scalar_factor(std::complex<double> c) {
    const double a = std::abs(c);
    if (!std::isfinite(a)) throw StructureError("scalar: |c| is not finite");
    // unique k >= 1 with k−1 <= |c| < k
    return static_cast<int>(std::floor(a)) + 1;
}

SortedVector HilbertStructure::scalar(std::complex<double> c, const SortedVector& v) const {
    check_sorted(v, "scalar");
    const int k = scalar_factor(c);
    const long target = static_cast<long>(k) * v.sort;
    if (target > ceiling_)
        throw StructureError("scalar: target sort exceeds ceiling", std::to_string(target));
    return SortedVector{c * v.coords, static_cast<int>(target)};
}

std::complex<double> HilbertStructure::inner(const SortedVector& u, const SortedVector& v) const {
    check_sorted(u, "inner");
    check_sorted(v, "inner");
    if (u.sort != v.sort)
        throw StructureError("inner: sort mismatch (include first)",
                             std::to_string(u.sort) + " vs " + std::to_string(v.sort));
    // ⟨u, v⟩ = Σ u_i conj(v_i): linear in the first argument.
    return (u.coords.array() * v.coords.array().conjugate()).sum();
}

double HilbertStructure::dist(const SortedVector& u, const SortedVector& v) const {
    check_sorted(u, "dist");
    check_sorted(v, "dist");
    if (u.sort != v.sort)
        throw StructureError("dist: sort mismatch (include first)",
                             std::to_string(u.sort) + " vs " + std::to_string(v.sort));
    return (u.coords - v.coords).norm();
}

SortedVector HilbertStructure::include(const SortedVector& v, int n) const {
    check_sorted(v, "include");
    if (n <= v.sort)
        throw StructureError("include: target sort must be strictly larger",
                             std::to_string(n) + " <= " + std::to_string(v.sort));
    if (n > ceiling_)
        throw StructureError("include: target sort exceeds ceiling", std::to_string(n));
    return SortedVector{v.coords, n};
}

namespace {

KeyedNet keyed_net(int dim, int ceiling, int sort, double h, std::size_t cap) {
    if (sort < 1 || sort > ceiling)
        throw StructureError("net: sort out of range", std::to_string(sort));
    if (!(h > 0) || !std::isfinite(h))
        throw StructureError("net: resolution must be positive", std::to_string(h));
    const double radius = sort + kFloatTolerance;
    const long M = static_cast<long>(std::floor(radius / h));
    const std::size_t coords = static_cast<std::size_t>(2 * dim);
    // Candidate count (2M+1)^(2·dim), saturating.
    std::size_t candidates = 1;
    for (std::size_t i = 0; i < coords; ++i) {
        const std::size_t side = static_cast<std::size_t>(2 * M + 1);
        if (candidates > 50'000'000 / side) {
            candidates = std::size_t(-1);
            break;
        }
        candidates *= side;
    }
    if (candidates == std::size_t(-1))
        throw BudgetError("net enumeration too large",
                          "resolution " + std::to_string(h) + " in dimension " +
                              std::to_string(dim));

    KeyedNet out;
    out.net.sort = sort;
    out.net.resolution = h;
    std::vector<long> key(coords, -M);
    for (;;) {
        double norm2 = 0;
        for (const long a : key) {
            const double x = h * static_cast<double>(a);
            norm2 += x * x;
        }
        if (norm2 <= radius * radius) {
            if (out.net.points.size() >= cap)
                throw BudgetError("net exceeds point cap", std::to_string(cap));
            Eigen::VectorXcd v(dim);
            for (int j = 0; j < dim; ++j)
                v[j] = std::complex<double>(h * static_cast<double>(key[2 * j]),
                                            h * static_cast<double>(key[2 * j + 1]));
            out.index.emplace(key, out.net.points.size());
            out.keys.push_back(key);
            out.net.points.push_back(std::move(v));
            out.net.labels.push_back(lattice_label(key));
        }
        // odometer
        std::size_t pos = 0;
        while (pos < coords && key[pos] == M) {
            key[pos] = -M;
            ++pos;
        }
        if (pos == coords) break;
        ++key[pos];
    }
    return out;
}

} // namespace

BallNet HilbertStructure::net(int sort, double h, std::size_t cap) const {
    return keyed_net(dim_, ceiling_, sort, h, cap).net;
}

Structure HilbertStructure::as_structure(double h, std::size_t cap) const {
    std::vector<KeyedNet> nets;
    for (int n = 1; n <= ceiling_; ++n) nets.push_back(keyed_net(dim_, ceiling_, n, h, cap));

    Structure st;
    st.bound = Rat(2 * ceiling_);
    for (int n = 1; n <= ceiling_; ++n) {
        const KeyedNet& kn = nets[static_cast<std::size_t>(n - 1)];
        SortDef sd;
        sd.name = "B" + std::to_string(n);
        sd.elements = kn.net.labels;
        sd.metric.discrete = false;
        const std::size_t sz = kn.net.points.size();
        sd.metric.table.assign(sz * sz, Rat(0));
        for (std::size_t i = 0; i < sz; ++i)
            for (std::size_t j = i + 1; j < sz; ++j) {
                const Rat d = rat_from_double((kn.net.points[i] - kn.net.points[j]).norm());
                sd.metric.table[i * sz + j] = d;
                sd.metric.table[j * sz + i] = d;
            }
        st.sorts.push_back(std::move(sd));
    }

    // Inclusions I_{mn}.
    for (int m = 1; m <= ceiling_; ++m)
        for (int n = m + 1; n <= ceiling_; ++n) {
            const KeyedNet& from = nets[static_cast<std::size_t>(m - 1)];
            const KeyedNet& to = nets[static_cast<std::size_t>(n - 1)];
            FunctionDef f;
            f.name = "incl_" + std::to_string(m) + "_" + std::to_string(n);
            f.arg_sorts = {m - 1};
            f.result_sort = n - 1;
            f.arg_moduli = {Modulus::identity()};
            for (const auto& key : from.keys)
                f.table.push_back(static_cast<std::int32_t>(to.index.at(key)));
            st.functions.push_back(std::move(f));
        }

    // add/sub where the target sort exists; grids are aligned so sums of
    // lattice points are lattice points.
    for (int n = 1; 2 * n <= ceiling_; ++n) {
        const KeyedNet& src = nets[static_cast<std::size_t>(n - 1)];
        const KeyedNet& dst = nets[static_cast<std::size_t>(2 * n - 1)];
        const std::size_t sz = src.keys.size();
        FunctionDef fa, fs;
        fa.name = "add_" + std::to_string(n);
        fs.name = "sub_" + std::to_string(n);
        fa.arg_sorts = fs.arg_sorts = {n - 1, n - 1};
        fa.result_sort = fs.result_sort = 2 * n - 1;
        fa.arg_moduli = fs.arg_moduli = {Modulus::identity(), Modulus::identity()};
        fa.table.reserve(sz * sz);
        fs.table.reserve(sz * sz);
        std::vector<long> key(static_cast<std::size_t>(2 * dim_));
        for (std::size_t i = 0; i < sz; ++i)
            for (std::size_t j = 0; j < sz; ++j) {
                for (std::size_t c = 0; c < key.size(); ++c)
                    key[c] = src.keys[i][c] + src.keys[j][c];
                fa.table.push_back(static_cast<std::int32_t>(dst.index.at(key)));
                for (std::size_t c = 0; c < key.size(); ++c)
                    key[c] = src.keys[i][c] - src.keys[j][c];
                fs.table.push_back(static_cast<std::int32_t>(dst.index.at(key)));
            }
        st.functions.push_back(std::move(fa));
        st.functions.push_back(std::move(fs));
    }

    // Origin constant per sort.
    for (int n = 1; n <= ceiling_; ++n) {
        const KeyedNet& kn = nets[static_cast<std::size_t>(n - 1)];
        FunctionDef f;
        f.name = "zero_" + std::to_string(n);
        f.result_sort = n - 1;
        f.table = {static_cast<std::int32_t>(
            kn.index.at(std::vector<long>(static_cast<std::size_t>(2 * dim_), 0)))};
        st.functions.push_back(std::move(f));
    }

    // Inner-product predicates in the affine [0, 2] encoding
    // ip(u, v) = (component + n²) / n², clamped against admission fuzz.
    for (int n = 1; n <= ceiling_; ++n) {
        const KeyedNet& kn = nets[static_cast<std::size_t>(n - 1)];
        const std::size_t sz = kn.net.points.size();
        const double n2 = static_cast<double>(n) * n;
        PredicateDef re, im;
        re.name = "ip_re_" + std::to_string(n);
        im.name = "ip_im_" + std::to_string(n);
        re.arg_sorts = im.arg_sorts = {n - 1, n - 1};
        // |Δ⟨u,v⟩| <= d(u,u')·(n+τ); normalized slope just under n keeps the
        // declared modulus sound despite the τ fuzz.
        const Modulus mod = Modulus::linear(Rat(99, 100) * n);
        re.arg_moduli = im.arg_moduli = {mod, mod};
        re.table.reserve(sz * sz);
        im.table.reserve(sz * sz);
        for (std::size_t i = 0; i < sz; ++i)
            for (std::size_t j = 0; j < sz; ++j) {
                const std::complex<double> ip =
                    (kn.net.points[i].array() * kn.net.points[j].array().conjugate()).sum();
                const double re_v = std::clamp((ip.real() + n2) / n2, 0.0, 2.0);
                const double im_v = std::clamp((ip.imag() + n2) / n2, 0.0, 2.0);
                re.table.push_back(rat_from_double(re_v));
                im.table.push_back(rat_from_double(im_v));
            }
        st.predicates.push_back(std::move(re));
        st.predicates.push_back(std::move(im));
    }

    st.validate(rat_from_double(kFloatTolerance));
    return st;
}

} // namespace mlc
