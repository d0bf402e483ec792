#include "mlc/unitary.hpp"

#include "mlc/errors.hpp"
#include "mlc/rng.hpp"
#include "mlc/version.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace mlc {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double dotminus(double a) { return a > 0 ? a : 0; }

Eigen::VectorXcd random_unit(Rng& rng, int dim) {
    Eigen::VectorXcd v(dim);
    for (;;) {
        for (int j = 0; j < dim; ++j) {
            // Box-Muller: one gaussian pair per complex coordinate.
            double u1 = rng.unit();
            while (u1 <= 0) u1 = rng.unit();
            const double u2 = rng.unit();
            const double r = std::sqrt(-2.0 * std::log(u1));
            v[j] = std::complex<double>(r * std::cos(2 * kPi * u2), r * std::sin(2 * kPi * u2));
        }
        const double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

} // namespace

// ------------------------------------------------------------------ rep --

UnitaryRep::UnitaryRep(const MetricGroup& group, int dim, Modulus f)
    : group_(&group), dim_(dim), modulus_(std::move(f)), matrices_(group.size()) {
    if (dim < 1) throw RepError("representation dimension must be >= 1", std::to_string(dim));
}

const Eigen::MatrixXcd& UnitaryRep::matrix(std::size_t g) const {
    if (g >= matrices_.size() || !matrices_[g])
        throw RepError("matrix undefined for element",
                       g < matrices_.size() ? group_->label(g) : std::to_string(g));
    return *matrices_[g];
}

std::vector<std::size_t> UnitaryRep::defined_elements() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < matrices_.size(); ++i)
        if (matrices_[i]) out.push_back(i);
    return out;
}

UnitaryRep UnitaryRep::from_matrices(const MetricGroup& group, int dim,
                                     const std::map<std::string, Eigen::MatrixXcd>& matrices,
                                     Modulus f) {
    UnitaryRep rep(group, dim, std::move(f));
    for (const auto& [label, m] : matrices) {
        const auto idx = group.find(label);
        if (!idx) throw RepError("matrix for unknown group element", label);
        if (m.rows() != dim || m.cols() != dim)
            throw RepError("matrix has wrong shape", label + ": " + std::to_string(m.rows()) +
                                                         "x" + std::to_string(m.cols()));
        rep.matrices_[*idx] = m;
    }
    return rep;
}

UnitaryRep UnitaryRep::from_generators(const MetricGroup& group, int dim,
                                       const std::map<std::string, Eigen::MatrixXcd>& generators,
                                       Modulus f) {
    UnitaryRep rep(group, dim, std::move(f));
    std::vector<std::pair<std::size_t, Eigen::MatrixXcd>> gens;
    for (const auto& [label, m] : generators) {
        const auto idx = group.find(label);
        if (!idx) throw RepError("generator is not a group element", label);
        if (m.rows() != dim || m.cols() != dim)
            throw RepError("generator matrix has wrong shape", label);
        gens.emplace_back(*idx, m);
    }
    rep.matrices_[group.identity()] = Eigen::MatrixXcd::Identity(dim, dim);
    std::deque<std::size_t> queue{group.identity()};
    while (!queue.empty()) {
        const std::size_t g = queue.front();
        queue.pop_front();
        for (const auto& [gi, m] : gens) {
            const auto p = group.mul(g, gi);
            if (p && !rep.matrices_[*p]) {
                rep.matrices_[*p] = *rep.matrices_[g] * m;
                queue.push_back(*p);
            }
        }
    }
    return rep;
}

UnitaryRep trivial_rep(const MetricGroup& group, int dim) {
    std::map<std::string, Eigen::MatrixXcd> ms;
    for (const auto& label : group.labels()) ms[label] = Eigen::MatrixXcd::Identity(dim, dim);
    return UnitaryRep::from_matrices(group, dim, ms);
}

UnitaryRep regular_rep(const MetricGroup& group) {
    if (group.kind() != MetricGroup::Kind::FiniteTable)
        throw RepError("regular representation requires a finite multiplication table");
    const int n = static_cast<int>(group.size());
    std::map<std::string, Eigen::MatrixXcd> ms;
    for (std::size_t g = 0; g < group.size(); ++g) {
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t h = 0; h < group.size(); ++h) p(static_cast<long>(*group.mul(g, h)),
                                                        static_cast<long>(h)) = 1.0;
        ms[group.label(g)] = std::move(p);
    }
    return UnitaryRep::from_matrices(group, n, ms);
}

UnitaryRep regular_rep_complement(const MetricGroup& group) {
    if (group.kind() != MetricGroup::Kind::FiniteTable)
        throw RepError("regular representation requires a finite multiplication table");
    const int n = static_cast<int>(group.size());
    if (n < 2) throw RepError("complement representation needs >= 2 elements");
    // Householder reflector H mapping e_0 to the normalized all-ones vector;
    // columns 1..n−1 give a deterministic orthonormal basis of the
    // constants' complement.
    Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    Eigen::VectorXd w = u - Eigen::VectorXd::Unit(n, 0);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    const double w2 = w.squaredNorm();
    if (w2 > 1e-12) H -= (2.0 / w2) * (w * w.transpose());
    const Eigen::MatrixXcd basis = H.rightCols(n - 1).cast<std::complex<double>>();
    std::map<std::string, Eigen::MatrixXcd> ms;
    for (std::size_t g = 0; g < group.size(); ++g) {
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t h = 0; h < group.size(); ++h) p(static_cast<long>(*group.mul(g, h)),
                                                        static_cast<long>(h)) = 1.0;
        ms[group.label(g)] = basis.adjoint() * p * basis;
    }
    return UnitaryRep::from_matrices(group, n - 1, ms);
}

UnitaryRep z_character_rep(const MetricGroup& group, const std::vector<double>& thetas,
                           Modulus f) {
    if (thetas.empty()) throw RepError("character family must be nonempty");
    const int dim = static_cast<int>(thetas.size());
    std::map<std::string, Eigen::MatrixXcd> ms;
    for (const auto& label : group.labels()) {
        long x = 0;
        try {
            std::size_t used = 0;
            x = std::stol(label, &used);
            if (used != label.size()) throw std::invalid_argument(label);
        } catch (const std::exception&) {
            throw RepError("element label is not an integer", label);
        }
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
        for (int j = 0; j < dim; ++j)
            m(j, j) = std::polar(1.0, thetas[static_cast<std::size_t>(j)] * double(x));
        ms[label] = std::move(m);
    }
    return UnitaryRep::from_matrices(group, dim, ms, std::move(f));
}

// ----------------------------------------------------------------- checks --

RepCheckReport check_rep(const UnitaryRep& rep, double tol) {
    RepCheckReport out;
    out.tol = tol;
    const auto& group = rep.group();
    const int dim = rep.dim();
    const auto defined = rep.defined_elements();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

    if (rep.defined(group.identity()))
        out.identity_residual = (rep.matrix(group.identity()) - id).norm();

    for (const std::size_t g : defined) {
        const auto& m = rep.matrix(g);
        const double resid = (m.adjoint() * m - id).norm();
        if (resid > out.worst_unitarity) {
            out.worst_unitarity = resid;
            out.worst_unitarity_at = group.label(g);
        }
    }

    for (const std::size_t g : defined)
        for (const std::size_t h : defined) {
            const auto p = group.mul(g, h);
            if (!p || !rep.defined(*p)) continue;
            const double resid = (rep.matrix(g) * rep.matrix(h) - rep.matrix(*p)).norm();
            if (resid > out.worst_hom) {
                out.worst_hom = resid;
                out.worst_hom_at = group.label(g) + " * " + group.label(h);
            }
        }

    out.pass = out.worst_unitarity <= tol && out.worst_hom <= tol && out.identity_residual <= tol;
    return out;
}

FContinuityReport check_F_continuity(const UnitaryRep& rep, std::size_t samples,
                                     std::vector<double> eps_grid, std::uint64_t seed) {
    FContinuityReport out;
    if (eps_grid.empty()) eps_grid = {1.0, 0.5, 0.25, 0.125, 0.0625};
    out.eps_grid = eps_grid;
    out.samples = samples;
    const auto& group = rep.group();
    const auto& f = rep.modulus();
    const auto defined = rep.defined_elements();

    Rng rng(seed);
    std::vector<Eigen::VectorXcd> vs;
    for (std::size_t s = 0; s < samples; ++s) {
        Rng local = rng.fork(s);
        vs.push_back(random_unit(local, rep.dim()));
    }

    out.worst_excess = 0;
    double worst_ext = 0;
    for (std::size_t a = 0; a < defined.size(); ++a)
        for (std::size_t b = a + 1; b < defined.size(); ++b) {
            const std::size_t g = defined[a], h = defined[b];
            const double d = rat_to_double(group.dist(g, h));
            const Eigen::MatrixXcd diff = rep.matrix(g) - rep.matrix(h);
            for (const double eps : eps_grid) {
                // base action on B_1: d(g,h) < F(ε) ⇒ ‖r(g)v − r(h)v‖ <= ε
                if (d < f(eps)) {
                    for (std::size_t s = 0; s < vs.size(); ++s) {
                        const double excess = (diff * vs[s]).norm() - eps;
                        if (excess > out.worst_excess) {
                            out.worst_excess = excess;
                            std::ostringstream w;
                            w << group.label(g) << " vs " << group.label(h) << ", eps=" << eps
                              << ", sample=" << s;
                            out.witness = w.str();
                        }
                    }
                }
                // extension to B_i with F_i(ε) = F(ε/i), on v' = i·v
                for (int i = 2; i <= 3; ++i) {
                    if (d < f(eps / i)) {
                        for (const auto& v : vs) {
                            const double excess = (diff * (double(i) * v)).norm() - eps;
                            worst_ext = std::max(worst_ext, excess);
                        }
                    }
                }
            }
        }
    out.extension_pass = worst_ext <= kFloatTolerance;
    out.pass = out.worst_excess <= kFloatTolerance && out.extension_pass;
    return out;
}

// ------------------------------------------------------------- invariance --

namespace {

Eigen::MatrixXcd delta_operator(const UnitaryRep& rep, const std::vector<std::size_t>& xs) {
    const int dim = rep.dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd delta = Eigen::MatrixXcd::Zero(dim, dim);
    for (const std::size_t x : xs) {
        const Eigen::MatrixXcd a = id - rep.matrix(x);
        delta += a.adjoint() * a;
    }
    return delta;
}

} // namespace

FixedSpace fixed_space(const UnitaryRep& rep, const std::vector<std::size_t>& gens) {
    std::vector<std::size_t> xs = gens;
    if (xs.empty()) {
        if (rep.group().kind() != MetricGroup::Kind::FiniteTable)
            throw RepError("fixed_space needs a generating set for enumerated groups");
        for (std::size_t i = 0; i < rep.group().size(); ++i) xs.push_back(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(delta_operator(rep, xs));
    FixedSpace out;
    for (int i = 0; i < rep.dim(); ++i) {
        out.eigenvalues.push_back(eig.eigenvalues()[i]);
        if (eig.eigenvalues()[i] <= kFloatTolerance) out.dim = i + 1;
    }
    out.basis = eig.eigenvectors().leftCols(out.dim);
    return out;
}

InvarianceReport epsilon_invariant_radius(const UnitaryRep& rep,
                                          const std::vector<std::size_t>& Q, bool refine) {
    if (Q.empty()) throw RepError("Q must be nonempty");
    InvarianceReport out;
    out.Q = Q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(delta_operator(rep, Q));
    const double lmin = std::max(eig.eigenvalues()[0], 0.0);
    out.witness = eig.eigenvectors().col(0);
    out.lo = std::sqrt(lmin / double(Q.size()));
    out.hi = std::sqrt(lmin);
    out.method = "eigen";
    if (refine) {
        double worst = 0;
        for (const std::size_t x : Q)
            worst = std::max(worst, (rep.matrix(x) * out.witness - out.witness).norm());
        out.hi = std::min(out.hi, worst);
        out.method = "refined";
    }
    out.hi = std::max(out.hi, out.lo); // guard the interval against float noise
    for (int i = 0; i < rep.dim(); ++i)
        if (eig.eigenvalues()[i] <= kFloatTolerance) out.fixed_space_dim = i + 1;
    return out;
}

KazhdanReport kazhdan_pair_check(const UnitaryRep& rep, std::size_t samples, double tol,
                                 std::uint64_t seed) {
    const auto& group = rep.group();
    if (group.kind() != MetricGroup::Kind::FiniteTable)
        throw RepError("kazhdan_pair_check requires a finite group");
    if (fixed_space(rep).dim > 0)
        throw RepError("kazhdan_pair_check is not applicable: nontrivial fixed space");

    KazhdanReport out;
    out.samples = samples;
    out.threshold = std::sqrt(2.0) - tol;
    Rng rng(seed);
    bool first = true;
    for (std::size_t s = 0; s < samples; ++s) {
        Rng local = rng.fork(s);
        const Eigen::VectorXcd v = random_unit(local, rep.dim());
        double best = 0;
        std::size_t best_g = 0;
        for (std::size_t g = 0; g < group.size(); ++g) {
            const double r = (rep.matrix(g) * v - v).norm();
            if (r > best) {
                best = r;
                best_g = g;
            }
        }
        if (first || best < out.min_max_residual) {
            out.min_max_residual = best;
            std::ostringstream w;
            w << "sample " << s << ", max at " << group.label(best_g);
            out.witness = w.str();
            first = false;
        }
    }
    out.pass = out.min_max_residual >= out.threshold;
    return out;
}

NivReport niv_value(const UnitaryRep& rep, std::size_t samples, std::uint64_t seed) {
    const auto& group = rep.group();
    if (group.kind() != MetricGroup::Kind::FiniteTable)
        throw RepError("niv_value requires a finite group");
    const FixedSpace fx = fixed_space(rep);

    NivReport out;
    out.samples = samples;
    out.value = fx.dim > 0 ? 1 : 0;
    out.tag = fx.dim > 0 ? "invariant-witness" : "kazhdan-pair";

    // Sampled cross-check of sup_{v∈B_1} inf_{x∈G} (1 ∸ (‖xv−v‖ + |1−‖v‖|)).
    std::vector<Eigen::VectorXcd> candidates;
    candidates.push_back(Eigen::VectorXcd::Zero(rep.dim()));
    if (fx.dim > 0) candidates.push_back(fx.basis.col(0));
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        Rng local = rng.fork(s);
        const Eigen::VectorXcd v = random_unit(local, rep.dim());
        candidates.push_back(v);
        candidates.push_back(local.unit() * v); // interior of the ball
    }
    double est = 0;
    for (const auto& v : candidates) {
        const double norm_term = std::abs(1.0 - v.norm());
        double inner = 1;
        for (std::size_t g = 0; g < group.size(); ++g) {
            inner = std::min(inner, dotminus(1.0 - ((rep.matrix(g) * v - v).norm() + norm_term)));
            if (inner == 0) break;
        }
        est = std::max(est, inner);
    }
    out.sampled_estimate = est;
    return out;
}

// ------------------------------------------------------------------ K_δ --

KDeltaReport kdelta_axiom_check(const UnitaryRep& rep, const KDeltaConfig& config) {
    if (config.k < 1) throw RepError("k must be >= 1", std::to_string(config.k));
    if (config.m < 1) throw RepError("m must be >= 1", std::to_string(config.m));
    if (config.n < 1) throw RepError("n must be >= 1", std::to_string(config.n));
    if (config.delta < 0) throw RepError("delta must be >= 0", rat_to_string(config.delta));

    const auto& group = rep.group();
    const std::vector<std::size_t> kdelta = group.ball(BallSpec{config.delta, true});

    KDeltaReport out;
    out.delta = config.delta;
    out.k = config.k;
    out.m = config.m;
    out.n = config.n;
    out.method = "eigen";

    // Tuple family: explicit, exhaustive when it fits the budget, sampled
    // otherwise.
    std::vector<std::vector<std::size_t>> tuples = config.tuples;
    if (tuples.empty()) {
        std::size_t total = 1;
        bool overflow = false;
        for (int i = 0; i < config.k; ++i) {
            if (total > config.budget / group.size() + 1) {
                overflow = true;
                break;
            }
            total *= group.size();
        }
        if (!overflow && total <= config.budget) {
            out.exhaustive = true;
            std::vector<std::size_t> tup(static_cast<std::size_t>(config.k), 0);
            for (;;) {
                tuples.push_back(tup);
                std::size_t pos = 0;
                while (pos < tup.size() && ++tup[pos] == group.size()) {
                    tup[pos] = 0;
                    ++pos;
                }
                if (pos == tup.size()) break;
            }
        } else {
            Rng rng(config.seed);
            for (std::size_t t = 0; t < config.tuple_samples; ++t) {
                Rng local = rng.fork(t);
                std::vector<std::size_t> tup;
                for (int i = 0; i < config.k; ++i)
                    tup.push_back(static_cast<std::size_t>(local.below(group.size())));
                tuples.push_back(std::move(tup));
            }
        }
    }

    // Optional net candidates, shared across tuples.
    std::vector<Eigen::VectorXcd> net_candidates;
    if (config.net_refine) {
        if (2 * rep.dim() > 6)
            throw BudgetError("net refinement infeasible in this dimension",
                              std::to_string(rep.dim()));
        HilbertStructure hs(rep.dim(), std::max(config.m, 1));
        for (const auto& p : hs.net(config.m, config.net_h).points) net_candidates.push_back(p);
        out.method = "eigen+net";
    }

    const double inv_level = 1.0 / double(config.n);
    bool first = true;
    for (const auto& tup : tuples) {
        if (tup.size() != static_cast<std::size_t>(config.k))
            throw RepError("tuple has wrong arity", std::to_string(tup.size()));
        // X = ⋃ x_i · K_δ
        std::set<std::size_t> xset;
        for (const std::size_t xi : tup) {
            if (xi >= group.size()) throw RepError("tuple element out of range", std::to_string(xi));
            for (const std::size_t u : kdelta) {
                const auto p = group.mul(xi, u);
                if (!p)
                    throw UndefinedProductError("tuple translate leaves the enumerated ball",
                                                group.label(xi) + " * " + group.label(u));
                xset.insert(*p);
            }
        }
        const std::vector<std::size_t> xs(xset.begin(), xset.end());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(delta_operator(rep, xs));
        double best = -1;
        auto body_at = [&](const Eigen::VectorXcd& v) {
            const double norm_term = std::abs(1.0 - v.norm());
            double worst = norm_term;
            for (const std::size_t x : xs)
                worst = std::max(worst,
                                 dotminus((rep.matrix(x) * v - v).norm() - inv_level));
            return worst;
        };
        for (int c = 0; c < rep.dim(); ++c) {
            const double r = body_at(eig.eigenvectors().col(c));
            if (best < 0 || r < best) best = r;
            if (best == 0) break;
        }
        for (const auto& v : net_candidates) {
            if (best == 0) break;
            const double r = body_at(v);
            if (r < best) best = r;
        }

        out.tuples.push_back(KDeltaTupleResult{tup, best});
        if (first || best > out.worst_residual) {
            out.worst_residual = best;
            out.worst_tuple = tup;
            first = false;
        }
    }
    out.holds = !out.tuples.empty() && out.worst_residual <= kFloatTolerance;
    return out;
}

RefuteOutcome refute_kazhdan_set(const std::vector<UnitaryRep>& reps,
                                 const std::vector<std::size_t>& Q, double eps) {
    RefuteOutcome out;
    if (reps.empty()) return out;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (&reps[i].group() != &reps[0].group())
            throw RepError("all representations must share one group object");
        const InvarianceReport r = epsilon_invariant_radius(reps[i], Q, true);
        if (!(r.hi < eps)) continue;
        const bool finite = reps[i].group().kind() == MetricGroup::Kind::FiniteTable;
        const FixedSpace fx = fixed_space(reps[i], finite ? std::vector<std::size_t>{} : Q);
        if (fx.dim == 0) {
            out.found = true;
            out.rep_index = i;
            out.report = r;
            return out;
        }
    }
    return out;
}

} // namespace mlc
