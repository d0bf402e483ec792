// Acceptance runner: one line per criterion, nonzero exit when any fails.
// argv[1] = path to the mlc binary (used by the determinism criterion).

#include "corpus.hpp"
#include "mlc/amenability.hpp"
#include "mlc/hilbert.hpp"
#include "mlc/json_io.hpp"
#include "mlc/matching.hpp"
#include "mlc/unitary.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using mlc::Rat;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail; // stats on pass, reason on fail
};

Rat rat_abs(const Rat& a) { return a < Rat(0) ? Rat(0) - a : a; }

Rat nonzero_rat01(mlc::Rng& rng) {
    for (;;) {
        const Rat r = corpus::random_rat01(rng);
        if (r > Rat(0)) return r;
    }
}

std::vector<std::size_t> distinct_sample(mlc::Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i)
        std::swap(pool[i], pool[i + rng.below(n - i)]);
    pool.resize(k);
    return pool;
}

std::vector<std::size_t> translate(const mlc::MetricGroup& g, std::size_t y,
                                   const std::vector<std::size_t>& F) {
    std::vector<std::size_t> out;
    out.reserve(F.size());
    for (const std::size_t f : F) out.push_back(*g.mul(y, f));
    return out;
}

// --------------------------------------------------------------- criteria --

// All 65,536 bipartite graphs on 4+4 vertices: the deficiency formula and
// augmenting paths compute the same matching number, single-threaded.
Outcome matching_oracle() {
    const auto start = std::chrono::steady_clock::now();
    for (unsigned mask = 0; mask < 65536; ++mask) {
        auto inst = mlc::BipartiteInstance::make(4, 4);
        for (unsigned bit = 0; bit < 16; ++bit)
            if (mask >> bit & 1) inst.set_edge(bit / 4, bit % 4);
        const std::size_t a = mlc::matching_mu(inst, mlc::MuMethod::Deficiency, 1).mu;
        const std::size_t b = mlc::matching_mu(inst, mlc::MuMethod::Augmenting, 1).mu;
        if (a != b)
            return {false, "mask " + std::to_string(mask) + ": deficiency " + std::to_string(a) +
                               " vs augmenting " + std::to_string(b)};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60.0) return {false, "took " + std::to_string(secs) + " s (limit 60)"};
    std::ostringstream os;
    os << "65536 graphs in " << secs << " s";
    return {true, os.str()};
}

// 500 random instances: the positive matching formula evaluates to 0 exactly
// when mu(F, yF, closed ball of radius q) >= theta*k. The literal AST and the
// fast path must agree, in exact rational arithmetic, with no exceptions.
Outcome equivalence(bool positive) {
    mlc::Rng rng(positive ? 0xACC2 : 0xACC3);
    for (int i = 0; i < 500; ++i) {
        const mlc::MetricGroup g = corpus::random_metric_group(rng);
        const int k = 1 + int(rng.below(std::min<std::size_t>(4, g.size())));
        const auto F = distinct_sample(rng, g.size(), std::size_t(k));
        const std::size_t y = rng.below(g.size());
        mlc::PhiSpec spec;
        spec.k = k;
        // q must live in the value range [0, D] of the structure.
        spec.q = corpus::random_rat01(rng) * g.bound();
        spec.theta = nonzero_rat01(rng);
        spec.positive = positive;

        const mlc::LemmaCheck lc = mlc::lemma_equivalence_check(g, F, y, spec);
        if (!lc.agree)
            return {false, "instance " + std::to_string(i) + ": AST " +
                               mlc::rat_to_string(lc.ast_value) + " vs fast " +
                               mlc::rat_to_string(lc.fast_value)};

        const auto inst = mlc::build_RU(g, F, translate(g, y, F),
                                        mlc::BallSpec{spec.q, positive});
        const Rat mu{static_cast<long long>(mlc::matching_mu(inst, mlc::MuMethod::Both).mu)};
        const Rat level = spec.theta * Rat(k);
        const bool matching_side = positive ? mu >= level : mu < level;
        if ((lc.ast_value == Rat(0)) != matching_side || lc.fast_holds != matching_side)
            return {false, "instance " + std::to_string(i) + ": value " +
                               mlc::rat_to_string(lc.ast_value) + " but mu " +
                               mlc::rat_to_string(mu) + " vs level " + mlc::rat_to_string(level)};
    }
    return {true, "500 instances, AST = fast path = matching bound"};
}

// |phi(F, y) - phi(F, y')| <= d(y, y') with tolerance 0 in rational mode.
Outcome identity_modulus() {
    mlc::Rng rng(0xACC4);
    for (int i = 0; i < 1000; ++i) {
        const mlc::MetricGroup g = corpus::random_metric_group(rng);
        const int k = 1 + int(rng.below(std::min<std::size_t>(4, g.size())));
        const auto F = distinct_sample(rng, g.size(), std::size_t(k));
        const std::size_t y = rng.below(g.size());
        const std::size_t y2 = rng.below(g.size());
        mlc::PhiSpec spec;
        spec.k = k;
        spec.q = corpus::random_rat01(rng);
        spec.theta = nonzero_rat01(rng);
        spec.positive = i % 2 == 0;

        const Rat v = mlc::phi_value_fast(g, F, y, spec);
        const Rat w = mlc::phi_value_fast(g, F, y2, spec);
        if (rat_abs(v - w) > g.dist(y, y2))
            return {false, "case " + std::to_string(i) + ": |" + mlc::rat_to_string(v) + " - " +
                               mlc::rat_to_string(w) + "| > d = " +
                               mlc::rat_to_string(g.dist(y, y2))};
    }
    return {true, "1000 sampled pairs, exact"};
}

// Every finite corpus group is its own certificate set: the search returns
// F = G with margin |G|(1 - theta), confirmed by independent verification.
Outcome whole_group_certificates() {
    const Rat thetas[] = {Rat(1, 2), Rat(3, 4), Rat(99, 100)};
    for (const auto& named : corpus::finite_groups()) {
        const auto& g = named.group;
        std::vector<std::size_t> E;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (i != g.identity()) E.push_back(i);
        for (const Rat& theta : thetas) {
            const auto res = mlc::folner_search(g, E, theta, Rat(0), true, mlc::SearchConfig{});
            const Rat expected = Rat(static_cast<long long>(g.size())) * (Rat(1) - theta);
            if (res.status != mlc::SearchStatus::Found || !res.certificate)
                return {false, named.name + " theta " + mlc::rat_to_string(theta) + ": not found"};
            const auto& cert = *res.certificate;
            if (cert.F.size() != g.size())
                return {false, named.name + ": best F has " + std::to_string(cert.F.size()) +
                                   " of " + std::to_string(g.size()) + " elements"};
            if (cert.min_margin != expected || !(expected > Rat(0)))
                return {false, named.name + ": margin " + mlc::rat_to_string(cert.min_margin) +
                                   " expected " + mlc::rat_to_string(expected)};
            const auto again = mlc::verify_certificate(g, E, theta, Rat(0), true, cert.F);
            if (again.status != mlc::CertificateStatus::Valid || again.min_margin != expected)
                return {false, named.name + ": re-verification disagrees"};
        }
    }
    return {true, std::to_string(corpus::finite_groups().size()) + " groups x 3 thetas"};
}

// Z ladder: on the enumerated ball of Z, F = {0..n-1} with E = {+-1} and the
// discrete unit is a valid certificate exactly when theta <= (n-1)/n.
Outcome z_ladder() {
    for (int n = 2; n <= 10; ++n) {
        mlc::BallFamilySpec spec;
        spec.family = mlc::BallFamilySpec::Family::ZPow;
        spec.dim = 1;
        spec.radius = n + 1;
        const mlc::MetricGroup g = mlc::MetricGroup::enumerate_ball(spec);
        const std::vector<std::size_t> E{*g.find("1"), *g.find("-1")};
        std::vector<std::size_t> F;
        for (int i = 0; i < n; ++i) F.push_back(*g.find(std::to_string(i)));
        const Rat critical{n - 1, n};

        const auto at = [&](const Rat& theta) {
            return mlc::verify_certificate(g, E, theta, Rat(1, 2), true, F);
        };
        const auto boundary = at(critical);
        if (boundary.status != mlc::CertificateStatus::Valid || boundary.min_margin != Rat(0))
            return {false, "n=" + std::to_string(n) + ": boundary theta not tight"};
        if (at(critical + Rat(1, 100)).status != mlc::CertificateStatus::Invalid)
            return {false, "n=" + std::to_string(n) + ": valid above (n-1)/n"};
        if (at(critical - Rat(1, 100)).status != mlc::CertificateStatus::Valid)
            return {false, "n=" + std::to_string(n) + ": invalid below (n-1)/n"};

        // Brute-force cross-check of every margin via the matching number.
        for (std::size_t idx = 0; idx < E.size(); ++idx) {
            const auto inst = mlc::build_RU(g, F, translate(g, E[idx], F),
                                            mlc::BallSpec{Rat(1, 2), true});
            const Rat mu{
                static_cast<long long>(mlc::matching_mu(inst, mlc::MuMethod::Both).mu)};
            if (boundary.margins[idx] != mu - critical * Rat(n))
                return {false, "n=" + std::to_string(n) + ": margin mismatch at E[" +
                                   std::to_string(idx) + "]"};
        }
    }
    return {true, "n = 2..10, boundary exact both sides"};
}

// Rank-2 free group at word radius 2: no subset of the 17-element ball is a
// certificate at theta = 0.9; the exhaustive scan covers all 131071 subsets.
Outcome free_group_refutation() {
    const auto start = std::chrono::steady_clock::now();
    mlc::BallFamilySpec spec;
    spec.family = mlc::BallFamilySpec::Family::Free;
    spec.rank = 2;
    spec.radius = 3;
    const mlc::MetricGroup g = mlc::MetricGroup::enumerate_ball(spec);
    const std::vector<std::size_t> ground = g.word_ball(2);
    if (ground.size() != 17)
        return {false, "word ball has " + std::to_string(ground.size()) + " elements"};
    const std::vector<std::size_t> E{*g.find("a"), *g.find("b"), *g.find("A"), *g.find("B")};
    mlc::SearchConfig config;
    config.ground = ground;
    config.workers = 4;
    const auto res = mlc::folner_search(g, E, Rat(9, 10), Rat(1, 2), true, config);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (res.status != mlc::SearchStatus::NotFound)
        return {false, "search did not refute (status not NotFound)"};
    if (!res.exhaustive || res.examined != 131071)
        return {false, "examined " + std::to_string(res.examined) + " of 131071"};
    if (secs >= 600.0) return {false, "took " + std::to_string(secs) + " s (limit 600)"};
    std::ostringstream os;
    os << "131071 subsets in " << secs << " s";
    return {true, os.str()};
}

// Hilbert sorts: scalar target sort k with k-1 <= |c| < k on a fixed grid;
// parallelogram law and Cauchy-Schwarz on 1000 random pairs within 1e-9.
Outcome hilbert_laws() {
    const std::pair<double, int> grid[] = {{0, 1},         {0.5, 1}, {1, 2},
                                           {1.5, 2},       {2 - 1e-12, 2}, {2, 3}};
    for (const auto& [c, want] : grid)
        if (mlc::HilbertStructure::scalar_factor({c, 0}) != want)
            return {false, "scalar_factor(" + std::to_string(c) + ") != " + std::to_string(want)};

    const mlc::HilbertStructure h(3, 4);
    mlc::Rng rng(0xACC8);
    const auto random_unit_ball = [&] {
        Eigen::VectorXcd v(3);
        for (int i = 0; i < 3; ++i)
            v[i] = std::complex<double>(2 * rng.unit() - 1, 2 * rng.unit() - 1);
        if (v.norm() > 1.0) v /= v.norm() * (1.0 + rng.unit());
        return h.make(v, 1);
    };
    for (int i = 0; i < 1000; ++i) {
        const auto u = random_unit_ball();
        const auto v = random_unit_ball();
        const double lhs = std::pow(mlc::HilbertStructure::norm(h.add(u, v)), 2) +
                           std::pow(mlc::HilbertStructure::norm(h.sub(u, v)), 2);
        const double rhs = 2 * std::pow(mlc::HilbertStructure::norm(u), 2) +
                           2 * std::pow(mlc::HilbertStructure::norm(v), 2);
        if (std::abs(lhs - rhs) > 1e-9)
            return {false, "parallelogram off by " + std::to_string(std::abs(lhs - rhs))};
        const double cs = std::abs(h.inner(u, v)) -
                          mlc::HilbertStructure::norm(u) * mlc::HilbertStructure::norm(v);
        if (cs > 1e-9) return {false, "Cauchy-Schwarz off by " + std::to_string(cs)};
    }
    return {true, "grid exact, 1000 pairs within 1e-9"};
}

// Z/n regular representation on the complement of the constants: the
// invariance radius at Q = {1} collapses to 2 sin(pi/n).
Outcome cyclic_radius_closed_form() {
    for (int n = 3; n <= 12; ++n) {
        const mlc::MetricGroup g = corpus::cyclic(n);
        const auto rep = mlc::regular_rep_complement(g);
        const auto r = mlc::epsilon_invariant_radius(rep, {*g.find("1")}, true);
        const double want = 2 * std::sin(std::numbers::pi / n);
        if (std::abs(r.lo - want) > 1e-9 || std::abs(r.hi - want) > 1e-9)
            return {false, "n=" + std::to_string(n) + ": [" + std::to_string(r.lo) + ", " +
                               std::to_string(r.hi) + "] vs " + std::to_string(want)};
    }
    return {true, "n = 3..12 within 1e-9 (n=6 gives 1, n=4 gives sqrt 2)"};
}

// Kazhdan pair (G, sqrt 2): with trivial fixed space, 1000 sampled unit
// vectors all move by at least sqrt 2 - 1e-9 under some group element.
Outcome kazhdan_sqrt2() {
    const double floor_val = std::sqrt(2.0) - 1e-9;
    for (const auto& named : corpus::finite_groups()) {
        if (named.group.size() < 2) continue;
        const auto rep = mlc::regular_rep_complement(named.group);
        const auto r = mlc::kazhdan_pair_check(rep, 1000, 1e-9, 0xACC10);
        if (!r.pass || r.min_max_residual < floor_val)
            return {false, named.name + ": min over samples " +
                               std::to_string(r.min_max_residual) + " < sqrt2 - 1e-9"};
    }
    return {true, "1000 unit samples per group, all >= sqrt2 - 1e-9"};
}

// NIV dichotomy: 1 on the trivial representation, 0 on every rep with
// trivial fixed space; the sampled estimate agrees within 1e-9.
Outcome niv_dichotomy() {
    const auto trivial = mlc::niv_value(mlc::trivial_rep(corpus::cyclic(5), 3), 200, 7);
    if (trivial.value != 1.0 || std::abs(trivial.sampled_estimate - 1.0) > 1e-9)
        return {false, "trivial rep: value " + std::to_string(trivial.value) + ", estimate " +
                           std::to_string(trivial.sampled_estimate)};
    for (const auto& named : corpus::finite_groups()) {
        if (named.group.size() < 2) continue;
        const auto r = mlc::niv_value(mlc::regular_rep_complement(named.group), 200, 7);
        if (r.value != 0.0 || r.sampled_estimate > 1e-9)
            return {false, named.name + ": value " + std::to_string(r.value) + ", estimate " +
                               std::to_string(r.sampled_estimate)};
    }
    return {true, "value 1 on trivial, 0 on all complement reps"};
}

// K_delta truncation on Z: the character family theta_j = pi*2^-j (j = 1..8)
// on the radius-8 ball has residual 0 for every tuple with k <= 3 at n = 4;
// the Z/12 complement rep keeps residual >= 2 sin(pi/12) - 1/64.
Outcome kdelta_truncation() {
    mlc::BallFamilySpec spec;
    spec.family = mlc::BallFamilySpec::Family::ZPow;
    spec.dim = 1;
    spec.radius = 8;
    const mlc::MetricGroup z = mlc::MetricGroup::enumerate_ball(spec);
    std::vector<double> thetas;
    for (int j = 1; j <= 8; ++j) thetas.push_back(std::numbers::pi / std::pow(2.0, j));
    const auto family = mlc::z_character_rep(z, thetas);
    for (int k = 1; k <= 3; ++k) {
        mlc::KDeltaConfig config;
        config.delta = Rat(1, 2);
        config.k = k;
        config.m = 8;
        config.n = 4;
        const auto r = mlc::kdelta_axiom_check(family, config);
        if (!r.exhaustive)
            return {false, "k=" + std::to_string(k) + ": tuple enumeration not exhaustive"};
        for (const auto& t : r.tuples)
            if (t.residual > 1e-9)
                return {false, "k=" + std::to_string(k) + ": residual " +
                                   std::to_string(t.residual) + " > 0"};
        if (!r.holds) return {false, "k=" + std::to_string(k) + ": axiom reported violated"};
    }

    const mlc::MetricGroup z12 = corpus::cyclic(12);
    const auto gap_rep = mlc::regular_rep_complement(z12);
    mlc::KDeltaConfig config;
    config.delta = Rat(1, 2);
    config.k = 1;
    config.n = 64;
    config.tuples = {{*z12.find("1")}};
    const auto r = mlc::kdelta_axiom_check(gap_rep, config);
    const double floor_val = 2 * std::sin(std::numbers::pi / 12) - 1.0 / 64;
    if (r.worst_residual < floor_val - 1e-9)
        return {false, "Z/12 complement: residual " + std::to_string(r.worst_residual) +
                           " < spectral-gap floor " + std::to_string(floor_val)};
    return {true, "17^k tuples flat for k <= 3; Z/12 gap floor holds"};
}

// Reports are byte-identical across reruns and across 1 vs 8 workers.
Outcome determinism(const std::string& mlc_bin) {
    const std::string z4 =
        corpus::write_temp_json(mlc::group_to_json(corpus::cyclic(4)), "acc_z4");
    const std::string q8 =
        corpus::write_temp_json(mlc::group_to_json(corpus::quaternion8()), "acc_q8");
    const auto z4g = corpus::cyclic(4);
    const std::complex<double> i{0, 1};
    const auto rep = mlc::UnitaryRep::from_matrices(
        z4g, 1,
        {{"0", (Eigen::MatrixXcd(1, 1) << 1.0).finished()},
         {"1", (Eigen::MatrixXcd(1, 1) << i).finished()},
         {"2", (Eigen::MatrixXcd(1, 1) << -1.0).finished()},
         {"3", (Eigen::MatrixXcd(1, 1) << -i).finished()}});
    const std::string repj = corpus::write_temp_json(mlc::rep_to_json(rep, "acc_z4.json"),
                                                     "acc_z4char");

    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"mu --group " + z4 + " --F1 0,1,2 --F2 1,2,3 --q 1/2 --workers 1",
         "mu --group " + z4 + " --F1 0,1,2 --F2 1,2,3 --q 1/2 --workers 8"},
        {"folner-search --group " + q8 + " --E i,j --theta 2/3 --q 1/2 --closed --workers 1",
         "folner-search --group " + q8 + " --E i,j --theta 2/3 --q 1/2 --closed --workers 8"},
        {"schema --group " + q8 + " --variant amen --q 1/2 --theta 1/2 --k-max 2 "
         "--tuple-len 1 --tuple-samples 3 --seed 11",
         "schema --group " + q8 + " --variant amen --q 1/2 --theta 1/2 --k-max 2 "
         "--tuple-len 1 --tuple-samples 3 --seed 11"},
        {"rep niv --group " + z4 + " --rep " + repj + " --samples 64 --seed 9",
         "rep niv --group " + z4 + " --rep " + repj + " --samples 64 --seed 9"},
    };
    for (const auto& [lhs, rhs] : pairs) {
        const auto a = corpus::run_cli(mlc_bin, lhs);
        const auto b = corpus::run_cli(mlc_bin, rhs);
        if (a.out.empty() || a.out != b.out)
            return {false, "outputs differ for: " + lhs};
        if (a.exit_code != b.exit_code)
            return {false, "exit codes differ for: " + lhs};
    }
    return {true, std::to_string(pairs.size()) + " command pairs byte-identical"};
}

} // namespace

int main(int argc, char** argv) {
    const std::string mlc_bin = argc > 1 ? argv[1] : "build/tools/mlc";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"matching number: deficiency = augmenting on all 4+4 graphs", matching_oracle},
        {"positive formula = closed-ball matching bound (500 random instances)",
         [] { return equivalence(true); }},
        {"negative formula = open-ball matching refutation (500 random instances)",
         [] { return equivalence(false); }},
        {"translate argument is 1-Lipschitz with modulus d (1000 cases)", identity_modulus},
        {"each finite group certifies itself with margin |G|(1-theta)",
         whole_group_certificates},
        {"Z intervals {0..n-1} valid exactly up to theta = (n-1)/n", z_ladder},
        {"free group rank 2: exhaustive refutation over the radius-2 ball",
         free_group_refutation},
        {"Hilbert sorts: scalar law, parallelogram, Cauchy-Schwarz", hilbert_laws},
        {"Z/n complement radius equals 2 sin(pi/n)", cyclic_radius_closed_form},
        {"Kazhdan pair sqrt 2 on trivial-fixed-space reps", kazhdan_sqrt2},
        {"NIV dichotomy with matching sampled estimates", niv_dichotomy},
        {"K_delta truncation: character family flat, Z/12 gap floor", kdelta_truncation},
        {"determinism: byte-identical reports across seeds and workers",
         [&] { return determinism(mlc_bin); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("criterion %02zu %s — %s%s%s\n", i + 1, o.pass ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), o.detail.empty() ? "" : ": ",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    if (failures) std::printf("%d of 13 criteria failed\n", failures);
    return failures ? 1 : 0;
}
