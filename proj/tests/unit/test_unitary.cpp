#include "corpus.hpp"
#include "mlc/errors.hpp"
#include "mlc/unitary.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>

using mlc::UnitaryRep;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Eigen::MatrixXcd m1(std::complex<double> z) {
    Eigen::MatrixXcd m(1, 1);
    m << z;
    return m;
}

mlc::MetricGroup enumerated_z(int radius) {
    mlc::BallFamilySpec spec;
    spec.family = mlc::BallFamilySpec::Family::ZPow;
    spec.dim = 1;
    spec.radius = radius;
    return mlc::MetricGroup::enumerate_ball(spec);
}

// Four powers of i as a faithful character of Z/4.
UnitaryRep i_character(const mlc::MetricGroup& z4) {
    return UnitaryRep::from_matrices(
        z4, 1, {{"0", m1(1.0)}, {"1", m1(kI)}, {"2", m1(-1.0)}, {"3", m1(-kI)}});
}

} // namespace

TEST_CASE("constructors define the advertised matrices") {
    const auto z4 = corpus::cyclic(4);

    const auto triv = mlc::trivial_rep(z4, 3);
    CHECK(triv.dim() == 3);
    for (std::size_t g = 0; g < 4; ++g) {
        CHECK(triv.defined(g));
        CHECK((triv.matrix(g) - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);
    }
    CHECK(triv.defined_elements().size() == 4);

    const auto reg = mlc::regular_rep(z4);
    CHECK(reg.dim() == 4);
    // e_h ↦ e_{gh}: column 0 of r(1) is e_1.
    CHECK(reg.matrix(1)(1, 0) == std::complex<double>(1.0));
    CHECK(reg.matrix(1)(0, 0) == std::complex<double>(0.0));

    // Generators complete by BFS over products.
    const auto gen = UnitaryRep::from_generators(z4, 1, {{"1", m1(kI)}});
    CHECK(std::abs(gen.matrix(0)(0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(gen.matrix(2)(0, 0) - (-1.0)) <= 1e-12);
    CHECK(std::abs(gen.matrix(3)(0, 0) - (-kI)) <= 1e-12);

    // Partial matrices stay partial.
    const auto part = UnitaryRep::from_matrices(z4, 1, {{"1", m1(-1.0)}});
    CHECK(part.defined(1));
    CHECK_FALSE(part.defined(0));
    CHECK_THROWS_AS(part.matrix(0), mlc::RepError);

    CHECK_THROWS_AS(UnitaryRep::from_matrices(z4, 1, {{"7", m1(1.0)}}), mlc::RepError);
    CHECK_THROWS_AS(UnitaryRep::from_matrices(z4, 2, {{"1", m1(1.0)}}), mlc::RepError);
    CHECK_THROWS_AS(UnitaryRep::from_generators(z4, 1, {{"x", m1(1.0)}}), mlc::RepError);
    CHECK_THROWS_AS(UnitaryRep::from_matrices(z4, 0, {}), mlc::RepError);

    const auto z = enumerated_z(2);
    CHECK_THROWS_AS(mlc::regular_rep(z), mlc::RepError);
    CHECK_THROWS_AS(mlc::regular_rep_complement(corpus::cyclic(1)), mlc::RepError);
    CHECK_THROWS_AS(mlc::z_character_rep(z, {}), mlc::RepError);

    // Characters on the enumerated ball of Z.
    const auto ch = mlc::z_character_rep(z, {M_PI});
    CHECK(std::abs(ch.matrix(*z.find("1"))(0, 0) - (-1.0)) <= 1e-12);
    CHECK(std::abs(ch.matrix(*z.find("2"))(0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(ch.matrix(*z.find("-1"))(0, 0) - (-1.0)) <= 1e-12);

    // Generators on an enumerated ball only reach one side.
    const auto one_sided = UnitaryRep::from_generators(z, 1, {{"1", m1(kI)}});
    CHECK(one_sided.defined(*z.find("2")));
    CHECK_FALSE(one_sided.defined(*z.find("-1")));
}

TEST_CASE("check_rep accepts sound representations and pins defects") {
    const auto z4 = corpus::cyclic(4);
    for (const auto& named : corpus::finite_groups()) {
        const auto rep = mlc::regular_rep(named.group);
        const auto report = mlc::check_rep(rep);
        CAPTURE(named.name);
        CHECK(report.pass);
        CHECK(report.worst_unitarity <= 1e-9);
        CHECK(report.worst_hom <= 1e-9);
        CHECK(report.identity_residual <= 1e-9);
    }
    CHECK(mlc::check_rep(i_character(z4)).pass);
    CHECK(mlc::check_rep(mlc::regular_rep_complement(z4)).pass);

    // Non-unitary entry.
    const auto z2 = corpus::cyclic(2);
    const auto squash = UnitaryRep::from_matrices(z2, 1, {{"0", m1(1.0)}, {"1", m1(0.5)}});
    const auto bad = mlc::check_rep(squash);
    CHECK_FALSE(bad.pass);
    CHECK(bad.worst_unitarity == doctest::Approx(0.75));
    CHECK(bad.worst_unitarity_at == "1");

    // Unitary but not a homomorphism: r(1)² = I while r(2) = −I.
    const auto nothom = UnitaryRep::from_matrices(
        z4, 1, {{"0", m1(1.0)}, {"1", m1(1.0)}, {"2", m1(-1.0)}, {"3", m1(1.0)}});
    const auto rep2 = mlc::check_rep(nothom);
    CHECK_FALSE(rep2.pass);
    CHECK(rep2.worst_unitarity <= 1e-9);
    CHECK(rep2.worst_hom == doctest::Approx(2.0));
    CHECK_FALSE(rep2.worst_hom_at.empty());
}

TEST_CASE("F-continuity: identity modulus vs actual distances") {
    // Zero action difference: trivial rep passes on any metric.
    const auto z6 = corpus::cyclic6_quadratic();
    const auto ok = mlc::check_F_continuity(mlc::trivial_rep(z6, 2), 8);
    CHECK(ok.pass);
    CHECK(ok.extension_pass);
    CHECK(ok.worst_excess <= 1e-9);
    CHECK(ok.samples == 8);
    CHECK_FALSE(ok.eps_grid.empty());

    // Discrete metric: premise d < F(ε) ≤ 1 never fires off the diagonal.
    CHECK(mlc::check_F_continuity(mlc::regular_rep(corpus::cyclic(4)), 8).pass);

    // Quadratic metric: d = 5/9 < 1 fires at ε = 1 and the identity modulus
    // oversells the permutation action.
    const auto lying = mlc::check_F_continuity(mlc::regular_rep(z6), 16);
    CHECK_FALSE(lying.pass);
    CHECK(lying.worst_excess > 0);
    CHECK_FALSE(lying.witness.empty());
}

TEST_CASE("fixed spaces of the standard representations") {
    const auto z4 = corpus::cyclic(4);

    const auto all = mlc::fixed_space(mlc::trivial_rep(z4, 3));
    CHECK(all.dim == 3);

    const auto reg = mlc::fixed_space(mlc::regular_rep(z4));
    CHECK(reg.dim == 1);
    REQUIRE(reg.basis.cols() == 1);
    // Constants: all coordinates share the same magnitude 1/2.
    for (int i = 0; i < 4; ++i) CHECK(std::abs(reg.basis.col(0)[i]) == doctest::Approx(0.5));
    REQUIRE(reg.eigenvalues.size() == 4);
    for (std::size_t i = 1; i < reg.eigenvalues.size(); ++i)
        CHECK(reg.eigenvalues[i - 1] <= reg.eigenvalues[i] + 1e-12);

    CHECK(mlc::fixed_space(mlc::regular_rep_complement(z4)).dim == 0);

    // Orthonormal basis columns.
    const auto fx = mlc::fixed_space(mlc::trivial_rep(z4, 2));
    CHECK((fx.basis.adjoint() * fx.basis - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-9);

    // Enumerated balls need explicit generators.
    const auto z = enumerated_z(3);
    const auto ch = mlc::z_character_rep(z, {0.0});
    CHECK_THROWS_AS(mlc::fixed_space(ch), mlc::RepError);
    CHECK(mlc::fixed_space(ch, {*z.find("1")}).dim == 1);
    const auto moving = mlc::z_character_rep(z, {1.0});
    CHECK(mlc::fixed_space(moving, {*z.find("1")}).dim == 0);
}

TEST_CASE("invariance radius: trivial rep and cyclic complements") {
    const auto z4 = corpus::cyclic(4);
    CHECK_THROWS_AS(
        mlc::epsilon_invariant_radius(mlc::trivial_rep(z4, 2), {}), mlc::RepError);

    const auto still = mlc::epsilon_invariant_radius(mlc::trivial_rep(z4, 2), {1, 2});
    CHECK(still.lo == 0.0);
    CHECK(still.hi <= 1e-12);
    CHECK(still.fixed_space_dim == 2);
    CHECK(still.method == "refined");

    for (int n = 3; n <= 8; ++n) {
        const auto zn = corpus::cyclic(n);
        const auto rep = mlc::regular_rep_complement(zn);
        const auto r = mlc::epsilon_invariant_radius(rep, {1});
        const double expect = 2 * std::sin(M_PI / n);
        CAPTURE(n);
        CHECK(r.lo == doctest::Approx(expect).epsilon(1e-9));
        CHECK(r.hi == doctest::Approx(expect).epsilon(1e-9));
        CHECK(r.fixed_space_dim == 0);
        CHECK(r.witness.norm() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.Q == std::vector<std::size_t>{1});
    }

    // Refinement can only shrink the upper bound; lo is shared.
    const auto rep = mlc::regular_rep_complement(corpus::cyclic(5));
    const auto base = mlc::epsilon_invariant_radius(rep, {1, 2}, false);
    const auto fine = mlc::epsilon_invariant_radius(rep, {1, 2}, true);
    CHECK(base.method == "eigen");
    CHECK(fine.method == "refined");
    CHECK(base.lo == doctest::Approx(fine.lo).epsilon(1e-12));
    CHECK(fine.hi <= base.hi + 1e-12);
    CHECK(fine.lo <= fine.hi + 1e-12);
}

TEST_CASE("Kazhdan pair sqrt(2) on trivial-fixed-space representations") {
    for (const auto& named : corpus::finite_groups()) {
        if (named.group.size() < 2) continue;
        const auto rep = mlc::regular_rep_complement(named.group);
        const auto report = mlc::kazhdan_pair_check(rep, 30);
        CAPTURE(named.name);
        CHECK(report.pass);
        CHECK(report.samples == 30);
        CHECK(report.min_max_residual >= std::sqrt(2.0) - 1e-9);
        CHECK_FALSE(report.witness.empty());
    }

    const auto z4 = corpus::cyclic(4);
    CHECK_THROWS_AS(mlc::kazhdan_pair_check(mlc::trivial_rep(z4, 2)), mlc::RepError);
    CHECK_THROWS_AS(mlc::kazhdan_pair_check(mlc::regular_rep(z4)), mlc::RepError);
    CHECK_THROWS_AS(
        mlc::kazhdan_pair_check(mlc::z_character_rep(enumerated_z(2), {1.0})), mlc::RepError);
}

TEST_CASE("NIV dichotomy is exact") {
    const auto z4 = corpus::cyclic(4);

    const auto one = mlc::niv_value(mlc::trivial_rep(z4, 2), 50);
    CHECK(one.value == 1);
    CHECK(one.tag == "invariant-witness");
    CHECK(one.sampled_estimate == doctest::Approx(1.0).epsilon(1e-9));

    const auto viareg = mlc::niv_value(mlc::regular_rep(z4), 50);
    CHECK(viareg.value == 1); // constants are invariant

    const auto zero = mlc::niv_value(mlc::regular_rep_complement(z4), 50);
    CHECK(zero.value == 0);
    CHECK(zero.tag == "kazhdan-pair");
    CHECK(zero.sampled_estimate <= 1e-9);
    CHECK(zero.samples == 50);

    CHECK_THROWS_AS(mlc::niv_value(mlc::z_character_rep(enumerated_z(2), {1.0})),
                    mlc::RepError);
}

TEST_CASE("K-delta truncation on Z/4") {
    const auto z4 = corpus::cyclic(4);

    // Trivial rep: every tuple reaches residual 0 at a unit vector.
    mlc::KDeltaConfig config;
    config.delta = mlc::Rat(1, 2);
    config.k = 1;
    config.n = 4;
    const auto quiet = mlc::kdelta_axiom_check(mlc::trivial_rep(z4, 2), config);
    CHECK(quiet.holds);
    CHECK(quiet.exhaustive);
    CHECK(quiet.tuples.size() == 4);
    CHECK(quiet.worst_residual <= 1e-9);
    CHECK(quiet.method == "eigen");

    // Faithful character: x = 2 acts as −1, so ‖r(2)v − v‖ = 2 on units.
    const auto ch = i_character(z4);
    const auto loud = mlc::kdelta_axiom_check(ch, config);
    CHECK_FALSE(loud.holds);
    CHECK(loud.exhaustive);
    CHECK(loud.worst_residual == doctest::Approx(1.75)); // 2 − 1/4
    CHECK(loud.worst_tuple == std::vector<std::size_t>{2});
    for (const auto& t : loud.tuples) {
        if (t.x == std::vector<std::size_t>{0}) CHECK(t.residual <= 1e-9);
        if (t.x == std::vector<std::size_t>{1})
            CHECK(t.residual == doctest::Approx(std::sqrt(2.0) - 0.25));
    }

    // Explicit tuples are taken literally.
    mlc::KDeltaConfig manual = config;
    manual.tuples = {{1}, {2}};
    const auto picked = mlc::kdelta_axiom_check(ch, manual);
    CHECK_FALSE(picked.exhaustive);
    CHECK(picked.tuples.size() == 2);
    CHECK(picked.worst_tuple == std::vector<std::size_t>{2});

    // Larger delta swallows the whole group: X = G for every tuple.
    mlc::KDeltaConfig wide = config;
    wide.delta = mlc::Rat(1);
    const auto engulfed = mlc::kdelta_axiom_check(ch, wide);
    CHECK(engulfed.worst_residual == doctest::Approx(1.75));

    // Sampling below the enumeration budget is deterministic in the seed.
    mlc::KDeltaConfig tight = config;
    tight.budget = 2;
    tight.tuple_samples = 5;
    tight.seed = 3;
    const auto s1 = mlc::kdelta_axiom_check(ch, tight);
    const auto s2 = mlc::kdelta_axiom_check(ch, tight);
    CHECK_FALSE(s1.exhaustive);
    CHECK(s1.tuples.size() == 5);
    REQUIRE(s2.tuples.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(s1.tuples[i].x == s2.tuples[i].x);

    // The ball-interior optimum: net refinement finds v with ‖v‖ = 1/2,
    // balancing |1 − ‖v‖| against 2‖v‖ − 1/4.
    mlc::KDeltaConfig net = config;
    net.tuples = {{2}};
    net.net_refine = true;
    net.net_h = 0.5;
    const auto refined = mlc::kdelta_axiom_check(ch, net);
    CHECK(refined.method == "eigen+net");
    CHECK(refined.worst_residual == doctest::Approx(0.75));
    CHECK_THROWS_AS(mlc::kdelta_axiom_check(mlc::regular_rep(z4), net), mlc::BudgetError);

    // Validation and undefined translates.
    mlc::KDeltaConfig broken = config;
    broken.k = 0;
    CHECK_THROWS_AS(mlc::kdelta_axiom_check(ch, broken), mlc::RepError);
    broken.k = 1;
    broken.delta = mlc::Rat(-1);
    CHECK_THROWS_AS(mlc::kdelta_axiom_check(ch, broken), mlc::RepError);
    mlc::KDeltaConfig arity = config;
    arity.tuples = {{1, 2}};
    CHECK_THROWS_AS(mlc::kdelta_axiom_check(ch, arity), mlc::RepError);
    mlc::KDeltaConfig range = config;
    range.tuples = {{17}};
    CHECK_THROWS_AS(mlc::kdelta_axiom_check(ch, range), mlc::RepError);

    const auto z = enumerated_z(2);
    const auto far = mlc::z_character_rep(z, {M_PI});
    mlc::KDeltaConfig escape;
    escape.delta = mlc::Rat(1); // discrete: K = the whole ball
    escape.tuples = {{*z.find("2")}};
    CHECK_THROWS_AS(mlc::kdelta_axiom_check(far, escape), mlc::UndefinedProductError);
}

TEST_CASE("K-delta residual floor on the Z/12 complement") {
    const auto z12 = corpus::cyclic(12);
    const auto rep = mlc::regular_rep_complement(z12);
    mlc::KDeltaConfig config;
    config.delta = mlc::Rat(1, 2);
    config.k = 1;
    config.n = 64;
    config.tuples = {{1}};
    const auto report = mlc::kdelta_axiom_check(rep, config);
    const double floor = 2 * std::sin(M_PI / 12) - 1.0 / 64;
    CHECK(report.worst_residual >= floor - 1e-9);
    CHECK(report.worst_residual == doctest::Approx(floor).epsilon(1e-9));
    CHECK_FALSE(report.holds);
}

TEST_CASE("refuting a claimed Kazhdan pair against a family") {
    const auto z4 = corpus::cyclic(4);
    std::vector<UnitaryRep> family;
    family.push_back(mlc::trivial_rep(z4, 1));
    family.push_back(mlc::regular_rep_complement(z4));

    // Trivial rep is filtered out (invariant vectors), the complement has
    // radius √2 < 1.5 at Q = {1}.
    const auto hit = mlc::refute_kazhdan_set(family, {1}, 1.5);
    CHECK(hit.found);
    CHECK(hit.rep_index == 1);
    CHECK(hit.report.hi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    const auto miss = mlc::refute_kazhdan_set(family, {1}, 1.0);
    CHECK_FALSE(miss.found);

    CHECK_FALSE(mlc::refute_kazhdan_set({}, {1}, 2.0).found);

    std::vector<UnitaryRep> mixed;
    const auto other = corpus::cyclic(4);
    mixed.push_back(mlc::trivial_rep(z4, 1));
    mixed.push_back(mlc::trivial_rep(other, 1));
    CHECK_THROWS_AS(mlc::refute_kazhdan_set(mixed, {1}, 2.0), mlc::RepError);

    // Enumerated family: fixed space judged over Q itself.
    const auto z = enumerated_z(3);
    std::vector<UnitaryRep> chars;
    chars.push_back(mlc::z_character_rep(z, {M_PI / 4}));
    const auto rotated = mlc::refute_kazhdan_set(chars, {*z.find("1")}, 0.8);
    CHECK(rotated.found); // 2 sin(π/8) ≈ 0.765 < 0.8
    CHECK_FALSE(mlc::refute_kazhdan_set(chars, {*z.find("1")}, 0.7).found);
}
