#include "corpus.hpp"
#include "mlc/errors.hpp"
#include "mlc/matching.hpp"

#include <doctest.h>

#include <set>

using mlc::BipartiteInstance;
using mlc::MatchingResult;
using mlc::MuMethod;
using mlc::Rat;

namespace {

// Validate internal consistency of a result against its instance.
void check_result(const BipartiteInstance& g, const MatchingResult& r) {
    // The matching is a set of real edges, each endpoint used once.
    std::set<std::size_t> left_used, right_used;
    for (const auto& [x, y] : r.matching) {
        CHECK(g.edge(x, y));
        CHECK(left_used.insert(x).second);
        CHECK(right_used.insert(y).second);
    }
    CHECK(r.matching.size() == r.mu);
    // Ascending left indices.
    for (std::size_t i = 1; i < r.matching.size(); ++i)
        CHECK(r.matching[i - 1].first < r.matching[i].first);
    // witness_S is a deficiency certificate: mu = |F1| − (|S| − |N(S)|).
    const auto nb = mlc::neighborhood(g, r.witness_S);
    CHECK(r.mu == g.left - (r.witness_S.size() - nb.size()));
}

BipartiteInstance random_instance(mlc::Rng& rng, std::size_t l, std::size_t r, int density) {
    auto g = BipartiteInstance::make(l, r);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (rng.below(100) < std::uint64_t(density)) g.set_edge(i, j);
    return g;
}

} // namespace

TEST_CASE("empty and complete instances") {
    const auto empty = BipartiteInstance::make(3, 4);
    for (const auto m : {MuMethod::Deficiency, MuMethod::Augmenting, MuMethod::Both}) {
        const auto r = mlc::matching_mu(empty, m);
        CHECK(r.mu == 0);
        check_result(empty, r);
    }

    auto full = BipartiteInstance::make(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) full.set_edge(i, j);
    const auto r = mlc::matching_mu(full, MuMethod::Both);
    CHECK(r.mu == 3);
    CHECK(r.witness_S.empty()); // the empty set already maximizes deficiency
    check_result(full, r);
}

TEST_CASE("Hall violator is found and is lexicographically least") {
    // Left {0,1,2} all point only at right {0}; left 3 has everything.
    auto g = BipartiteInstance::make(4, 4);
    g.set_edge(0, 0);
    g.set_edge(1, 0);
    g.set_edge(2, 0);
    for (std::size_t j = 0; j < 4; ++j) g.set_edge(3, j);
    const auto r = mlc::matching_mu(g, MuMethod::Both);
    CHECK(r.mu == 2);
    // Deficiency 2 is attained by {0,1,2} only.
    CHECK(r.witness_S == std::vector<std::size_t>{0, 1, 2});
    check_result(g, r);
}

TEST_CASE("neighborhood is the sorted union of rows") {
    auto g = BipartiteInstance::make(3, 70); // multiple 64-bit words
    g.set_edge(0, 0);
    g.set_edge(0, 69);
    g.set_edge(1, 33);
    g.set_edge(2, 33);
    CHECK(mlc::neighborhood(g, {0, 1}) == std::vector<std::size_t>{0, 33, 69});
    CHECK(mlc::neighborhood(g, {1, 2}) == std::vector<std::size_t>{33});
    CHECK(mlc::neighborhood(g, {}).empty());
}

TEST_CASE("deficiency and augmenting agree on random instances") {
    mlc::Rng rng(42);
    for (int it = 0; it < 200; ++it) {
        const std::size_t l = 1 + rng.below(7), r = 1 + rng.below(7);
        const int density = static_cast<int>(rng.below(101));
        const auto g = random_instance(rng, l, r, density);
        const auto a = mlc::matching_mu(g, MuMethod::Deficiency);
        const auto b = mlc::matching_mu(g, MuMethod::Augmenting);
        CAPTURE(it);
        CHECK(a.mu == b.mu);
        check_result(g, a);
        check_result(g, b);
        // Both cross-checks internally and must agree with each.
        const auto c = mlc::matching_mu(g, MuMethod::Both);
        CHECK(c.mu == a.mu);
        check_result(g, c);
    }
}

TEST_CASE("methods are deterministic across worker counts") {
    mlc::Rng rng(7);
    const auto g = random_instance(rng, 10, 10, 40);
    const auto one = mlc::matching_mu(g, MuMethod::Both, 1);
    const auto eight = mlc::matching_mu(g, MuMethod::Both, 8);
    CHECK(one.mu == eight.mu);
    CHECK(one.witness_S == eight.witness_S);
    CHECK(one.matching == eight.matching);
}

TEST_CASE("deficiency method rejects oversized instances") {
    const auto g = BipartiteInstance::make(25, 2);
    CHECK_THROWS_AS(mlc::matching_mu(g, MuMethod::Deficiency), mlc::MatchingError);
    // Augmenting has no such limit.
    CHECK(mlc::matching_mu(g, MuMethod::Augmenting).mu == 0);
}

TEST_CASE("build_RU relates x to y exactly when y x^{-1} lies in the ball") {
    const auto z4 = corpus::cyclic(4);
    const std::vector<std::size_t> F1 = {0, 1}, F2 = {1, 2};
    // Closed ball of radius 1/2 in the discrete metric: {identity}.
    const auto g = mlc::build_RU(z4, F1, F2, mlc::BallSpec{Rat(1, 2), true});
    CHECK(g.left == 2);
    CHECK(g.right == 2);
    CHECK(g.edge(1, 0)); // F2[0]=1 equals F1[1]=1
    CHECK_FALSE(g.edge(0, 0));
    CHECK_FALSE(g.edge(0, 1));
    CHECK_FALSE(g.edge(1, 1));
    CHECK(mlc::matching_mu(g, MuMethod::Both).mu == 1);

    // Closed unit ball is everything: complete bipartite graph.
    const auto full = mlc::build_RU(z4, F1, F2, mlc::BallSpec{Rat(1), true});
    CHECK(mlc::matching_mu(full, MuMethod::Both).mu == 2);

    // Open unit ball excludes nothing but the far points (discrete): only
    // coincidences remain.
    const auto open = mlc::build_RU(z4, F1, F2, mlc::BallSpec{Rat(1), false});
    CHECK(mlc::matching_mu(open, MuMethod::Both).mu == 1);
}

TEST_CASE("build_RU surfaces undefined products in enumerated balls") {
    mlc::BallFamilySpec spec;
    spec.family = mlc::BallFamilySpec::Family::Free;
    spec.rank = 2;
    spec.radius = 1;
    const auto f2 = mlc::MetricGroup::enumerate_ball(spec);
    const std::vector<std::size_t> F1 = {*f2.find("a")};
    const std::vector<std::size_t> F2 = {*f2.find("b")};
    // b * a^{-1} has length 2: outside the radius-1 enumeration.
    CHECK_THROWS_AS(mlc::build_RU(f2, F1, F2, mlc::BallSpec{Rat(1), true}),
                    mlc::UndefinedProductError);
}
