#include "mlc/matching.hpp"

#include "mlc/errors.hpp"
#include "mlc/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>

namespace mlc {

BipartiteInstance BipartiteInstance::make(std::size_t left, std::size_t right) {
    BipartiteInstance g;
    g.left = left;
    g.right = right;
    g.rows.assign(left * ((right + 63) / 64), 0);
    return g;
}

BipartiteInstance build_RU(const MetricGroup& group, const std::vector<std::size_t>& F1,
                           const std::vector<std::size_t>& F2, const BallSpec& u) {
    BipartiteInstance g = BipartiteInstance::make(F1.size(), F2.size());
    const std::size_t e = group.identity();
    for (std::size_t i = 0; i < F1.size(); ++i) {
        const std::size_t xinv = group.inv(F1[i]);
        for (std::size_t j = 0; j < F2.size(); ++j) {
            const auto yxinv = group.mul(F2[j], xinv);
            if (!yxinv)
                throw UndefinedProductError(
                    "product undefined while building R_U",
                    group.label(F2[j]) + " * " + group.label(F1[i]) + "^-1");
            const Rat d = group.dist(e, *yxinv);
            const bool in_u = u.closed ? d <= u.radius : d < u.radius;
            if (in_u) g.set_edge(i, j);
        }
    }
    return g;
}

std::vector<std::size_t> neighborhood(const BipartiteInstance& g,
                                      const std::vector<std::size_t>& S) {
    const std::size_t w = g.words();
    std::vector<std::uint64_t> acc(w, 0);
    for (const std::size_t x : S)
        for (std::size_t k = 0; k < w; ++k) acc[k] |= g.rows[x * w + k];
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < w; ++k) {
        std::uint64_t word = acc[k];
        while (word) {
            const int b = std::countr_zero(word);
            out.push_back(k * 64 + static_cast<std::size_t>(b));
            word &= word - 1;
        }
    }
    return out;
}

namespace {

// --- deficiency method -----------------------------------------------------

// Compare subsets of [0,64) as sorted index sequences, lexicographically.
// {0,2} < {1}: the sequence starting with 0 wins; a proper prefix wins too.
bool lex_less(std::uint64_t a, std::uint64_t b) {
    while (a && b) {
        const int ia = std::countr_zero(a), ib = std::countr_zero(b);
        if (ia != ib) return ia < ib;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

struct DefBest {
    long long deficiency = std::numeric_limits<long long>::min();
    std::uint64_t mask = 0;

    void offer(long long d, std::uint64_t m) {
        if (d > deficiency || (d == deficiency && lex_less(m, mask))) {
            deficiency = d;
            mask = m;
        }
    }
};

MatchingResult mu_deficiency(const BipartiteInstance& g, int workers) {
    if (g.left > 24)
        throw MatchingError("deficiency method limited to |F1| <= 24",
                            std::to_string(g.left) + " left vertices");
    const std::size_t w = g.words();
    const std::uint64_t total = 1ULL << g.left;

    auto map_range = [&](std::size_t begin, std::size_t end) {
        DefBest best;
        std::vector<std::uint64_t> acc(w);
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            std::fill(acc.begin(), acc.end(), 0);
            std::uint64_t m = mask;
            while (m) {
                const auto x = static_cast<std::size_t>(std::countr_zero(m));
                for (std::size_t k = 0; k < w; ++k) acc[k] |= g.rows[x * w + k];
                m &= m - 1;
            }
            long long nsize = 0;
            for (std::size_t k = 0; k < w; ++k) nsize += std::popcount(acc[k]);
            best.offer(static_cast<long long>(std::popcount(mask)) - nsize, mask);
        }
        return best;
    };

    DefBest best = parallel_chunk_reduce<DefBest>(
        total, DefBest{}, 1 << 12, workers,
        map_range,
        [](DefBest& acc, DefBest&& local, std::size_t) {
            acc.offer(local.deficiency, local.mask);
        });

    MatchingResult out;
    out.mu = g.left - static_cast<std::size_t>(std::max(0LL, best.deficiency));
    // The empty set always achieves deficiency 0, and it is lex-least, so a
    // nonempty witness appears only when the maximum deficiency is positive.
    std::uint64_t m = best.deficiency > 0 ? best.mask : 0;
    while (m) {
        out.witness_S.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

// --- Hopcroft–Karp ----------------------------------------------------------

struct HopcroftKarp {
    const BipartiteInstance& g;
    std::vector<int> match_l, match_r, dist;
    static constexpr int INF = std::numeric_limits<int>::max();

    explicit HopcroftKarp(const BipartiteInstance& graph)
        : g(graph),
          match_l(graph.left, -1),
          match_r(graph.right, -1),
          dist(graph.left, 0) {}

    bool bfs() {
        std::queue<std::size_t> q;
        bool reachable_free = false;
        for (std::size_t x = 0; x < g.left; ++x) {
            if (match_l[x] < 0) {
                dist[x] = 0;
                q.push(x);
            } else {
                dist[x] = INF;
            }
        }
        while (!q.empty()) {
            const std::size_t x = q.front();
            q.pop();
            const std::size_t w = g.words();
            for (std::size_t k = 0; k < w; ++k) {
                std::uint64_t word = g.rows[x * w + k];
                while (word) {
                    const std::size_t y = k * 64 + static_cast<std::size_t>(std::countr_zero(word));
                    word &= word - 1;
                    const int mx = match_r[y];
                    if (mx < 0) {
                        reachable_free = true;
                    } else if (dist[static_cast<std::size_t>(mx)] == INF) {
                        dist[static_cast<std::size_t>(mx)] = dist[x] + 1;
                        q.push(static_cast<std::size_t>(mx));
                    }
                }
            }
        }
        return reachable_free;
    }

    bool dfs(std::size_t x) {
        const std::size_t w = g.words();
        for (std::size_t k = 0; k < w; ++k) {
            std::uint64_t word = g.rows[x * w + k];
            while (word) {
                const std::size_t y = k * 64 + static_cast<std::size_t>(std::countr_zero(word));
                word &= word - 1;
                const int mx = match_r[y];
                if (mx < 0 ||
                    (dist[static_cast<std::size_t>(mx)] == dist[x] + 1 &&
                     dfs(static_cast<std::size_t>(mx)))) {
                    match_l[x] = static_cast<int>(y);
                    match_r[y] = static_cast<int>(x);
                    return true;
                }
            }
        }
        dist[x] = INF;
        return false;
    }

    std::size_t run() {
        std::size_t matched = 0;
        while (bfs()) {
            for (std::size_t x = 0; x < g.left; ++x)
                if (match_l[x] < 0 && dfs(x)) ++matched;
        }
        return matched;
    }
};

MatchingResult mu_augmenting(const BipartiteInstance& g) {
    HopcroftKarp hk(g);
    MatchingResult out;
    out.mu = hk.run();
    for (std::size_t x = 0; x < g.left; ++x)
        if (hk.match_l[x] >= 0)
            out.matching.push_back({x, static_cast<std::size_t>(hk.match_l[x])});

    // König witness: alternating reachability from unmatched left vertices
    // (free edges left→right, matched edges right→left). The reached left
    // set Z maximizes |S| − |N(S)|, with N(Z) exactly the reached rights.
    if (out.mu < g.left) {
        std::vector<bool> seen_l(g.left, false), seen_r(g.right, false);
        std::queue<std::size_t> q;
        for (std::size_t x = 0; x < g.left; ++x)
            if (hk.match_l[x] < 0) {
                seen_l[x] = true;
                q.push(x);
            }
        const std::size_t w = g.words();
        while (!q.empty()) {
            const std::size_t x = q.front();
            q.pop();
            for (std::size_t k = 0; k < w; ++k) {
                std::uint64_t word = g.rows[x * w + k];
                while (word) {
                    const std::size_t y = k * 64 + static_cast<std::size_t>(std::countr_zero(word));
                    word &= word - 1;
                    if (seen_r[y]) continue;
                    seen_r[y] = true;
                    const int mx = hk.match_r[y];
                    if (mx >= 0 && !seen_l[static_cast<std::size_t>(mx)]) {
                        seen_l[static_cast<std::size_t>(mx)] = true;
                        q.push(static_cast<std::size_t>(mx));
                    }
                }
            }
        }
        for (std::size_t x = 0; x < g.left; ++x)
            if (seen_l[x]) out.witness_S.push_back(x);
    }
    return out;
}

} // namespace

MatchingResult matching_mu(const BipartiteInstance& g, MuMethod method, int workers) {
    switch (method) {
    case MuMethod::Deficiency: {
        MatchingResult r = mu_deficiency(g, workers);
        // Attach a concrete matching (cheap) so callers always get one.
        r.matching = mu_augmenting(g).matching;
        return r;
    }
    case MuMethod::Augmenting:
        return mu_augmenting(g);
    case MuMethod::Both: {
        MatchingResult a = mu_deficiency(g, workers);
        MatchingResult b = mu_augmenting(g);
        if (a.mu != b.mu)
            throw MatchingError("deficiency and augmenting methods disagree",
                                "deficiency=" + std::to_string(a.mu) +
                                    " augmenting=" + std::to_string(b.mu));
        a.matching = std::move(b.matching);
        return a;
    }
    }
    throw MatchingError("unknown matching method");
}

} // namespace mlc
