#pragma once

#include "mlc/group.hpp"
#include "mlc/rational.hpp"

#include <cstdint>
#include <vector>

namespace mlc {

// Bipartite graph on index sets [0, left) × [0, right), adjacency stored as
// bitset rows (64-bit words) for fast neighborhood unions.
struct BipartiteInstance {
    std::size_t left = 0, right = 0;
    std::vector<std::uint64_t> rows; // left × words(right)

    static BipartiteInstance make(std::size_t left, std::size_t right);
    std::size_t words() const { return (right + 63) / 64; }
    void set_edge(std::size_t x, std::size_t y) {
        rows[x * words() + (y >> 6)] |= (1ULL << (y & 63));
    }
    bool edge(std::size_t x, std::size_t y) const {
        return rows[x * words() + (y >> 6)] >> (y & 63) & 1;
    }
};

// R_U ⊆ F1 × F2 relates x ∈ F1 to y ∈ F2 when y·x⁻¹ ∈ U, where U is the
// ball given by `u`. F1/F2 are element indices into `group`; products must
// be defined (UndefinedProductError otherwise).
BipartiteInstance build_RU(const MetricGroup& group, const std::vector<std::size_t>& F1,
                           const std::vector<std::size_t>& F2, const BallSpec& u);

// N(S) for S a set of left indices: sorted right indices adjacent to S.
std::vector<std::size_t> neighborhood(const BipartiteInstance& g,
                                      const std::vector<std::size_t>& S);

enum class MuMethod { Deficiency, Augmenting, Both };

struct MatchingResult {
    std::size_t mu = 0;
    // Deficiency maximizer: mu = |F1| − (|witness_S| − |N(witness_S)|).
    // Lexicographically least among maximizers (as sorted index sequences);
    // empty when the deficiency optimum is the empty set.
    std::vector<std::size_t> witness_S;
    // A maximum matching as (left, right) pairs, ascending in left index.
    std::vector<std::pair<std::size_t, std::size_t>> matching;
};

// Matching number. Deficiency method enumerates all subsets (requires
// |F1| <= 24); Augmenting runs Hopcroft–Karp and derives the witness from
// König alternating reachability; Both runs the two and cross-checks.
MatchingResult matching_mu(const BipartiteInstance& g, MuMethod method, int workers = 0);

} // namespace mlc
