#include "mlc/amenability.hpp"

#include "mlc/errors.hpp"
#include "mlc/eval.hpp"
#include "mlc/parallel.hpp"

#include "mlc/rng.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <utility>

namespace mlc {

void PhiSpec::validate() const {
    if (k < 1) throw Error("phi parameter k must be >= 1", std::to_string(k));
    if (theta <= 0 || theta > 1)
        throw Error("phi parameter theta must lie in (0, 1]", rat_to_string(theta));
    if (q < 0) throw Error("phi parameter q must be nonnegative", rat_to_string(q));
}

// ---------------------------------------------------------------- build --

FormulaPtr build_phi(const PhiSpec& spec, std::size_t node_budget) {
    spec.validate();
    const int k = spec.k;
    // The (S, S') scan is 4^k; beyond k = 12 even counting the family is
    // infeasible. The fast evaluator has no such limit.
    if (k > 12)
        throw BudgetError("phi builder supports k <= 12; use the fast evaluator for larger k",
                          std::to_string(k));

    // t(S) = |S| − k + θk; S' valid: |S'| >= t(S) (positive), |S'| < t(S)
    // (negative).
    const Rat theta_k = spec.theta * k;
    auto t_of = [&](int s) { return Rat(s) - Rat(k) + theta_k; };

    // Budget: count the (S, S', ρ) family before allocating.
    {
        std::size_t count = 0;
        for (std::uint32_t S = 0; S < (1u << k); ++S) {
            const int s = std::popcount(S);
            const Rat t = t_of(s);
            for (std::uint32_t Sp = 0; Sp < (1u << k); ++Sp) {
                const int sp = std::popcount(Sp);
                if (spec.positive) {
                    if (Rat(sp) < t) continue;
                    if (s == 0 && sp > 0) continue;
                    // |S|^{|S'|} maps, computed with saturation
                    std::size_t maps = 1;
                    for (int m = 0; m < sp; ++m) {
                        maps *= static_cast<std::size_t>(s ? s : 1);
                        if (maps > node_budget) break;
                    }
                    count += maps;
                } else {
                    if (Rat(sp) < t) ++count;
                }
                if (count > node_budget)
                    throw BudgetError("phi formula exceeds node budget",
                                      "k=" + std::to_string(k) +
                                          " budget=" + std::to_string(node_budget));
            }
        }
    }

    const Term y = Term::var("y");
    std::vector<Term> xs;
    for (int i = 1; i <= k; ++i) xs.push_back(Term::var("x" + std::to_string(i)));

    // Shared metric atoms d(y·x_i, x_j).
    std::vector<std::vector<FormulaPtr>> atom(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            atom[static_cast<std::size_t>(i)].push_back(Formula::dist(
                Term::app("mul", {y, xs[static_cast<std::size_t>(i)]}), xs[static_cast<std::size_t>(j)]));

    auto bits_of = [&](std::uint32_t mask) {
        std::vector<int> out;
        for (int b = 0; b < k; ++b)
            if (mask >> b & 1) out.push_back(b);
        return out;
    };

    if (spec.positive) {
        std::vector<FormulaPtr> outer;
        for (std::uint32_t S = 0; S < (1u << k); ++S) {
            const std::vector<int> sElems = bits_of(S);
            const Rat t = t_of(static_cast<int>(sElems.size()));
            std::vector<FormulaPtr> inner;
            for (std::uint32_t Sp = 0; Sp < (1u << k); ++Sp) {
                const std::vector<int> pElems = bits_of(Sp);
                if (Rat(pElems.size()) < t) continue;
                if (pElems.empty()) {
                    inner.push_back(Formula::max_of({})); // dist over empty S' = 0
                    continue;
                }
                if (sElems.empty()) continue; // no map into an empty target
                // All maps ρ : S' → S, odometer over |S|^{|S'|}.
                std::vector<std::size_t> digit(pElems.size(), 0);
                for (;;) {
                    std::vector<FormulaPtr> dists;
                    for (std::size_t p = 0; p < pElems.size(); ++p)
                        dists.push_back(atom[static_cast<std::size_t>(pElems[p])]
                                            [static_cast<std::size_t>(sElems[digit[p]])]);
                    inner.push_back(Formula::max_of(std::move(dists)));
                    std::size_t pos = 0;
                    while (pos < digit.size() && ++digit[pos] == sElems.size()) {
                        digit[pos] = 0;
                        ++pos;
                    }
                    if (pos == digit.size()) break;
                }
            }
            outer.push_back(Formula::min_of(std::move(inner)));
        }
        return Formula::trunc_sub(Formula::max_of(std::move(outer)),
                                  Formula::constant(spec.q));
    }

    // Negative variant.
    std::vector<FormulaPtr> outer;
    for (std::uint32_t S = 0; S < (1u << k); ++S) {
        const std::vector<int> sElems = bits_of(S);
        const Rat t = t_of(static_cast<int>(sElems.size()));
        std::vector<FormulaPtr> inner;
        for (std::uint32_t Sp = 0; Sp < (1u << k); ++Sp) {
            const std::vector<int> pElems = bits_of(Sp);
            if (!(Rat(pElems.size()) < t)) continue;
            std::vector<FormulaPtr> pairs;
            for (int i = 0; i < k; ++i) {
                if (Sp >> i & 1) continue; // y·x_i ∈ S' excluded
                for (int j : sElems)
                    pairs.push_back(atom[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            }
            inner.push_back(Formula::trunc_sub(Formula::constant(spec.q),
                                               Formula::min_of(std::move(pairs))));
        }
        outer.push_back(Formula::min_of(std::move(inner)));
    }
    return Formula::min_of(std::move(outer));
}

// ----------------------------------------------------------------- fast --

namespace {

// Distance matrix m[i][j] = d(y·F[i], F[j]).
std::vector<std::vector<Rat>> translate_distances(const MetricGroup& group,
                                                  const std::vector<std::size_t>& F,
                                                  std::size_t y) {
    const std::size_t k = F.size();
    std::vector<std::vector<Rat>> m(k, std::vector<Rat>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const auto yf = group.mul(y, F[i]);
        if (!yf)
            throw UndefinedProductError("translate undefined",
                                        group.label(y) + " * " + group.label(F[i]));
        for (std::size_t j = 0; j < k; ++j) m[i][j] = group.dist(*yf, F[j]);
    }
    return m;
}

std::size_t mu_threshold(const std::vector<std::vector<Rat>>& m, const Rat& r, bool closed) {
    const std::size_t k = m.size();
    BipartiteInstance g = BipartiteInstance::make(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (closed ? m[i][j] <= r : m[i][j] < r) g.set_edge(i, j);
    return matching_mu(g, MuMethod::Augmenting).mu;
}

// W = min{ r ∈ {0} ∪ distances : μ(H_{<=r}) >= θk }. This equals the
// maximum over S of the ⌈t(S)⌉-th smallest distance from the translates to
// S (the value of the literal formula's inner min-max), by König duality.
Rat matching_threshold_W(const std::vector<std::vector<Rat>>& m, const Rat& theta) {
    const std::size_t k = m.size();
    std::vector<Rat> cands{Rat(0)};
    for (const auto& row : m)
        for (const auto& v : row) cands.push_back(v);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    const Rat target = theta * static_cast<long>(k);
    std::size_t lo = 0, hi = cands.size() - 1; // complete graph at hi: μ = k >= θk
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (Rat(static_cast<long>(mu_threshold(m, cands[mid], true))) >= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return cands[lo];
}

} // namespace

Rat phi_value_fast(const MetricGroup& group, const std::vector<std::size_t>& F, std::size_t y,
                   const PhiSpec& spec) {
    spec.validate();
    if (F.size() != static_cast<std::size_t>(spec.k))
        throw Error("F must list exactly k elements",
                    std::to_string(F.size()) + " vs k=" + std::to_string(spec.k));
    const auto m = translate_distances(group, F, y);
    const Rat W = matching_threshold_W(m, spec.theta);
    if (spec.positive) return W > spec.q ? Rat(W - spec.q) : Rat(0);
    return spec.q > W ? Rat(spec.q - W) : Rat(0);
}

bool phi_holds_fast(const MetricGroup& group, const std::vector<std::size_t>& F, std::size_t y,
                    const PhiSpec& spec) {
    spec.validate();
    if (F.size() != static_cast<std::size_t>(spec.k))
        throw Error("F must list exactly k elements",
                    std::to_string(F.size()) + " vs k=" + std::to_string(spec.k));
    const auto m = translate_distances(group, F, y);
    const Rat target = spec.theta * static_cast<long>(spec.k);
    const Rat mu = Rat(static_cast<long>(mu_threshold(m, spec.q, spec.positive)));
    // positive: closed-ball matching succeeds; negative: open-ball matching
    // fails (which is exactly φ⁻ <= 0).
    return spec.positive ? mu >= target : mu < target;
}

LemmaCheck lemma_equivalence_check(const MetricGroup& group, const std::vector<std::size_t>& F,
                                   std::size_t y, const PhiSpec& spec) {
    LemmaCheck out;
    const FormulaPtr phi = build_phi(spec);
    const Structure st = group.as_structure();
    Assignment a;
    for (std::size_t i = 0; i < F.size(); ++i)
        a["x" + std::to_string(i + 1)] = ElemRef{0, F[i]};
    a["y"] = ElemRef{0, y};
    out.ast_value = eval<Rat>(st, *phi, a);
    out.fast_value = phi_value_fast(group, F, y, spec);
    out.fast_holds = phi_holds_fast(group, F, y, spec);
    out.agree = out.ast_value == out.fast_value && out.fast_holds == (out.fast_value <= 0);
    return out;
}

// ---------------------------------------------------------- certificates --

namespace {

// min over g ∈ E of μ(F, gF, U) − θ|F|; nullopt if any product escapes an
// enumerated ball.
std::optional<Rat> candidate_margin(const MetricGroup& group, const std::vector<std::size_t>& E,
                                    const Rat& theta, const BallSpec& u,
                                    const std::vector<std::size_t>& F) {
    std::optional<Rat> worst;
    for (const std::size_t g : E) {
        std::vector<std::size_t> gF(F.size());
        for (std::size_t i = 0; i < F.size(); ++i) {
            const auto p = group.mul(g, F[i]);
            if (!p) return std::nullopt;
            gF[i] = *p;
        }
        std::size_t mu = 0;
        try {
            mu = matching_mu(build_RU(group, F, gF, u), MuMethod::Augmenting).mu;
        } catch (const UndefinedProductError&) {
            return std::nullopt;
        }
        Rat margin = Rat(static_cast<long>(mu)) - theta * static_cast<long>(F.size());
        if (!worst || margin < *worst) worst = std::move(margin);
    }
    return worst;
}

bool f_lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct CandScan {
    std::uint64_t examined = 0;
    std::uint64_t skipped = 0;
    // Best valid candidate by (margin desc, F lex asc).
    std::optional<std::pair<Rat, std::vector<std::size_t>>> best_valid;
    // Up to 10 best invalid candidates, same order.
    std::vector<CandidateEvidence> closest;

    void offer(const std::vector<std::size_t>& F, const std::optional<Rat>& margin) {
        ++examined;
        if (!margin) {
            ++skipped;
            return;
        }
        if (*margin >= 0) {
            if (!best_valid || *margin > best_valid->first ||
                (*margin == best_valid->first && f_lex_less(F, best_valid->second)))
                best_valid = {*margin, F};
            return;
        }
        CandidateEvidence ev{F, *margin};
        auto pos = std::find_if(closest.begin(), closest.end(), [&](const CandidateEvidence& c) {
            return ev.margin > c.margin || (ev.margin == c.margin && f_lex_less(ev.F, c.F));
        });
        closest.insert(pos, std::move(ev));
        if (closest.size() > 10) closest.pop_back();
    }

    void merge(CandScan&& o) {
        examined += o.examined;
        skipped += o.skipped;
        if (o.best_valid) {
            if (!best_valid || o.best_valid->first > best_valid->first ||
                (o.best_valid->first == best_valid->first &&
                 f_lex_less(o.best_valid->second, best_valid->second)))
                best_valid = std::move(o.best_valid);
        }
        for (auto& ev : o.closest) {
            auto pos =
                std::find_if(closest.begin(), closest.end(), [&](const CandidateEvidence& c) {
                    return ev.margin > c.margin || (ev.margin == c.margin && f_lex_less(ev.F, c.F));
                });
            closest.insert(pos, std::move(ev));
            if (closest.size() > 10) closest.pop_back();
        }
    }
};

// Lexicographic k-combination enumerator over [0, n).
struct Combinations {
    std::size_t n, k;
    std::vector<std::size_t> idx;
    bool done = false;

    Combinations(std::size_t n_, std::size_t k_) : n(n_), k(k_) {
        if (k > n) {
            done = true;
            return;
        }
        idx.resize(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    }

    bool next() {
        if (done) return false;
        // advance
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] + (k - i) < n) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                return true;
            }
        }
        done = true;
        return false;
    }
};

} // namespace

Certificate verify_certificate(const MetricGroup& group, const std::vector<std::size_t>& E,
                               const Rat& theta, const Rat& q, bool closed,
                               const std::vector<std::size_t>& F) {
    Certificate cert;
    cert.E = E;
    cert.theta = theta;
    cert.q = q;
    cert.closed = closed;
    cert.F = F;
    if (E.empty()) {
        cert.status = CertificateStatus::Invalid;
        cert.note = "translation set E is empty";
        return cert;
    }
    if (F.empty()) {
        cert.status = CertificateStatus::Invalid;
        cert.note = "certificate set F is empty";
        return cert;
    }
    const BallSpec u{q, closed};
    bool first = true;
    for (const std::size_t g : E) {
        std::vector<std::size_t> gF(F.size());
        bool ok = true;
        for (std::size_t i = 0; i < F.size(); ++i) {
            const auto p = group.mul(g, F[i]);
            if (!p) {
                cert.status = CertificateStatus::Inconclusive;
                cert.note = "product undefined: " + group.label(g) + " * " + group.label(F[i]);
                ok = false;
                break;
            }
            gF[i] = *p;
        }
        if (!ok) return cert;
        std::size_t mu = 0;
        try {
            mu = matching_mu(build_RU(group, F, gF, u), MuMethod::Augmenting).mu;
        } catch (const UndefinedProductError& e) {
            cert.status = CertificateStatus::Inconclusive;
            cert.note = std::string(e.what()) + ": " + e.detail();
            return cert;
        }
        Rat margin = Rat(static_cast<long>(mu)) - theta * static_cast<long>(F.size());
        if (first || margin < cert.min_margin) cert.min_margin = margin;
        first = false;
        cert.margins.push_back(std::move(margin));
    }
    cert.status = cert.min_margin >= 0 ? CertificateStatus::Valid : CertificateStatus::Invalid;
    return cert;
}

namespace {

SearchOutcome finish_outcome(const MetricGroup& group, const std::vector<std::size_t>& E,
                             const Rat& theta, const Rat& q, bool closed, CandScan&& scan,
                             bool exhausted_family) {
    SearchOutcome out;
    out.examined = scan.examined;
    out.skipped_undefined = scan.skipped;
    out.exhaustive = exhausted_family;
    if (scan.best_valid) {
        out.status = SearchStatus::Found;
        Certificate cert =
            verify_certificate(group, E, theta, q, closed, scan.best_valid->second);
        if (cert.status != CertificateStatus::Valid)
            throw Error("internal: search produced a certificate that fails verification");
        out.certificate = std::move(cert);
        return out;
    }
    out.status = exhausted_family ? SearchStatus::NotFound : SearchStatus::BudgetExhausted;
    out.closest = std::move(scan.closest);
    return out;
}

} // namespace

SearchOutcome folner_search(const MetricGroup& group, const std::vector<std::size_t>& E,
                            const Rat& theta, const Rat& q, bool closed,
                            const SearchConfig& config) {
    if (E.empty()) throw Error("folner_search requires a nonempty translation set E");
    if (theta <= 0 || theta > 1)
        throw Error("theta must lie in (0, 1]", rat_to_string(theta));

    std::vector<std::size_t> ground = config.ground;
    if (ground.empty())
        for (std::size_t i = 0; i < group.size(); ++i) ground.push_back(i);
    std::sort(ground.begin(), ground.end());
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
    const std::size_t cap =
        config.size_cap == 0 ? ground.size() : std::min(config.size_cap, ground.size());
    const BallSpec u{q, closed};

    auto margin_of = [&](const std::vector<std::size_t>& F) {
        return candidate_margin(group, E, theta, u, F);
    };

    switch (config.strategy) {
    case SearchStrategy::Exhaustive: {
        CandScan scan;
        bool truncated = false;
        // Enumerate by size, lexicographic within size; evaluate in parallel
        // batches whose boundaries are independent of the worker count.
        constexpr std::size_t kBatch = 1024;
        for (std::size_t s = 1; s <= cap && !truncated; ++s) {
            Combinations comb(ground.size(), s);
            bool more = !comb.done;
            while (more && !truncated) {
                std::vector<std::vector<std::size_t>> batch;
                while (more && batch.size() < kBatch) {
                    if (scan.examined + batch.size() >= config.budget) {
                        truncated = true;
                        break;
                    }
                    std::vector<std::size_t> F(s);
                    for (std::size_t i = 0; i < s; ++i) F[i] = ground[comb.idx[i]];
                    batch.push_back(std::move(F));
                    more = comb.next();
                }
                if (batch.empty()) break;
                CandScan local = parallel_chunk_reduce<CandScan>(
                    batch.size(), CandScan{}, 64, config.workers,
                    [&](std::size_t b, std::size_t e) {
                        CandScan part;
                        for (std::size_t i = b; i < e; ++i)
                            part.offer(batch[i], margin_of(batch[i]));
                        return part;
                    },
                    [](CandScan& acc, CandScan&& part, std::size_t) {
                        acc.merge(std::move(part));
                    });
                scan.merge(std::move(local));
            }
        }
        return finish_outcome(group, E, theta, q, closed, std::move(scan), !truncated);
    }

    case SearchStrategy::BallGrowing: {
        CandScan scan;
        std::vector<std::vector<std::size_t>> candidates;
        if (group.kind() == MetricGroup::Kind::EnumeratedBall) {
            for (int r = 0; r <= group.word_radius(); ++r) candidates.push_back(group.word_ball(r));
        } else {
            // Cayley balls of E ∪ E⁻¹ around the identity.
            std::vector<std::size_t> gens;
            for (const std::size_t g : E) {
                gens.push_back(g);
                gens.push_back(group.inv(g));
            }
            std::sort(gens.begin(), gens.end());
            gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
            std::vector<bool> in_ball(group.size(), false);
            in_ball[group.identity()] = true;
            std::vector<std::size_t> ball{group.identity()};
            for (;;) {
                candidates.push_back(ball);
                std::vector<std::size_t> grown = ball;
                for (const std::size_t b : ball)
                    for (const std::size_t g : gens) {
                        const auto p = group.mul(b, g);
                        if (p && !in_ball[*p]) {
                            in_ball[*p] = true;
                            grown.push_back(*p);
                        }
                    }
                std::sort(grown.begin(), grown.end());
                if (grown.size() == ball.size()) break;
                ball = std::move(grown);
            }
        }
        for (const auto& F : candidates) {
            if (F.empty()) continue;
            if (scan.examined >= config.budget)
                return finish_outcome(group, E, theta, q, closed, std::move(scan), false);
            const auto margin = margin_of(F);
            scan.offer(F, margin);
            if (margin && *margin >= 0)
                return finish_outcome(group, E, theta, q, closed, std::move(scan), false);
        }
        return finish_outcome(group, E, theta, q, closed, std::move(scan), true);
    }

    case SearchStrategy::GreedyLocal: {
        CandScan scan;
        std::set<std::vector<std::size_t>> visited;
        std::vector<std::size_t> current{group.identity()};
        if (!std::binary_search(ground.begin(), ground.end(), group.identity()))
            current = {ground.front()};
        auto cur_margin = margin_of(current);
        scan.offer(current, cur_margin);
        visited.insert(current);
        if (cur_margin && *cur_margin >= 0)
            return finish_outcome(group, E, theta, q, closed, std::move(scan), false);
        for (;;) {
            std::optional<std::pair<Rat, std::vector<std::size_t>>> best;
            for (const std::size_t g : ground) {
                std::vector<std::size_t> next = current;
                auto it = std::find(next.begin(), next.end(), g);
                if (it != next.end()) {
                    next.erase(it);
                    if (next.empty()) continue;
                } else {
                    next.insert(std::upper_bound(next.begin(), next.end(), g), g);
                }
                if (next.size() > cap || visited.count(next)) continue;
                if (scan.examined >= config.budget)
                    return finish_outcome(group, E, theta, q, closed, std::move(scan), false);
                const auto margin = margin_of(next);
                scan.offer(next, margin);
                visited.insert(next);
                if (margin && *margin >= 0)
                    return finish_outcome(group, E, theta, q, closed, std::move(scan), false);
                if (margin && (!best || *margin > best->first ||
                               (*margin == best->first && f_lex_less(next, best->second))))
                    best = {*margin, next};
            }
            if (!best || (cur_margin && best->first < *cur_margin)) break; // local optimum
            current = best->second;
            cur_margin = best->first;
        }
        return finish_outcome(group, E, theta, q, closed, std::move(scan), true);
    }
    }
    throw Error("unknown search strategy");
}

// ----------------------------------------------------------------- schema --

SchemaReport schema_value(const MetricGroup& group, const PhiSpec& base,
                          const SchemaConfig& config) {
    SchemaReport report;
    report.positive = base.positive;
    report.theta = base.theta;
    report.q = base.q;

    std::vector<std::size_t> ground = config.ground;
    if (ground.empty())
        for (std::size_t i = 0; i < group.size(); ++i) ground.push_back(i);
    std::sort(ground.begin(), ground.end());
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());

    std::vector<std::vector<std::size_t>> tuples = config.y_tuples;
    if (tuples.empty()) {
        Rng rng(config.seed);
        for (std::size_t t = 0; t < config.tuple_samples; ++t) {
            Rng local = rng.fork(t);
            std::vector<std::size_t> tup;
            for (int i = 0; i < config.tuple_len; ++i)
                tup.push_back(ground[static_cast<std::size_t>(local.below(ground.size()))]);
            tuples.push_back(std::move(tup));
        }
    }

    for (const auto& tup : tuples) {
        SchemaTupleReport tr;
        tr.y = tup;
        bool any_zero = false;
        bool all_exact_positive = true;
        const int kmax = std::min<int>(config.k_max, static_cast<int>(ground.size()));
        for (int k = 1; k <= kmax; ++k) {
            SchemaKEntry entry;
            entry.k = k;
            PhiSpec spec = base;
            spec.k = k;
            std::optional<Rat> best;
            std::vector<std::size_t> bestF;
            bool truncated = false;
            Combinations comb(ground.size(), static_cast<std::size_t>(k));
            bool more = !comb.done;
            while (more) {
                if (entry.examined >= config.budget_per_k) {
                    truncated = true;
                    break;
                }
                std::vector<std::size_t> F(static_cast<std::size_t>(k));
                for (std::size_t i = 0; i < F.size(); ++i) F[i] = ground[comb.idx[i]];
                ++entry.examined;
                std::optional<Rat> worst;
                bool defined = true;
                for (const std::size_t yel : tup) {
                    try {
                        Rat v = phi_value_fast(group, F, yel, spec);
                        if (!worst || v > *worst) worst = std::move(v);
                    } catch (const UndefinedProductError&) {
                        defined = false;
                        break;
                    }
                }
                if (defined && worst && (!best || *worst < *best)) {
                    best = *worst;
                    bestF = F;
                    if (*best == 0) break; // exact minimum reached
                }
                more = comb.next();
            }
            entry.exhaustive = !truncated && !more;
            if (best) {
                entry.value = *best;
                entry.best_F = bestF;
            }
            entry.bound_kind =
                best ? ((entry.exhaustive || *best == 0) ? "exact" : "upper-bound") : "upper-bound";
            if (best && *best == 0) any_zero = true;
            if (!(entry.bound_kind == "exact" && best && *best > 0)) all_exact_positive = false;
            tr.per_k.push_back(std::move(entry));
        }

        // Refuting "some k works" (or certifying "no k works") needs the full
        // subset family: every k up to |ground| exhausted.
        const bool family_exhausted = all_exact_positive && !tr.per_k.empty() &&
                                      static_cast<std::size_t>(config.k_max) >= ground.size();
        if (report.positive) {
            if (any_zero)
                tr.status = TupleStatus::HoldsCertified;
            else if (family_exhausted)
                tr.status = TupleStatus::FailsCertified;
        } else {
            if (any_zero)
                tr.status = TupleStatus::FailsCertified;
            else if (family_exhausted)
                tr.status = TupleStatus::HoldsCertified;
        }
        report.tuples.push_back(std::move(tr));
    }

    bool all_hold = !report.tuples.empty();
    bool any_fail = false;
    for (const auto& tr : report.tuples) {
        if (tr.status != TupleStatus::HoldsCertified) all_hold = false;
        if (tr.status == TupleStatus::FailsCertified) any_fail = true;
    }
    report.verdict = any_fail ? SchemaVerdict::RefutedForSample
                              : (all_hold ? SchemaVerdict::CertifiedForSamples
                                          : SchemaVerdict::Inconclusive);
    return report;
}

} // namespace mlc
