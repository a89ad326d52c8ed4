#pragma once

#include <array>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "tripart/analysis.hpp"
#include "tripart/broken.hpp"

// Covering through partitioning: down-closure turns a cover into an exact
// partition, the cover-number table C[X] stratifies the small subsets, and a
// three-way partitioning backend (exact trilinear counter or the randomized
// broken pipeline) decides whether three strata tile the universe.
//
// Solutions of one or two sets never reach the triple enumeration (it needs
// t1,t2,t3 >= 1): they are caught by direct membership and disjoint-pair
// lookups first.

namespace tripart {

struct SetCoverInstance {
    unsigned n = 0;
    SetFamily family;
    unsigned t = 1;  // budget
    unsigned k = 0;  // max set size

    static SetCoverInstance make(unsigned n, SetFamily family, unsigned t) {
        SetCoverInstance inst;
        inst.n = n;
        inst.t = t;
        inst.k = 0;
        for (auto m : family.members)
            inst.k = std::max<unsigned>(inst.k, std::popcount(m));
        inst.family = std::move(family);
        if (t < 1) throw std::invalid_argument("SetCoverInstance: budget must be >= 1");
        return inst;
    }
};

// All subsets of members of F.  |result| <= 2^k |F|.
inline SetFamily down_closure(const SetFamily& F, unsigned k) {
    if (k > 20) throw std::invalid_argument("down_closure: k above enumeration cap 20");
    for (auto m : F.members)
        if (std::popcount(m) > static_cast<int>(k))
            throw std::invalid_argument("down_closure: member larger than k");
    std::vector<std::uint64_t> masks;
    for (auto m : F.members) {
        std::uint64_t sub = m;
        for (;;) {
            masks.push_back(sub);
            if (sub == 0) break;
            sub = (sub - 1) & m;
        }
    }
    return SetFamily(F.n, std::move(masks));
}

inline bool is_down_closed(const SetFamily& F) {
    for (auto m : F.members) {
        std::uint64_t rest = m;
        while (rest) {
            std::uint64_t bit = rest & (~rest + 1);
            if (!F.contains(m ^ bit)) return false;
            rest ^= bit;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Cover numbers: C[X] = least number of family sets partitioning X exactly
// ---------------------------------------------------------------------------

struct CoverTable {
    static constexpr std::uint16_t INF = 0xffff;
    unsigned n = 0;
    unsigned size_cap = 0;               // only |X| <= size_cap is computed
    std::vector<std::uint16_t> c;        // 2^n entries

    std::uint16_t at(std::uint64_t mask) const { return c[mask]; }
};

// C[X] over all X with |X| <= size_cap, by increasing popcount, via
// C[X] = min over nonempty Y in F_SP with Y subseteq X of C[X \ Y] + 1.
inline CoverTable cover_number_dp(const SetFamily& F_SP, unsigned size_cap) {
    if (!is_down_closed(F_SP))
        throw std::invalid_argument("cover_number_dp: family not down-closed");
    check_dense_universe(F_SP.n);
    const unsigned n = F_SP.n;
    CoverTable table;
    table.n = n;
    table.size_cap = size_cap;
    table.c.assign(std::size_t(1) << n, CoverTable::INF);
    table.c[0] = 0;

    std::vector<std::vector<std::uint64_t>> by_popcount(n + 1);
    for (std::uint64_t m = 0; m < (1ull << n); ++m) {
        unsigned pc = std::popcount(m);
        if (pc >= 1 && pc <= size_cap) by_popcount[pc].push_back(m);
    }
    for (unsigned pc = 1; pc <= size_cap && pc <= n; ++pc)
        for (auto x : by_popcount[pc]) {
            std::uint32_t best = CoverTable::INF;
            for (auto y : F_SP.members) {
                if (y == 0 || (y & x) != y) continue;
                std::uint32_t sub = table.c[x ^ y];
                if (sub + 1 < best) best = sub + 1;
            }
            table.c[x] = static_cast<std::uint16_t>(best);
        }
    return table;
}

// C_i = {X : 1 <= |X| <= size_cap, C[X] = i}; index 0 is left empty.
inline std::vector<SetFamily> stratify(const CoverTable& table) {
    unsigned max_c = 0;
    for (std::uint64_t m = 1; m < (1ull << table.n); ++m)
        if (table.c[m] != CoverTable::INF)
            max_c = std::max<unsigned>(max_c, table.c[m]);
    std::vector<std::vector<std::uint64_t>> buckets(max_c + 1);
    for (std::uint64_t m = 1; m < (1ull << table.n); ++m)
        if (table.c[m] != CoverTable::INF) buckets[table.c[m]].push_back(m);
    std::vector<SetFamily> strata;
    strata.reserve(max_c + 1);
    for (auto& b : buckets) strata.emplace_back(table.n, std::move(b));
    return strata;
}

// ---------------------------------------------------------------------------
// Three-way partitioning backends
// ---------------------------------------------------------------------------

using ThreeWayBackend =
    std::function<bool(const SetFamily&, const SetFamily&, const SetFamily&)>;

// Exact: the rational trilinear count is nonzero iff a partition exists.
inline ThreeWayBackend exact_trilinear_backend() {
    return [](const SetFamily& F, const SetFamily& G, const SetFamily& H) {
        RationalRing q;
        return !trilinear_partition_count(q, F, G, H).is_zero();
    };
}

// Randomized: the broken pipeline with the permutation wrapper.  q is
// floor(sigma n / d) unless overridden; s is ceil(theta^(-n) n) unless
// overridden.  One-sided, so a YES from this backend is always correct.
template <unsigned P>
struct BrokenBackendOptions {
    QDecomposition<Gf<P>> dec;       // decomposition of Q^(x)d
    Rational sigma = Rational(1, 1000);
    Rational tau = Rational(1, 1000);
    std::optional<unsigned> q_override;
    std::optional<std::uint64_t> repeats_override;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::uint64_t* repeats_consumed = nullptr;  // optional out-statistic
};

template <unsigned P>
ThreeWayBackend broken_randomized_backend(BrokenBackendOptions<P> opt) {
    return [opt = std::move(opt)](const SetFamily& F, const SetFamily& G,
                                  const SetFamily& H) {
        const unsigned n = F.n;
        const unsigned d = opt.dec.d;
        unsigned q;
        if (opt.q_override) {
            q = *opt.q_override;
        } else {
            Rational qs = opt.sigma * n / d;
            q = static_cast<unsigned>(numerator(qs) / denominator(qs));
        }
        if (3ull * d * q > n) throw std::invalid_argument("broken backend: 3dq > n");
        auto bs = BlockStructure::for_universe(n, d, q);
        std::uint64_t s;
        if (opt.repeats_override) {
            s = *opt.repeats_override;
        } else if (q == 0) {
            s = 1;  // nothing is broken, a single evaluation decides
        } else {
            BigInt reps = repeat_count(n, theta_value(opt.sigma, opt.tau));
            s = reps > 1'000'000 ? 1'000'000ull : static_cast<std::uint64_t>(reps);
        }
        auto r = random_permutation_wrapper<P>(F, G, H, bs, opt.dec, s, opt.seed,
                                               opt.threads);
        if (opt.repeats_consumed) *opt.repeats_consumed += r.repeats_used;
        return r.found;
    };
}

// ---------------------------------------------------------------------------
// The reduction driver
// ---------------------------------------------------------------------------

struct SolveOutcome {
    bool yes = false;
    std::string route;  // "single", "pair", "triple", "none"
    std::array<unsigned, 3> triple{0, 0, 0};
};

class PartitioningSolver {
  public:
    // family must be down-closed.  The stratum size cap is
    // min(n, max(floor((1/3+tau) n), floor(n/3) + k)): the balancing move
    // argument guarantees parts of size at most n/3 + k, which only stays
    // under (1/3+tau)n asymptotically (k <= tau n); at small n the second
    // term is the binding one.
    PartitioningSolver(const SetFamily& down_closed, const Rational& tau)
        : n_(down_closed.n), fsp_(down_closed) {
        if (!(tau > 0)) throw std::invalid_argument("PartitioningSolver: tau <= 0");
        unsigned k = 0;
        for (auto m : fsp_.members) k = std::max<unsigned>(k, std::popcount(m));
        Rational cap_r = (Rational(1, 3) + tau) * n_;
        auto cap_tau = static_cast<unsigned>(numerator(cap_r) / denominator(cap_r));
        size_cap_ = std::min(n_, std::max(cap_tau, n_ / 3 + k));
        table_ = cover_number_dp(fsp_, size_cap_);
        strata_ = stratify(table_);
        const std::uint64_t full = fsp_.full_mask();
        has_full_ = fsp_.contains(full);
        has_pair_ = false;
        for (auto m : fsp_.members)
            if (m != 0 && m != full && fsp_.contains(full ^ m)) {
                has_pair_ = true;
                break;
            }
    }

    unsigned size_cap() const { return size_cap_; }
    const CoverTable& cover_table() const { return table_; }
    const std::vector<SetFamily>& strata() const { return strata_; }

    SolveOutcome solve(unsigned t, const ThreeWayBackend& backend) {
        SolveOutcome out;
        out.route = "none";
        if (n_ == 0) {  // empty universe is covered by the empty union
            out.yes = true;
            out.route = "single";
            return out;
        }
        if (t > n_) t = n_;  // a partition never needs more than n nonempty sets
        if (t >= 1 && has_full_) {
            out.yes = true;
            out.route = "single";
            return out;
        }
        if (t >= 2 && has_pair_) {
            out.yes = true;
            out.route = "pair";
            return out;
        }
        const unsigned levels = static_cast<unsigned>(strata_.size());
        for (unsigned t1 = 1; t1 + 2 <= t; ++t1) {
            if (t1 >= levels || strata_[t1].size() == 0) continue;
            for (unsigned t2 = t1; t1 + t2 + 1 <= t; ++t2) {
                if (t2 >= levels || strata_[t2].size() == 0) continue;
                for (unsigned t3 = t2; t1 + t2 + t3 <= t; ++t3) {
                    if (t3 >= levels || strata_[t3].size() == 0) continue;
                    // three parts of size <= cap cannot tile a larger universe
                    if (3ull * size_cap_ < n_) continue;
                    if (query(t1, t2, t3, backend)) {
                        out.yes = true;
                        out.route = "triple";
                        out.triple = {t1, t2, t3};
                        return out;
                    }
                }
            }
        }
        return out;
    }

  private:
    bool query(unsigned a, unsigned b, unsigned c, const ThreeWayBackend& backend) {
        auto key = std::array<unsigned, 3>{a, b, c};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool r = backend(strata_[a], strata_[b], strata_[c]);
        memo_.emplace(key, r);
        return r;
    }

    unsigned n_ = 0;
    SetFamily fsp_;
    unsigned size_cap_ = 0;
    CoverTable table_;
    std::vector<SetFamily> strata_;
    bool has_full_ = false, has_pair_ = false;
    std::map<std::array<unsigned, 3>, bool> memo_;
};

// One-shot k-Set Partitioning on a down-closed family.
inline SolveOutcome solve_partitioning(const SetFamily& down_closed, unsigned t,
                                       const ThreeWayBackend& backend,
                                       const Rational& tau = Rational(1, 1000)) {
    PartitioningSolver solver(down_closed, tau);
    return solver.solve(t, backend);
}

// k-Set Cover: down-close, then partition.
inline SolveOutcome solve_setcover(const SetCoverInstance& inst,
                                   const ThreeWayBackend& backend,
                                   const Rational& tau = Rational(1, 1000)) {
    auto fsp = down_closure(inst.family, inst.k);
    return solve_partitioning(fsp, inst.t, backend, tau);
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

// Classic subset dynamic programming: least number of sets covering each
// mask.  O(2^n m n) time, n <= 26.
inline std::vector<std::uint16_t> bellman_cover_numbers(const SetFamily& F) {
    if (F.n > 26) throw std::length_error("bellman_cover_numbers: n above 26");
    std::vector<std::uint16_t> dp(std::size_t(1) << F.n, CoverTable::INF);
    dp[0] = 0;
    for (std::uint64_t mask = 0; mask < dp.size(); ++mask) {
        if (dp[mask] == CoverTable::INF) continue;
        for (auto s : F.members) {
            std::uint64_t next = mask | s;
            if (dp[next] > dp[mask] + 1)
                dp[next] = static_cast<std::uint16_t>(dp[mask] + 1);
        }
    }
    return dp;
}

inline bool baseline_bellman(const SetCoverInstance& inst) {
    auto dp = bellman_cover_numbers(inst.family);
    return dp[inst.family.full_mask()] <= inst.t;
}

// ---------------------------------------------------------------------------
// The balancing move procedure: split disjoint sets into three parts with
// union sizes at most n/3 + k
// ---------------------------------------------------------------------------

inline std::array<std::vector<std::uint64_t>, 3> rebalance_three_parts(
    std::vector<std::uint64_t> sets, unsigned n) {
    std::erase_if(sets, [](std::uint64_t m) { return m == 0; });
    unsigned k = 0;
    for (auto m : sets) k = std::max<unsigned>(k, std::popcount(m));
    std::array<std::vector<std::uint64_t>, 3> parts;
    for (std::size_t i = 0; i < sets.size(); ++i) parts[i % 3].push_back(sets[i]);
    auto weight = [](const std::vector<std::uint64_t>& part) {
        unsigned a = 0;
        for (auto m : part) a += std::popcount(m);
        return a;
    };
    for (;;) {
        std::array<unsigned, 3> a{weight(parts[0]), weight(parts[1]), weight(parts[2])};
        int big = -1, small = 0;
        for (int i = 0; i < 3; ++i) {
            if (3ull * a[i] > n + 3ull * k) big = i;
            if (a[i] < a[small]) small = i;
        }
        if (big < 0) return parts;
        parts[small].push_back(parts[big].back());
        parts[big].pop_back();
    }
}

}  // namespace tripart
