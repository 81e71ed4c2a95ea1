#pragma once

// Hard-instance set families: selector instantiation of width families,
// sparsity and independence checks, the modified set-cover valuation and
// average-intersection collections.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "calab/rng.hpp"
#include "calab/valuations.hpp"
#include "calab/width_family.hpp"

namespace calab {

/// Default cap on the number of candidate sub-collections any enumeration in
/// this header may visit.
inline constexpr std::uint64_t kDefaultEnumerationBudget = 50'000'000;

/// F[b, C]: k x k sets S[i][j].
struct InstantiatedCollection {
    int m = 0;
    std::vector<std::vector<Bundle>> sets;
    std::string family_id;  // provenance, may be empty
    SelectorPair selector;

    /// Row-major list S[0][0], S[0][1], ..., S[k-1][k-1].
    std::vector<Bundle> flat() const {
        std::vector<Bundle> out;
        for (const auto& row : sets) out.insert(out.end(), row.begin(), row.end());
        return out;
    }
};

inline Bundle instantiated_set(const KWidthFamily& f, const SelectorPair& sel, int i, int j) {
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    const Bundle g = f.g[ui];
    const Bundle gc = g.complement(f.m);
    if (sel.b[ui] == 0) return sel.c[ui][uj] == 0 ? (g | f.h0[ui][uj]) : (g | (gc - f.h0[ui][uj]));
    return sel.c[ui][uj] == 0 ? (gc | f.h1[ui][uj]) : (gc | (g - f.h1[ui][uj]));
}

inline InstantiatedCollection instantiate_collection(const KWidthFamily& f, const SelectorPair& sel,
                                                     std::string family_id = {}) {
    f.validate();
    sel.validate(f.k);
    InstantiatedCollection out{f.m, {}, std::move(family_id), sel};
    out.sets.resize(static_cast<std::size_t>(f.k));
    for (int i = 0; i < f.k; ++i)
        for (int j = 0; j < f.k; ++j) out.sets[static_cast<std::size_t>(i)].push_back(instantiated_set(f, sel, i, j));
    return out;
}

// ---------------------------------------------------------------------------
// Sub-collection enumeration helpers.

namespace detail {

inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t r, std::uint64_t cap) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
        if (acc > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(acc);
}

}  // namespace detail

struct SparsityResult {
    bool sparse = true;
    std::vector<std::size_t> witness;  // indices of a covering sub-collection when !sparse
};

/// l-sparse: no l-1 (or fewer) sets of the collection union to [m]. Searches
/// sub-collections by increasing size, lexicographically within a size, so
/// the reported witness is the first minimal cover in that order.
inline SparsityResult is_l_sparse(const std::vector<Bundle>& collection, int l, int m,
                                  std::uint64_t budget = kDefaultEnumerationBudget) {
    if (l < 1) throw UsageError("is_l_sparse: l must be positive");
    const Bundle full = Bundle::full(m);
    const std::size_t d = collection.size();
    const std::size_t max_r = std::min<std::size_t>(static_cast<std::size_t>(l - 1), d);
    std::uint64_t work = 0;
    for (std::size_t r = 1; r <= max_r; ++r) {
        work += detail::binomial_capped(d, r, budget);
        if (work > budget)
            throw BudgetExceeded("is_l_sparse: " + std::to_string(d) + " sets with l=" + std::to_string(l) +
                                 " exceeds the enumeration budget of " + std::to_string(budget));
    }
    SparsityResult result;
    for (std::size_t r = 1; r <= max_r; ++r) {
        const bool found = detail::for_each_combination(d, r, [&](const std::vector<std::size_t>& idx) {
            Bundle u;
            for (auto i : idx) u = u | collection[i];
            if (u == full) {
                result.sparse = false;
                result.witness = idx;
                return true;
            }
            return false;
        });
        if (found) break;
    }
    return result;
}

struct IndependenceResult {
    bool independent = true;
    bool exhaustive = true;
    std::uint64_t selectors_checked = 0;
    std::optional<SelectorPair> witness_selector;
    std::vector<std::size_t> witness_sets;  // row-major indices into F[b, C]
};

struct IndependenceMode {
    bool exhaustive = true;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;

    static IndependenceMode exhaustive_sweep() { return {true, 0, 0}; }
    static IndependenceMode sampled(std::uint64_t seed, std::uint64_t trials) { return {false, seed, trials}; }
};

/// l-independent: every F[b, C] is l-sparse. In sampled mode a true result
/// only means no violation was found among the drawn selectors.
inline IndependenceResult is_l_independent(const KWidthFamily& f, int l, IndependenceMode mode,
                                           std::uint64_t budget = kDefaultEnumerationBudget) {
    f.validate();
    const int bits = f.k + f.k * f.k;
    IndependenceResult result;
    result.exhaustive = mode.exhaustive;

    auto check = [&](const SelectorPair& sel) {
        ++result.selectors_checked;
        const auto coll = instantiate_collection(f, sel).flat();
        const auto sp = is_l_sparse(coll, l, f.m, budget);
        if (!sp.sparse) {
            result.independent = false;
            result.witness_selector = sel;
            result.witness_sets = sp.witness;
            return true;
        }
        return false;
    };

    if (mode.exhaustive) {
        if (bits > 40)
            throw BudgetExceeded("is_l_independent: 2^" + std::to_string(bits) + " selector pairs in exhaustive mode");
        const std::uint64_t count = std::uint64_t{1} << bits;
        const std::uint64_t per =
            std::max<std::uint64_t>(1, detail::binomial_capped(static_cast<std::uint64_t>(f.k) * f.k,
                                                               static_cast<std::uint64_t>(std::max(l - 1, 0)), budget));
        if (count > budget || per > budget / count)
            throw BudgetExceeded("is_l_independent: exhaustive sweep of 2^" + std::to_string(bits) +
                                 " selector pairs exceeds the enumeration budget of " + std::to_string(budget));
        for (std::uint64_t code = 0; code < count; ++code)
            if (check(SelectorPair::from_code(code, f.k))) break;
    } else {
        Rng rng(mode.seed);
        for (std::uint64_t t = 0; t < mode.trials; ++t) {
            SelectorPair sel = SelectorPair::zeros(f.k);
            for (auto& x : sel.b) x = rng.coin() ? 1 : 0;
            for (auto& row : sel.c)
                for (auto& x : row) x = rng.coin() ? 1 : 0;
            if (check(sel)) break;
        }
    }
    return result;
}

/// Two-layer random construction: each G_i holds every item independently
/// with probability 1/2; H0[i][j] and H1[i][j] keep each item of the
/// complement of G_i (resp. G_i) independently with probability 1/2.
inline KWidthFamily random_width_family(int m, int k, Rng& rng) {
    if (m < 1 || m > kMaxItems) throw UsageError("random_width_family: m outside 1.." + std::to_string(kMaxItems));
    if (k < 1) throw UsageError("random_width_family: k must be positive");
    const std::uint64_t full = Bundle::full(m).bits();
    KWidthFamily f;
    f.m = m;
    f.k = k;
    const auto uk = static_cast<std::size_t>(k);
    f.g.resize(uk);
    f.h0.assign(uk, std::vector<Bundle>(uk));
    f.h1.assign(uk, std::vector<Bundle>(uk));
    for (std::size_t i = 0; i < uk; ++i) f.g[i] = Bundle(rng.bits() & full);
    for (std::size_t i = 0; i < uk; ++i) {
        const std::uint64_t g = f.g[i].bits();
        for (std::size_t j = 0; j < uk; ++j) {
            f.h0[i][j] = Bundle(rng.bits() & ~g & full);
            f.h1[i][j] = Bundle(rng.bits() & g);
        }
    }
    return f;
}

struct GeneratedFamily {
    KWidthFamily family;
    int attempts = 0;  // families drawn, including the accepted one
    IndependenceResult verification;
};

/// Draws width families until one is verified l-independent (exhaustively)
/// or `max_retries` redraws are used up; nullopt in the latter case.
inline std::optional<GeneratedFamily> generate_independent_family(int m, int k, int l, Rng& rng, int max_retries,
                                                                  std::uint64_t budget = kDefaultEnumerationBudget) {
    for (int attempt = 1; attempt <= max_retries + 1; ++attempt) {
        KWidthFamily f = random_width_family(m, k, rng);
        auto verdict = is_l_independent(f, l, IndependenceMode::exhaustive_sweep(), budget);
        if (verdict.independent) return GeneratedFamily{std::move(f), attempt, std::move(verdict)};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Modified set-cover valuation.

/// Minimum number of sets of the collection covering X; max{l, d} when the
/// collection does not cover X. Searches sub-collections by increasing size.
inline int sigma(const std::vector<Bundle>& collection, int l, Bundle x,
                 std::uint64_t budget = kDefaultEnumerationBudget) {
    if (x.empty()) return 0;
    const int d = static_cast<int>(collection.size());
    Bundle all;
    for (const auto& s : collection) all = all | s;
    if (!x.subset_of(all)) return std::max(l, d);
    std::uint64_t work = 0;
    for (int r = 1; r <= d; ++r) {
        work += detail::binomial_capped(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(r), budget);
        if (work > budget) throw BudgetExceeded("sigma: cover search exceeds the enumeration budget");
        const bool found = detail::for_each_combination(static_cast<std::size_t>(d), static_cast<std::size_t>(r),
                                                        [&](const std::vector<std::size_t>& idx) {
                                                            Bundle u;
                                                            for (auto i : idx) u = u | collection[i];
                                                            return x.subset_of(u);
                                                        });
        if (found) return r;
    }
    return std::max(l, d);  // unreachable: the whole collection covers x
}

inline constexpr int kSetCoverMaxItems = 16;

/// v(X) = sigma(X) and v(complement X) = l - sigma(X) whenever sigma(X) < l/2;
/// every other bundle gets l/2. Backed by a materialized 2^m table.
class SetCoverValuation {
public:
    Value value(Bundle s) const { return table_.at(s.bits()); }
    int item_count() const { return m_; }
    ValuationKind kind() const { return ValuationKind::kSetCover; }

    const std::vector<Bundle>& collection() const { return collection_; }
    int l() const { return l_; }
    const std::vector<Value>& table() const { return table_; }

    friend SetCoverValuation build_set_cover_valuation(const std::vector<Bundle>& collection, int l, int m,
                                                       unsigned precision, std::uint64_t budget);

private:
    SetCoverValuation() = default;

    int m_ = 0;
    int l_ = 0;
    std::vector<Bundle> collection_;
    std::vector<Value> table_;
};

/// Refuses collections that are not l-sparse. Throws ConstructionError if
/// two rules assign different values to the same bundle.
inline SetCoverValuation build_set_cover_valuation(const std::vector<Bundle>& collection, int l, int m,
                                                   unsigned precision = kDefaultPrecision,
                                                   std::uint64_t budget = kDefaultEnumerationBudget) {
    if (m < 0 || m > kSetCoverMaxItems)
        throw UsageError("set-cover valuation: m must be in 0.." + std::to_string(kSetCoverMaxItems));
    if (l < 1) throw UsageError("set-cover valuation: l must be positive");
    if (precision < 1) throw UsageError("set-cover valuation: precision must be >= 1 to hold l/2");
    for (const auto& s : collection)
        if (!s.within(m)) throw UsageError("set-cover valuation: set " + s.to_string() + " outside [m]");
    if (const auto sp = is_l_sparse(collection, l, m, budget); !sp.sparse)
        throw UsageError("set-cover valuation: collection is not " + std::to_string(l) + "-sparse");

    const std::size_t n = std::size_t{1} << m;
    const std::uint64_t full = Bundle::full(m).bits();

    // cover[X] = min r with X inside a union of r sets, computed only for
    // r < l/2 (the rule never reads larger counts); kNone otherwise.
    constexpr int kNone = std::numeric_limits<int>::max();
    std::vector<int> cover(n, kNone);
    std::vector<char> reached(n, 0);
    std::vector<std::uint64_t> frontier{0};
    reached[0] = 1;
    cover[0] = 0;
    for (int r = 1; 2 * r < l; ++r) {
        std::vector<std::uint64_t> next;
        for (auto u : frontier)
            for (const auto& s : collection) {
                const std::uint64_t w = u | s.bits();
                if (!reached[w]) {
                    reached[w] = 1;
                    cover[w] = r;
                    next.push_back(w);
                }
            }
        frontier = std::move(next);
    }
    // exact unions -> any subset of a union (superset minimum)
    for (int j = 0; j < m; ++j)
        for (std::uint64_t x = 0; x < n; ++x)
            if (((x >> j) & 1U) == 0) cover[x] = std::min(cover[x], cover[x | (std::uint64_t{1} << j)]);

    SetCoverValuation v;
    v.m_ = m;
    v.l_ = l;
    v.collection_ = collection;
    std::vector<std::optional<Value>> assigned(n);
    auto assign = [&](std::uint64_t x, const Value& val) {
        if (assigned[x] && *assigned[x] != val)
            throw ConstructionError("set-cover valuation: not well defined at " + Bundle(x).to_string() + " (" +
                                    assigned[x]->to_string() + " vs " + val.to_string() + ")");
        assigned[x] = val;
    };
    for (std::uint64_t x = 0; x < n; ++x) {
        const int s = cover[x];
        if (s == kNone || 2 * s >= l) continue;
        assign(x, Value::from_integer(s, precision));
        assign(~x & full, Value::from_integer(l - s, precision));
    }
    const Value half = Value::from_raw(static_cast<std::int64_t>(l) << (precision - 1), precision);
    v.table_.reserve(n);
    for (std::uint64_t x = 0; x < n; ++x) v.table_.push_back(assigned[x] ? *assigned[x] : half);
    return v;
}

// ---------------------------------------------------------------------------
// Average-intersection collections.

/// Sets of size b*m with pairwise intersections at most 2 b^2 m; b = num/den.
struct AvgIntersectionFamily {
    int m = 0;
    std::int64_t b_num = 0;
    std::int64_t b_den = 1;
    std::vector<Bundle> sets;

    int set_size() const { return static_cast<int>(b_num * m / b_den); }
    /// |G1 n G2| <= 2 b^2 m, compared exactly.
    bool intersection_ok(int size) const {
        return static_cast<__int128>(size) * b_den * b_den <= static_cast<__int128>(2) * b_num * b_num * m;
    }
    /// floor(2 b^2 m)
    int intersection_cap() const {
        return static_cast<int>((static_cast<__int128>(2) * b_num * b_num * m) / (static_cast<__int128>(b_den) * b_den));
    }
};

class RetriesExhausted : public ConstructionError {
public:
    RetriesExhausted(const std::string& what, int worst) : ConstructionError(what), worst_intersection(worst) {}
    int worst_intersection;
};

namespace detail {

// Uniform random subset of [m] of the given size (partial Fisher-Yates).
inline Bundle random_subset_of_size(int m, int size, Rng& rng) {
    std::vector<int> items(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) items[static_cast<std::size_t>(j)] = j + 1;
    Bundle out;
    for (int t = 0; t < size; ++t) {
        const auto pick = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - t)));
        std::swap(items[static_cast<std::size_t>(t)], items[static_cast<std::size_t>(pick)]);
        out.insert(items[static_cast<std::size_t>(t)]);
    }
    return out;
}

}  // namespace detail

/// Draws `target_size` uniform (b*m)-subsets one at a time, redrawing any set
/// that duplicates or over-intersects an accepted one. Redraws count against
/// `max_retries` in total.
inline AvgIntersectionFamily random_avg_intersection_family(int m, std::int64_t b_num, std::int64_t b_den,
                                                            int target_size, Rng& rng, int max_retries,
                                                            int* retries_used = nullptr) {
    if (m < 1 || m > kMaxItems) throw UsageError("avg-intersection: m outside 1.." + std::to_string(kMaxItems));
    if (b_num <= 0 || b_den <= 0 || b_num > b_den) throw UsageError("avg-intersection: b must be in (0, 1]");
    if ((b_num * m) % b_den != 0) throw UsageError("avg-intersection: b*m must be an integer");
    if (target_size < 0) throw UsageError("avg-intersection: negative target size");
    AvgIntersectionFamily fam{m, b_num, b_den, {}};
    const int size = fam.set_size();
    int retries = 0;
    int worst = 0;
    while (static_cast<int>(fam.sets.size()) < target_size) {
        const Bundle cand = detail::random_subset_of_size(m, size, rng);
        bool ok = true;
        for (const auto& g : fam.sets) {
            const int inter = (g & cand).size();
            if (g == cand || !fam.intersection_ok(inter)) {
                ok = false;
                worst = std::max(worst, inter);
                break;
            }
        }
        if (ok) {
            fam.sets.push_back(cand);
            continue;
        }
        if (++retries > max_retries) {
            if (retries_used != nullptr) *retries_used = retries - 1;
            throw RetriesExhausted("avg-intersection: retries exhausted after " + std::to_string(max_retries) +
                                       " redraws; worst intersection " + std::to_string(worst) + " > cap " +
                                       std::to_string(fam.intersection_cap()),
                                   worst);
        }
    }
    if (retries_used != nullptr) *retries_used = retries;
    return fam;
}

/// Re-checks the size and pairwise-intersection invariants.
inline bool verify_avg_intersection(const AvgIntersectionFamily& fam) {
    for (std::size_t a = 0; a < fam.sets.size(); ++a) {
        if (fam.sets[a].size() != fam.set_size() || !fam.sets[a].within(fam.m)) return false;
        for (std::size_t b = a + 1; b < fam.sets.size(); ++b)
            if (fam.sets[a] == fam.sets[b] || !fam.intersection_ok((fam.sets[a] & fam.sets[b]).size())) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

struct ClaimFailure {
    std::string identity;  // e.g. "v(G_i)=1"
    int i = 0;
    int j = -1;
    Bundle bundle;
    Value expected;
    Value actual;
};

/// Checks the identities a set-cover valuation built from F[b, C] must
/// satisfy for every row i (and column j where relevant):
///   b[i]=0:          v(G_i) = 1
///   b[i]=0, C=0:     v(compl(G_i) - H0[i][j]) = l-1
///   b[i]=0, C=1:     v(H0[i][j]) = l-1
///   b[i]=1, C=0:     v(G_i - H1[i][j]) = l-1
///   b[i]=1, C=1:     v(H1[i][j]) = l-1
///   b[i]=1:          v(compl(G_i)) = 1   (mirror of the first identity)
inline std::vector<ClaimFailure> claim_vals_props_check(const KWidthFamily& f, int l, const SelectorPair& sel,
                                                        unsigned precision = kDefaultPrecision) {
    const auto coll = instantiate_collection(f, sel).flat();
    const auto v = build_set_cover_valuation(coll, l, f.m, precision);
    const Value one = Value::from_integer(1, precision);
    const Value l_minus_1 = Value::from_integer(l - 1, precision);
    std::vector<ClaimFailure> failures;
    auto expect = [&](const char* name, int i, int j, Bundle x, const Value& want) {
        const Value got = v.value(x);
        if (got != want) failures.push_back({name, i, j, x, want, got});
    };
    for (int i = 0; i < f.k; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const Bundle g = f.g[ui];
        const Bundle gc = f.g_complement(i);
        if (sel.b[ui] == 0) {
            expect("v(G_i)=1", i, -1, g, one);
        } else {
            expect("v(compl G_i)=1", i, -1, gc, one);
        }
        for (int j = 0; j < f.k; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            const int c = sel.c[ui][uj];
            if (sel.b[ui] == 0 && c == 0) expect("v(compl G_i - H0_ij)=l-1", i, j, gc - f.h0[ui][uj], l_minus_1);
            if (sel.b[ui] == 0 && c == 1) expect("v(H0_ij)=l-1", i, j, f.h0[ui][uj], l_minus_1);
            if (sel.b[ui] == 1 && c == 0) expect("v(G_i - H1_ij)=l-1", i, j, g - f.h1[ui][uj], l_minus_1);
            if (sel.b[ui] == 1 && c == 1) expect("v(H1_ij)=l-1", i, j, f.h1[ui][uj], l_minus_1);
        }
    }
    return failures;
}

// ---------------------------------------------------------------------------
// Bundled example: a 2-width family on 6 items.

inline KWidthFamily appendix_c_family() {
    KWidthFamily f;
    f.m = 6;
    f.k = 2;
    f.g = {Bundle{1, 2}, Bundle{3, 5, 6}};
    f.h0 = {{Bundle{3, 4}, Bundle{5, 6}}, {Bundle{2, 4}, Bundle{1}}};
    f.h1 = {{Bundle{1, 2}, Bundle{1}}, {Bundle{3, 5}, Bundle{5}}};
    return f;
}

inline SelectorPair appendix_c_selector() { return {{0, 1}, {{0, 1}, {0, 1}}}; }

}  // namespace calab
