#pragma once

// Slow reference implementations the library is checked against. They share
// nothing with the library beyond the valuation interface.

#include <vector>

#include "calab/calab.hpp"

namespace oracle {

using namespace calab;

inline Allocation random_allocation(std::size_t n, int m, Rng& rng) {
    Allocation a = Allocation::empty(n);
    for (int j = 1; j <= m; ++j) {
        const auto who = rng.below(n + 1);
        if (who < n) a[who].insert(j);
    }
    return a;
}

/// Max welfare over all (n+1)^m assignments, unassigned items included.
inline Rational best_welfare(const ValuationProfile& p) {
    const std::size_t n = p.bidders();
    const int m = p.items();
    std::vector<std::size_t> who(static_cast<std::size_t>(m), 0);
    Rational best = 0;
    while (true) {
        std::vector<Bundle> bundles(n);
        for (int j = 0; j < m; ++j)
            if (who[static_cast<std::size_t>(j)] < n) bundles[who[static_cast<std::size_t>(j)]].insert(j + 1);
        Rational w = 0;
        for (std::size_t i = 0; i < n; ++i) w += p[i].value(bundles[i]).to_rational();
        if (w > best) best = w;
        int pos = 0;
        while (pos < m && ++who[static_cast<std::size_t>(pos)] == n + 1) who[static_cast<std::size_t>(pos++)] = 0;
        if (pos == m) break;
    }
    return best;
}

/// Minimum cover size over all 2^d sub-collections; max{l, d} if uncoverable.
inline int min_cover(const std::vector<Bundle>& coll, int l, Bundle x) {
    const int d = static_cast<int>(coll.size());
    int best = -1;
    for (std::uint32_t mask = 0; mask < (1U << d); ++mask) {
        Bundle u;
        for (int t = 0; t < d; ++t)
            if (mask & (1U << t)) u = u | coll[static_cast<std::size_t>(t)];
        if (x.subset_of(u) && (best < 0 || std::popcount(mask) < best)) best = std::popcount(mask);
    }
    return best < 0 ? std::max(l, d) : best;
}

/// No sub-collection of at most l-1 sets covers [m].
inline bool sparse(const std::vector<Bundle>& coll, int l, int m) {
    const int d = static_cast<int>(coll.size());
    for (std::uint32_t mask = 1; mask < (1U << d); ++mask) {
        if (std::popcount(mask) > l - 1) continue;
        Bundle u;
        for (int t = 0; t < d; ++t)
            if (mask & (1U << t)) u = u | coll[static_cast<std::size_t>(t)];
        if (u == Bundle::full(m)) return false;
    }
    return true;
}

/// Table of the modified set-cover valuation written straight from its
/// definition: min cover below l/2, the complement rule, l/2 elsewhere.
inline std::vector<Rational> set_cover_table(const std::vector<Bundle>& coll, int l, int m) {
    const std::size_t n = std::size_t{1} << m;
    std::vector<Rational> t(n, Rational(l, 2));
    for (std::uint64_t s = 0; s < n; ++s) {
        const int c = min_cover(coll, l, Bundle(s));
        if (2 * c < l) {
            t[s] = c;
            t[Bundle(s).complement(m).bits()] = l - c;
        }
    }
    return t;
}

}  // namespace oracle
