#pragma once

// Seeded random instances for property sweeps.

#include <vector>

#include "calab/families.hpp"
#include "calab/rng.hpp"
#include "calab/valuations.hpp"

namespace calab {

/// Each clause entry uniform in 0..max_value (integers).
inline Xos random_xos(int m, int clauses, int max_value, Rng& rng, unsigned precision = kDefaultPrecision) {
    std::vector<std::vector<Value>> cs(static_cast<std::size_t>(clauses));
    for (auto& c : cs)
        for (int j = 0; j < m; ++j)
            c.push_back(Value::from_integer(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_value) + 1)),
                                            precision));
    return Xos(m, std::move(cs));
}

/// Non-empty bundle with each item kept with probability 1/2 (redrawn if empty).
inline Bundle random_nonempty_bundle(int m, Rng& rng) {
    const std::uint64_t full = Bundle::full(m).bits();
    std::uint64_t b = 0;
    while (b == 0) b = rng.bits() & full;
    return Bundle(b);
}

inline Bundle random_bundle(int m, Rng& rng) { return Bundle(rng.bits() & Bundle::full(m).bits()); }

/// Integer weight in 1..max_weight on a random non-empty desired set.
inline SingleMinded random_single_minded(int m, int max_weight, Rng& rng, unsigned precision = kDefaultPrecision) {
    const auto w = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_weight))) + 1;
    return SingleMinded(m, Value::from_integer(w, precision), random_nonempty_bundle(m, rng));
}

/// d non-empty sets, each item kept with probability 3/8, redrawn until the
/// collection is l-sparse. Empty result if `max_tries` draws fail.
inline std::vector<Bundle> random_sparse_collection(int m, int d, int l, Rng& rng, int max_tries = 1000) {
    const std::uint64_t full = Bundle::full(m).bits();
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<Bundle> coll;
        for (int t = 0; t < d; ++t) {
            std::uint64_t s = 0;
            while (s == 0) {
                const std::uint64_t a = rng.bits(), b = rng.bits(), c = rng.bits();
                s = ((a & b) | (a & ~b & c)) & full;
            }
            coll.emplace_back(s);
        }
        if (is_l_sparse(coll, l, m).sparse) return coll;
    }
    return {};
}

/// Set-cover valuation on a random l-sparse collection of 2..5 sets. Needs
/// m >= 2: on one item every non-empty set covers [m].
inline SetCoverValuation random_set_cover_valuation(int m, int l, Rng& rng, unsigned precision = kDefaultPrecision) {
    if (m < 2) throw UsageError("random set-cover valuation: m must be at least 2");
    for (int round = 0; round < 100; ++round) {
        const int d = 2 + static_cast<int>(rng.below(4));
        auto coll = random_sparse_collection(m, d, l, rng);
        if (!coll.empty()) return build_set_cover_valuation(coll, l, m, precision);
    }
    throw ConstructionError("random set-cover valuation: no " + std::to_string(l) + "-sparse collection on " +
                            std::to_string(m) + " items");
}

}  // namespace calab
