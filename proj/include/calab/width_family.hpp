#pragma once

#include <string>
#include <vector>

#include "calab/bundle.hpp"
#include "calab/errors.hpp"

namespace calab {

/// Two-layer set family over [m]: k top sets G_i and, for each i, k sets
/// H0[i][j] inside the complement of G_i and k sets H1[i][j] inside G_i.
/// Indices i, j are 0-based.
struct KWidthFamily {
    int m = 0;
    int k = 0;
    std::vector<Bundle> g;
    std::vector<std::vector<Bundle>> h0;
    std::vector<std::vector<Bundle>> h1;

    Bundle g_complement(int i) const { return g.at(static_cast<std::size_t>(i)).complement(m); }

    /// Throws UsageError naming the first broken invariant.
    void validate() const {
        if (m < 1 || m > kMaxItems) throw UsageError("width family: m outside 1.." + std::to_string(kMaxItems));
        if (k < 1) throw UsageError("width family: k must be positive");
        const auto uk = static_cast<std::size_t>(k);
        if (g.size() != uk || h0.size() != uk || h1.size() != uk)
            throw UsageError("width family: expected " + std::to_string(k) + " rows");
        for (std::size_t i = 0; i < uk; ++i) {
            if (!g[i].within(m)) throw UsageError("width family: G_" + std::to_string(i) + " outside [m]");
            if (h0[i].size() != uk || h1[i].size() != uk)
                throw UsageError("width family: row " + std::to_string(i) + " must have k entries");
            const Bundle gc = g[i].complement(m);
            for (std::size_t j = 0; j < uk; ++j) {
                if (!h0[i][j].subset_of(gc))
                    throw UsageError("width family: H0[" + std::to_string(i) + "][" + std::to_string(j) +
                                     "] is not inside the complement of G_" + std::to_string(i));
                if (!h1[i][j].subset_of(g[i]))
                    throw UsageError("width family: H1[" + std::to_string(i) + "][" + std::to_string(j) +
                                     "] is not inside G_" + std::to_string(i));
            }
        }
    }

    friend bool operator==(const KWidthFamily&, const KWidthFamily&) = default;
};

/// Selector (b, C): a length-k bit vector and a k x k bit matrix.
struct SelectorPair {
    std::vector<int> b;
    std::vector<std::vector<int>> c;

    static SelectorPair zeros(int k) {
        const auto uk = static_cast<std::size_t>(k);
        return {std::vector<int>(uk, 0), std::vector<std::vector<int>>(uk, std::vector<int>(uk, 0))};
    }

    /// Decodes the selector whose bits, b first then C row-major, form `code`.
    static SelectorPair from_code(std::uint64_t code, int k) {
        SelectorPair s = zeros(k);
        int bit = 0;
        for (int i = 0; i < k; ++i) s.b[static_cast<std::size_t>(i)] = static_cast<int>((code >> bit++) & 1U);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                s.c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<int>((code >> bit++) & 1U);
        return s;
    }

    void validate(int k) const {
        const auto uk = static_cast<std::size_t>(k);
        if (b.size() != uk || c.size() != uk)
            throw UsageError("selector: dimensions do not match k=" + std::to_string(k));
        for (const auto& row : c)
            if (row.size() != uk) throw UsageError("selector: C must be k x k");
        for (int x : b)
            if (x != 0 && x != 1) throw UsageError("selector: b entries must be 0/1");
        for (const auto& row : c)
            for (int x : row)
                if (x != 0 && x != 1) throw UsageError("selector: C entries must be 0/1");
    }

    friend bool operator==(const SelectorPair&, const SelectorPair&) = default;
};

}  // namespace calab
