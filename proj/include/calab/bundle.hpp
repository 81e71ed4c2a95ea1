#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "calab/errors.hpp"

namespace calab {

/// Largest item count a Bundle can address.
inline constexpr int kMaxItems = 64;

/// A subset of the items {1, ..., m}, stored as a machine word (item j is bit j-1).
class Bundle {
public:
    constexpr Bundle() = default;
    constexpr explicit Bundle(std::uint64_t bits) : bits_(bits) {}

    Bundle(std::initializer_list<int> items) {
        for (int j : items) insert(j);
    }

    static Bundle from_items(const std::vector<int>& items) {
        Bundle b;
        for (int j : items) b.insert(j);
        return b;
    }

    /// The grand bundle [m].
    static constexpr Bundle full(int m) {
        return Bundle(m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
    }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }

    constexpr bool contains(int item) const {
        return item >= 1 && item <= 64 && ((bits_ >> (item - 1)) & 1U) != 0;
    }
    constexpr bool subset_of(Bundle o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool superset_of(Bundle o) const { return o.subset_of(*this); }
    constexpr bool disjoint(Bundle o) const { return (bits_ & o.bits_) == 0; }

    void insert(int item) {
        if (item < 1 || item > kMaxItems)
            throw UsageError("bundle: item " + std::to_string(item) + " outside 1.." + std::to_string(kMaxItems));
        bits_ |= std::uint64_t{1} << (item - 1);
    }

    /// Largest item index present, 0 for the empty bundle.
    constexpr int max_item() const { return 64 - std::countl_zero(bits_); }
    constexpr bool within(int m) const { return subset_of(full(m)); }

    constexpr Bundle complement(int m) const { return Bundle(~bits_ & full(m).bits_); }

    std::vector<int> items() const {
        std::vector<int> out;
        for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
        return out;
    }

    /// "{1,2,5}"
    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int j : items()) {
            if (!first) s += ',';
            s += std::to_string(j);
            first = false;
        }
        return s + "}";
    }

    friend constexpr Bundle operator|(Bundle a, Bundle b) { return Bundle(a.bits_ | b.bits_); }
    friend constexpr Bundle operator&(Bundle a, Bundle b) { return Bundle(a.bits_ & b.bits_); }
    /// Set difference.
    friend constexpr Bundle operator-(Bundle a, Bundle b) { return Bundle(a.bits_ & ~b.bits_); }

    friend constexpr bool operator==(Bundle, Bundle) = default;
    /// Orders by the underlying bit pattern (a total order used for map keys).
    friend constexpr std::strong_ordering operator<=>(Bundle a, Bundle b) { return a.bits_ <=> b.bits_; }

private:
    std::uint64_t bits_{0};
};

/// One bundle per bidder.
struct Allocation {
    std::vector<Bundle> bundles;

    Allocation() = default;
    explicit Allocation(std::vector<Bundle> b) : bundles(std::move(b)) {}
    static Allocation empty(std::size_t n) { return Allocation(std::vector<Bundle>(n)); }

    std::size_t bidders() const { return bundles.size(); }
    const Bundle& operator[](std::size_t i) const { return bundles[i]; }
    Bundle& operator[](std::size_t i) { return bundles[i]; }

    Bundle allocated() const {
        Bundle u;
        for (const auto& b : bundles) u = u | b;
        return u;
    }

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// True iff the bundles are pairwise disjoint and lie within [m].
inline bool is_feasible_allocation(const Allocation& alloc, int m) {
    Bundle seen;
    for (const auto& b : alloc.bundles) {
        if (!b.within(m) || !b.disjoint(seen)) return false;
        seen = seen | b;
    }
    return true;
}

/// Calls f(S) for every S subset of `universe` (including the empty set).
template <class F>
void for_each_subset(Bundle universe, F&& f) {
    const std::uint64_t u = universe.bits();
    std::uint64_t s = 0;
    while (true) {
        f(Bundle(s));
        if (s == u) break;
        s = (s - u) & u;
    }
}

namespace detail {

// Visits every r-subset of {0..d-1} in lexicographic order; stops when f returns true.
template <class F>
bool for_each_combination(std::size_t d, std::size_t r, F&& f) {
    if (r > d) return false;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        if (f(idx)) return true;
        if (r == 0) return false;
        std::size_t pos = r;
        while (pos > 0 && idx[pos - 1] == d - r + pos - 1) --pos;
        if (pos == 0) return false;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < r; ++i) idx[i] = idx[i - 1] + 1;
    }
}

}  // namespace detail

}  // namespace calab
