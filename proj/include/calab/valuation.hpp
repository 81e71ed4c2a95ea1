#pragma once

#include <concepts>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "calab/bundle.hpp"
#include "calab/dyadic.hpp"
#include "calab/errors.hpp"

namespace calab {

enum class ValuationKind { kSingleMinded, kXos, kBinaryXos, kSetCover, kTable };

inline std::string_view kind_name(ValuationKind k) {
    switch (k) {
        case ValuationKind::kSingleMinded: return "single-minded";
        case ValuationKind::kXos: return "xos";
        case ValuationKind::kBinaryXos: return "bxos";
        case ValuationKind::kSetCover: return "set-cover";
        case ValuationKind::kTable: return "table";
    }
    return "unknown";
}

/// Anything that can be wrapped in a Valuation.
template <class V>
concept ValuationModel = std::copy_constructible<V> && requires(const V& v, Bundle s) {
    { v.value(s) } -> std::convertible_to<Value>;
    { v.item_count() } -> std::convertible_to<int>;
    { v.kind() } -> std::convertible_to<ValuationKind>;
};

/// Value oracle over bundles of [m], with value semantics. The wrapped model
/// is immutable and shared between copies.
class Valuation {
public:
    template <ValuationModel V>
        requires(!std::same_as<std::remove_cvref_t<V>, Valuation>)
    Valuation(V model)  // NOLINT(google-explicit-constructor)
        : self_(std::make_shared<const Model<V>>(std::move(model))) {}

    Value value(Bundle s) const { return self_->value(s); }
    Value operator()(Bundle s) const { return self_->value(s); }
    int item_count() const { return self_->item_count(); }
    ValuationKind kind() const { return self_->kind(); }

    /// The concrete model, or nullptr if this valuation wraps something else.
    template <class V>
    const V* get_if() const {
        const auto* m = dynamic_cast<const Model<V>*>(self_.get());
        return m != nullptr ? &m->model : nullptr;
    }

    /// True when both handles share the same underlying model object.
    bool same_object(const Valuation& o) const { return self_ == o.self_; }

private:
    struct Concept {
        virtual ~Concept() = default;
        virtual Value value(Bundle s) const = 0;
        virtual int item_count() const = 0;
        virtual ValuationKind kind() const = 0;
    };
    template <class V>
    struct Model final : Concept {
        explicit Model(V v) : model(std::move(v)) {}
        Value value(Bundle s) const override { return model.value(s); }
        int item_count() const override { return model.item_count(); }
        ValuationKind kind() const override { return model.kind(); }
        V model;
    };

    std::shared_ptr<const Concept> self_;
};

/// All 2^m values of v, indexed by the bundle's bit pattern. m <= 24.
inline std::vector<Value> value_table(const Valuation& v, int m) {
    if (m < 0 || m > 24) throw UsageError("value_table: m must be in 0..24");
    std::vector<Value> table(std::size_t{1} << m);
    for (std::uint64_t s = 0; s < table.size(); ++s) table[s] = v.value(Bundle(s));
    return table;
}

/// n valuations over a common item set [m].
class ValuationProfile {
public:
    ValuationProfile(int m, std::vector<Valuation> valuations) : m_(m), valuations_(std::move(valuations)) {
        if (m < 0 || m > kMaxItems) throw UsageError("profile: m outside 0.." + std::to_string(kMaxItems));
        for (std::size_t i = 0; i < valuations_.size(); ++i)
            if (valuations_[i].item_count() != m)
                throw UsageError("profile: bidder " + std::to_string(i) + " is defined over " +
                                 std::to_string(valuations_[i].item_count()) + " items, expected " +
                                 std::to_string(m));
    }

    int items() const { return m_; }
    std::size_t bidders() const { return valuations_.size(); }
    const Valuation& operator[](std::size_t i) const { return valuations_.at(i); }
    const std::vector<Valuation>& valuations() const { return valuations_; }

    /// Copy with bidder i's valuation replaced.
    ValuationProfile with(std::size_t i, Valuation v) const {
        auto vals = valuations_;
        vals.at(i) = std::move(v);
        return ValuationProfile(m_, std::move(vals));
    }

private:
    int m_;
    std::vector<Valuation> valuations_;
};

/// Sum over bidders of v_i(A_i).
inline Value welfare(const ValuationProfile& profile, const Allocation& alloc) {
    if (alloc.bidders() != profile.bidders())
        throw UsageError("welfare: allocation has " + std::to_string(alloc.bidders()) + " bundles for " +
                         std::to_string(profile.bidders()) + " bidders");
    if (!is_feasible_allocation(alloc, profile.items()))
        throw UsageError("welfare: allocation is not feasible over [" + std::to_string(profile.items()) + "]");
    Value total = Value::from_integer(0, 0);
    for (std::size_t i = 0; i < profile.bidders(); ++i) total += profile[i].value(alloc[i]);
    return total;
}

struct MonotoneViolation {
    Bundle smaller;  // S
    int item;        // j not in S
    Value smaller_value;
    Value larger_value;  // v(S + j) < v(S)
};

struct MonotonicityReport {
    Value empty_value;  // v(empty); nonzero means not normalized
    std::vector<MonotoneViolation> violations;

    bool normalized() const { return empty_value.is_zero(); }
    bool ok() const { return normalized() && violations.empty(); }
};

inline constexpr int kMonotoneCheckMaxItems = 16;

/// Exhaustive sweep over all S and one-item extensions S + j.
inline MonotonicityReport check_monotone_normalized(const Valuation& v, int m) {
    if (m > kMonotoneCheckMaxItems)
        throw UsageError("check_monotone_normalized: exhaustive limit is m <= " +
                         std::to_string(kMonotoneCheckMaxItems) + " (got " + std::to_string(m) + ")");
    const auto table = value_table(v, m);
    MonotonicityReport report{table[0], {}};
    for (std::uint64_t s = 0; s < table.size(); ++s) {
        for (int j = 1; j <= m; ++j) {
            const std::uint64_t bit = std::uint64_t{1} << (j - 1);
            if ((s & bit) != 0) continue;
            if (table[s | bit] < table[s])
                report.violations.push_back({Bundle(s), j, table[s], table[s | bit]});
        }
    }
    return report;
}

}  // namespace calab
