#pragma once

// Concrete valuation classes: single-minded, XOS, binary XOS, explicit tables
// and the single-minded family attached to a width family.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "calab/valuation.hpp"
#include "calab/width_family.hpp"

namespace calab {

/// v(S) = w if S contains the desired set T, else 0.
class SingleMinded {
public:
    SingleMinded(int m, Value weight, Bundle desired) : m_(m), weight_(weight), desired_(desired) {
        if (m < 0 || m > kMaxItems) throw UsageError("single-minded: bad item count");
        if (weight.is_negative()) throw UsageError("single-minded: weight must be non-negative");
        if (!desired.within(m)) throw UsageError("single-minded: desired set outside [m]");
        if (desired.empty() && !weight.is_zero())
            throw UsageError("single-minded: empty desired set with positive weight is not normalized");
    }

    Value value(Bundle s) const { return s.superset_of(desired_) ? weight_ : Value::from_raw(0, weight_.precision()); }
    int item_count() const { return m_; }
    ValuationKind kind() const { return ValuationKind::kSingleMinded; }

    const Value& weight() const { return weight_; }
    Bundle desired() const { return desired_; }

private:
    int m_;
    Value weight_;
    Bundle desired_;
};

/// v(S) = max over clauses c of sum_{i in S} c_i.
class Xos {
public:
    Xos(int m, std::vector<std::vector<Value>> clauses) : m_(m), clauses_(std::move(clauses)) {
        if (clauses_.empty()) throw UsageError("xos: at least one clause required");
        for (const auto& c : clauses_) {
            if (static_cast<int>(c.size()) != m) throw UsageError("xos: clause length must equal m");
            for (const auto& x : c)
                if (x.is_negative()) throw UsageError("xos: clause entries must be non-negative");
        }
    }

    static Xos additive(std::vector<Value> item_values) {
        const int m = static_cast<int>(item_values.size());
        return Xos(m, {std::move(item_values)});
    }

    Value value(Bundle s) const {
        Value best = Value::from_integer(0, 0);
        for (const auto& c : clauses_) {
            Value sum = Value::from_integer(0, 0);
            for (std::uint64_t bits = s.bits(); bits != 0; bits &= bits - 1)
                sum += c[static_cast<std::size_t>(std::countr_zero(bits))];
            best = max(best, sum);
        }
        return best;
    }
    int item_count() const { return m_; }
    ValuationKind kind() const { return ValuationKind::kXos; }

    const std::vector<std::vector<Value>>& clauses() const { return clauses_; }

private:
    int m_;
    std::vector<std::vector<Value>> clauses_;
};

/// v(S) = max over G in the collection of |S n G|.
class BinaryXos {
public:
    BinaryXos(int m, std::vector<Bundle> collection, unsigned precision = kDefaultPrecision)
        : m_(m), collection_(std::move(collection)), precision_(precision) {
        if (collection_.empty()) throw UsageError("bxos: collection must be non-empty");
        for (const auto& g : collection_)
            if (!g.within(m)) throw UsageError("bxos: set outside [m]");
    }

    Value value(Bundle s) const {
        int best = 0;
        for (const auto& g : collection_) best = std::max(best, (s & g).size());
        return Value::from_integer(best, precision_);
    }
    int item_count() const { return m_; }
    ValuationKind kind() const { return ValuationKind::kBinaryXos; }

    const std::vector<Bundle>& collection() const { return collection_; }

    /// The same function written as 0/1 indicator clauses.
    Xos to_xos() const {
        std::vector<std::vector<Value>> clauses;
        for (const auto& g : collection_) {
            std::vector<Value> c;
            for (int j = 1; j <= m_; ++j) c.push_back(Value::from_integer(g.contains(j) ? 1 : 0, precision_));
            clauses.push_back(std::move(c));
        }
        return Xos(m_, std::move(clauses));
    }

private:
    int m_;
    std::vector<Bundle> collection_;
    unsigned precision_;
};

inline constexpr int kTableMaxItems = 16;

/// Explicit table of all 2^m values.
class TableValuation {
public:
    /// Validates normalization and monotonicity eagerly.
    TableValuation(int m, std::vector<Value> values) : TableValuation(m, std::move(values), true) {}

    /// For fixtures that must be able to express broken valuations.
    static TableValuation unvalidated(int m, std::vector<Value> values) {
        return TableValuation(m, std::move(values), false);
    }

    /// Table built from a partial map: each bundle takes the largest value
    /// listed for any of its subsets (0 if none), which is the smallest
    /// monotone extension of the listed entries.
    static TableValuation from_entries(int m, const std::map<Bundle, Value>& entries, bool validate = true) {
        if (m < 0 || m > kTableMaxItems) throw UsageError("table: m must be in 0.." + std::to_string(kTableMaxItems));
        std::vector<Value> values(std::size_t{1} << m, Value::from_integer(0, 0));
        std::vector<bool> listed(values.size(), false);
        for (const auto& [b, v] : entries) {
            if (!b.within(m)) throw UsageError("table: bundle " + b.to_string() + " outside [m]");
            values[b.bits()] = v;
            listed[b.bits()] = true;
        }
        if (validate) {
            // subset-max closure, item by item
            for (int j = 0; j < m; ++j)
                for (std::uint64_t s = 0; s < values.size(); ++s)
                    if ((s >> j) & 1U) {
                        const auto lower = s & ~(std::uint64_t{1} << j);
                        if (!listed[s] && values[s] < values[lower]) values[s] = values[lower];
                    }
        }
        return TableValuation(m, std::move(values), validate);
    }

    Value value(Bundle s) const { return values_.at(s.bits()); }
    int item_count() const { return m_; }
    ValuationKind kind() const { return ValuationKind::kTable; }

    const std::vector<Value>& values() const { return values_; }

private:
    TableValuation(int m, std::vector<Value> values, bool validate) : m_(m), values_(std::move(values)) {
        if (m < 0 || m > kTableMaxItems) throw UsageError("table: m must be in 0.." + std::to_string(kTableMaxItems));
        if (values_.size() != (std::size_t{1} << m)) throw UsageError("table: expected 2^m values");
        if (!validate) return;
        if (!values_[0].is_zero()) throw UsageError("table: v(empty) must be 0");
        for (std::uint64_t s = 0; s < values_.size(); ++s) {
            if (values_[s].is_negative()) throw UsageError("table: negative value at " + Bundle(s).to_string());
            for (int j = 0; j < m; ++j) {
                const std::uint64_t bit = std::uint64_t{1} << j;
                if ((s & bit) == 0 && values_[s | bit] < values_[s])
                    throw UsageError("table: not monotone at " + Bundle(s).to_string() + " + " + std::to_string(j + 1));
            }
        }
    }

    int m_;
    std::vector<Value> values_;
};

/// Single-minded valuation attached to row i of a width family: value
/// round((sqrt3 - 1) * l) + delta on every bundle containing the complement of G_i.
class SingleMStar {
public:
    SingleMStar(std::shared_ptr<const KWidthFamily> family, int index, int delta, int l,
                unsigned precision = kDefaultPrecision)
        : family_(std::move(family)), index_(index), delta_(delta), l_(l) {
        if (!family_) throw UsageError("SingleM*: missing family");
        if (index < 0 || index >= family_->k) throw UsageError("SingleM*: index outside the family");
        if (delta != 0 && delta != 1) throw UsageError("SingleM*: delta must be 0 or 1");
        if (l < 1) throw UsageError("SingleM*: l must be positive");
        weight_ = sqrt3_minus_1_times(l, precision) + Value::from_integer(delta, 0);
        desired_ = family_->g_complement(index);
    }

    Value value(Bundle s) const { return s.superset_of(desired_) ? weight_ : Value::from_raw(0, weight_.precision()); }
    int item_count() const { return family_->m; }
    ValuationKind kind() const { return ValuationKind::kSingleMinded; }

    const Value& weight() const { return weight_; }
    Bundle desired() const { return desired_; }
    int index() const { return index_; }
    int delta() const { return delta_; }
    int l() const { return l_; }

    SingleMinded as_single_minded() const { return SingleMinded(family_->m, weight_, desired_); }

private:
    std::shared_ptr<const KWidthFamily> family_;
    int index_;
    int delta_;
    int l_;
    Value weight_;
    Bundle desired_;
};

/// Named width families, so SingleM* valuations can be built from identifiers.
class FamilyRegistry {
public:
    void add(const std::string& id, KWidthFamily family) {
        family.validate();
        families_[id] = std::make_shared<const KWidthFamily>(std::move(family));
    }
    std::shared_ptr<const KWidthFamily> find(const std::string& id) const {
        const auto it = families_.find(id);
        if (it == families_.end()) throw UsageError("family registry: unknown family '" + id + "'");
        return it->second;
    }

private:
    std::map<std::string, std::shared_ptr<const KWidthFamily>> families_;
};

inline SingleMStar make_single_m_star(const FamilyRegistry& registry, const std::string& family_id, int index,
                                      int delta, int l, unsigned precision = kDefaultPrecision) {
    return SingleMStar(registry.find(family_id), index, delta, l, precision);
}

/// If v is single-minded (plain or SingleM*), its (weight, desired set).
inline std::optional<std::pair<Value, Bundle>> single_minded_params(const Valuation& v) {
    if (const auto* sm = v.get_if<SingleMinded>()) return std::pair{sm->weight(), sm->desired()};
    if (const auto* st = v.get_if<SingleMStar>()) return std::pair{st->weight(), st->desired()};
    return std::nullopt;
}

/// The identically-zero valuation on [m].
inline Valuation zero_valuation(int m) {
    return SingleMinded(m, Value::from_integer(0, 0), Bundle());
}

// ---------------------------------------------------------------------------

struct SubadditivityViolation {
    Bundle s;
    Bundle t;
    Value union_value;  // v(S u T) > v(S) + v(T)
    Value sum;
};

struct SubadditivityReport {
    std::uint64_t violation_count = 0;
    std::vector<SubadditivityViolation> violations;  // first few, in sweep order

    bool ok() const { return violation_count == 0; }
};

inline constexpr int kSubadditiveCheckMaxItems = 12;

/// Exhaustive 4^m sweep over all pairs (S, T).
inline SubadditivityReport check_subadditive(const Valuation& v, int m, std::size_t keep = 16) {
    if (m > kSubadditiveCheckMaxItems)
        throw UsageError("check_subadditive: exhaustive limit is m <= " + std::to_string(kSubadditiveCheckMaxItems) +
                         " (got " + std::to_string(m) + ")");
    const auto table = value_table(v, m);
    SubadditivityReport report;
    for (std::uint64_t s = 0; s < table.size(); ++s) {
        for (std::uint64_t t = 0; t < table.size(); ++t) {
            const Value sum = table[s] + table[t];
            if (sum < table[s | t]) {
                ++report.violation_count;
                if (report.violations.size() < keep)
                    report.violations.push_back({Bundle(s), Bundle(t), table[s | t], sum});
            }
        }
    }
    return report;
}

}  // namespace calab
