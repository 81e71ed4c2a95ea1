#pragma once

// Brute-force welfare oracle, approximation ratios, transcript accounting and
// the protocols built on them.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "calab/valuations.hpp"

namespace calab {

inline constexpr int kAuctioneer = -1;

/// Append-only blackboard. Payloads are bit strings of '0'/'1' characters.
class TranscriptLedger {
public:
    struct Message {
        int speaker;  // bidder index or kAuctioneer
        std::string label;
        std::string payload;
    };

    void append(int speaker, std::string label, std::string payload) {
        total_bits_ += payload.size();
        messages_.push_back({speaker, std::move(label), std::move(payload)});
    }

    std::uint64_t total_bits() const { return total_bits_; }
    const std::vector<Message>& messages() const { return messages_; }
    std::size_t size() const { return messages_.size(); }

private:
    std::vector<Message> messages_;
    std::uint64_t total_bits_ = 0;
};

/// Values travel as fixed-width 2k-bit words: k integer bits, k fractional bits.
inline std::uint64_t value_bits(unsigned precision) { return 2ULL * precision; }

inline std::string encode_value(const Value& v, unsigned precision) {
    if (v.is_negative()) throw UsageError("ledger: negative value " + v.to_string());
    if (v.precision() > precision)
        throw UsageError("ledger: value " + v.to_string() + " is finer than precision " + std::to_string(precision));
    const BigInt n = BigInt(v.numerator()) << (precision - v.precision());
    const std::uint64_t width = value_bits(precision);
    if (n >= (BigInt(1) << width))
        throw UsageError("ledger: value " + v.to_string() + " exceeds the " + std::to_string(width) + "-bit range");
    std::string out(width, '0');
    for (std::uint64_t b = 0; b < width; ++b)
        if (bit_test(n, static_cast<unsigned>(b))) out[width - 1 - b] = '1';
    return out;
}

/// m characters, item 1 first.
inline std::string encode_bundle(Bundle s, int m) {
    std::string out(static_cast<std::size_t>(m), '0');
    for (int j = 1; j <= m; ++j)
        if (s.contains(j)) out[static_cast<std::size_t>(j - 1)] = '1';
    return out;
}

struct ProtocolOutcome {
    Allocation allocation;
    TranscriptLedger ledger;
};

// ---------------------------------------------------------------------------
// Optimal welfare.

inline constexpr std::uint64_t kDefaultWelfareBudget = 50'000'000;

struct WelfareResult {
    Value value;
    Allocation allocation;
};

/// Best assignment of `items` among `bidders` (an allocation over all of
/// them, by position). Only full assignments are searched: every item goes to
/// some bidder, which loses nothing for monotone valuations. Assignment
/// vectors are visited in lexicographic order with the lowest item most
/// significant and bidder 0 as the smallest digit; the first strict maximum
/// wins.
inline WelfareResult optimal_welfare_over(const std::vector<Valuation>& bidders, Bundle items,
                                          std::uint64_t budget = kDefaultWelfareBudget) {
    const std::size_t n = bidders.size();
    const auto item_list = items.items();
    const std::size_t m = item_list.size();
    if (n == 0) return {Value::from_integer(0, 0), Allocation{}};
    std::uint64_t count = 1;
    for (std::size_t t = 0; t < m; ++t) {
        if (count > budget / n)
            throw BudgetExceeded("optimal_welfare: " + std::to_string(n) + "^" + std::to_string(m) +
                                 " assignments exceed the budget of " + std::to_string(budget));
        count *= n;
    }
    std::vector<std::size_t> digit(m, 0);
    std::vector<Bundle> current(n);
    current[0] = items;
    WelfareResult best{Value::from_integer(0, 0), Allocation(current)};
    bool have = false;
    while (true) {
        Value total = Value::from_integer(0, 0);
        for (std::size_t i = 0; i < n; ++i) total += bidders[i].value(current[i]);
        if (!have || best.value < total) {
            best = {total, Allocation(current)};
            have = true;
        }
        // increment the assignment vector; the last item is the least significant digit
        std::size_t pos = m;
        while (pos > 0) {
            const std::size_t t = pos - 1;
            const int item = item_list[t];
            const Bundle bit{item};
            current[digit[t]] = current[digit[t]] - bit;
            if (++digit[t] < n) {
                current[digit[t]] = current[digit[t]] | bit;
                break;
            }
            digit[t] = 0;
            current[0] = current[0] | bit;
            --pos;
        }
        if (pos == 0) break;
    }
    return best;
}

inline WelfareResult optimal_welfare(const ValuationProfile& profile, std::uint64_t budget = kDefaultWelfareBudget) {
    return optimal_welfare_over(profile.valuations(), Bundle::full(profile.items()), budget);
}

struct RatioReport {
    Value achieved;
    Value optimal;
    std::optional<Rational> ratio;  // empty when the optimum is 0

    bool optimal_is_zero() const { return !ratio.has_value(); }
    /// ratio >= bound; a zero optimum meets every bound.
    bool at_least(const Rational& bound) const { return !ratio || *ratio >= bound; }
};

inline RatioReport make_ratio(const Value& achieved, const Value& optimal) {
    RatioReport r{achieved, optimal, std::nullopt};
    if (!optimal.is_zero()) r.ratio = achieved.to_rational() / optimal.to_rational();
    return r;
}

inline RatioReport approx_ratio(const Value& achieved, const ValuationProfile& profile,
                                std::uint64_t budget = kDefaultWelfareBudget) {
    return make_ratio(achieved, optimal_welfare(profile, budget).value);
}

// ---------------------------------------------------------------------------
// Inner protocols for the single-minded reduction.

struct InnerContext {
    const std::vector<Valuation>& bidders;  // the participating bidders
    const std::vector<int>& ids;            // their indices in the full profile
    Bundle items;                           // items available to them
    int m;
    unsigned precision;
    TranscriptLedger& ledger;
};

struct InnerProtocol {
    std::string name;
    /// One bundle per participating bidder, inside ctx.items.
    std::function<std::vector<Bundle>(const InnerContext&)> run;
    /// Upper bound on the bits `run` writes for (bidders, items, m, precision).
    std::function<std::uint64_t(std::size_t, int, int, unsigned)> cost_bound;
};

/// Full revelation of every value on the available items, then the exact optimum.
inline InnerProtocol exact_inner(std::uint64_t budget = kDefaultWelfareBudget) {
    InnerProtocol p;
    p.name = "exact";
    p.run = [budget](const InnerContext& ctx) {
        for (std::size_t t = 0; t < ctx.bidders.size(); ++t) {
            std::string payload;
            for_each_subset(ctx.items, [&](Bundle s) { payload += encode_value(ctx.bidders[t].value(s), ctx.precision); });
            ctx.ledger.append(ctx.ids[t], "values", std::move(payload));
        }
        const auto best = optimal_welfare_over(ctx.bidders, ctx.items, budget);
        for (std::size_t t = 0; t < ctx.bidders.size(); ++t)
            ctx.ledger.append(kAuctioneer, "assign", encode_bundle(best.allocation[t], ctx.m));
        return best.allocation.bundles;
    };
    p.cost_bound = [](std::size_t n, int m_avail, int m, unsigned k) {
        return n * ((std::uint64_t{1} << m_avail) * value_bits(k) + static_cast<std::uint64_t>(m));
    };
    return p;
}

/// Each bidder reports its value for all available items; the highest report
/// (lowest index on ties) takes them.
inline InnerProtocol grand_bundle_inner() {
    InnerProtocol p;
    p.name = "grand-bundle";
    p.run = [](const InnerContext& ctx) {
        std::vector<Bundle> out(ctx.bidders.size());
        std::optional<std::size_t> winner;
        Value best;
        for (std::size_t t = 0; t < ctx.bidders.size(); ++t) {
            const Value v = ctx.bidders[t].value(ctx.items);
            ctx.ledger.append(ctx.ids[t], "grand", encode_value(v, ctx.precision));
            if (!winner || best < v) {
                winner = t;
                best = v;
            }
        }
        if (winner) {
            out[*winner] = ctx.items;
            std::string flags(ctx.bidders.size(), '0');
            flags[*winner] = '1';
            ctx.ledger.append(kAuctioneer, "winner", std::move(flags));
        }
        return out;
    };
    p.cost_bound = [](std::size_t n, int, int, unsigned k) { return n * value_bits(k) + n; };
    return p;
}

class InnerProtocolError : public std::runtime_error {
public:
    InnerProtocolError(const std::string& what, std::vector<int> k_set)
        : std::runtime_error(what), allocated_single_minded(std::move(k_set)) {}
    std::vector<int> allocated_single_minded;  // the K whose inner run failed
};

struct ReductionStats {
    std::size_t single_minded = 0;
    std::size_t feasible_k = 0;
    std::uint64_t bit_bound = 0;  // shape bound evaluated for this instance
};

/// Upper bound on the reduction's transcript: declarations, single-minded
/// reports, one inner run plus value reports per feasible K, final announcement.
inline std::uint64_t reduction_bit_bound(const InnerProtocol& inner, std::size_t n, std::size_t sm, std::size_t feasible_k,
                                         int m, unsigned k) {
    const std::size_t others = n - sm;
    const std::uint64_t per_k = inner.cost_bound(others, m, m, k) + others * value_bits(k);
    return n + sm * (static_cast<std::uint64_t>(m) + value_bits(k)) + feasible_k * per_k +
           n * static_cast<std::uint64_t>(m);
}

/// Reduction for profiles mixing a class handled by `inner` with
/// single-minded bidders: every feasible set K of single-minded winners gets
/// its desired sets, `inner` runs on the other bidders over the remaining
/// items, and the best candidate is output.
inline ProtocolOutcome blackbox_reduction(const InnerProtocol& inner, const ValuationProfile& profile,
                                          unsigned precision = kDefaultPrecision, ReductionStats* stats = nullptr) {
    const std::size_t n = profile.bidders();
    const int m = profile.items();
    ProtocolOutcome out{Allocation::empty(n), {}};
    auto& ledger = out.ledger;

    std::vector<int> sm_ids;
    std::vector<std::pair<Value, Bundle>> sm_params;
    std::vector<int> other_ids;
    std::vector<Valuation> others;
    for (std::size_t i = 0; i < n; ++i) {
        const auto params = single_minded_params(profile[i]);
        ledger.append(static_cast<int>(i), "class", params ? "1" : "0");
        if (params) {
            sm_ids.push_back(static_cast<int>(i));
            sm_params.push_back(*params);
        } else {
            other_ids.push_back(static_cast<int>(i));
            others.push_back(profile[i]);
        }
    }
    for (std::size_t t = 0; t < sm_ids.size(); ++t)
        ledger.append(sm_ids[t], "desired", encode_bundle(sm_params[t].second, m) + encode_value(sm_params[t].first, precision));

    std::optional<Value> best_value;
    std::size_t feasible = 0;
    const std::size_t sm = sm_ids.size();
    for (std::size_t r = 0; r <= sm; ++r) {
        detail::for_each_combination(sm, r, [&](const std::vector<std::size_t>& idx) {
            Bundle taken;
            for (auto t : idx) {
                if (!taken.disjoint(sm_params[t].second)) return false;
                taken = taken | sm_params[t].second;
            }
            ++feasible;
            const Bundle rest = Bundle::full(m) - taken;
            std::vector<int> k_ids;
            for (auto t : idx) k_ids.push_back(sm_ids[t]);
            std::vector<Bundle> inner_alloc;
            try {
                inner_alloc = inner.run(InnerContext{others, other_ids, rest, m, precision, ledger});
            } catch (const std::exception& e) {
                std::string ks;
                for (int id : k_ids) ks += (ks.empty() ? "" : ",") + std::to_string(id);
                throw InnerProtocolError("reduction: inner protocol '" + inner.name + "' failed for K={" + ks +
                                             "}: " + e.what(),
                                         k_ids);
            }
            Value total = Value::from_integer(0, 0);
            for (auto t : idx) total += sm_params[t].first;
            for (std::size_t t = 0; t < others.size(); ++t) {
                if (!inner_alloc.at(t).subset_of(rest))
                    throw InnerProtocolError("reduction: inner protocol allocated unavailable items", k_ids);
                const Value v = others[t].value(inner_alloc[t]);
                ledger.append(other_ids[t], "report", encode_value(v, precision));
                total += v;
            }
            if (!best_value || *best_value < total) {
                best_value = total;
                out.allocation = Allocation::empty(n);
                for (auto t : idx) out.allocation[static_cast<std::size_t>(sm_ids[t])] = sm_params[t].second;
                for (std::size_t t = 0; t < others.size(); ++t)
                    out.allocation[static_cast<std::size_t>(other_ids[t])] = inner_alloc[t];
            }
            return false;
        });
    }
    for (std::size_t i = 0; i < n; ++i) ledger.append(kAuctioneer, "final", encode_bundle(out.allocation[i], m));
    if (stats != nullptr) *stats = {sm, feasible, reduction_bit_bound(inner, n, sm, feasible, m, precision)};
    return out;
}

/// All items to the bidder with the highest value for [m]; lowest index on ties.
inline ProtocolOutcome grand_bundle_to_best(const ValuationProfile& profile, unsigned precision = kDefaultPrecision) {
    const std::size_t n = profile.bidders();
    const int m = profile.items();
    ProtocolOutcome out{Allocation::empty(n), {}};
    std::optional<std::size_t> winner;
    Value best;
    for (std::size_t i = 0; i < n; ++i) {
        const Value v = profile[i].value(Bundle::full(m));
        out.ledger.append(static_cast<int>(i), "grand", encode_value(v, precision));
        if (!winner || best < v) {
            winner = i;
            best = v;
        }
    }
    if (winner) out.allocation[*winner] = Bundle::full(m);
    return out;
}

/// Precision of the threshold constant in the simultaneous protocol.
inline constexpr unsigned kThresholdPrecision = 64;

/// Two simultaneous messages: bidder 0 (single-minded) sends (S, v1(S)) and
/// bidder 1 sends v2([m]). Bidder 0 gets S and bidder 1 the rest iff
/// v1(S) >= c * v2([m]) with c the golden conjugate at 64 bits; otherwise
/// bidder 1 gets everything.
inline ProtocolOutcome simultaneous_threshold_protocol(const Valuation& v1, const Valuation& v2,
                                                       unsigned precision = kDefaultPrecision) {
    const auto params = single_minded_params(v1);
    if (!params) throw UsageError("threshold protocol: bidder 1 must be single-minded");
    if (v1.item_count() != v2.item_count()) throw UsageError("threshold protocol: item counts differ");
    const int m = v1.item_count();
    const auto& [w, s] = *params;
    const Value grand = v2.value(Bundle::full(m));
    ProtocolOutcome out{Allocation::empty(2), {}};
    out.ledger.append(0, "desired", encode_bundle(s, m) + encode_value(w, precision));
    out.ledger.append(1, "grand", encode_value(grand, precision));
    const WideDyadic threshold = golden_conjugate_wide(kThresholdPrecision) * widen(grand);
    if (widen(w) >= threshold) {
        out.allocation[0] = s;
        out.allocation[1] = Bundle::full(m) - s;
    } else {
        out.allocation[1] = Bundle::full(m);
    }
    return out;
}

}  // namespace calab
