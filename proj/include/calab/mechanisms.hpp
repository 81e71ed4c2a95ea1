#pragma once

// Mechanisms (allocation plus payments), truthfulness checking, menus and
// the operations defined on them.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "calab/welfare.hpp"

namespace calab {

struct MechanismOutcome {
    Allocation allocation;
    std::vector<Value> payments;
};

struct Mechanism {
    std::string name;
    std::function<MechanismOutcome(const ValuationProfile&)> run;
};

/// Welfare-maximizing allocation (oracle tie-break) with Clarke pivot payments.
inline Mechanism vcg(std::uint64_t budget = kDefaultWelfareBudget) {
    return {"vcg", [budget](const ValuationProfile& profile) {
                const std::size_t n = profile.bidders();
                const Bundle all = Bundle::full(profile.items());
                const auto best = optimal_welfare_over(profile.valuations(), all, budget);
                MechanismOutcome out{best.allocation, {}};
                if (n == 0) return out;
                for (std::size_t i = 0; i < n; ++i) {
                    std::vector<Valuation> rest;
                    Value others = Value::from_integer(0, 0);
                    for (std::size_t j = 0; j < n; ++j) {
                        if (j == i) continue;
                        rest.push_back(profile[j]);
                        others += profile[j].value(best.allocation[j]);
                    }
                    const Value pivot = optimal_welfare_over(rest, all, budget).value;
                    out.payments.push_back(pivot - others);
                }
                return out;
            }};
}

namespace detail {

inline std::pair<std::size_t, std::optional<std::size_t>> top_two_grand(const ValuationProfile& profile,
                                                                        std::vector<Value>& grand) {
    const Bundle all = Bundle::full(profile.items());
    std::size_t first = 0;
    std::optional<std::size_t> second;
    for (std::size_t i = 0; i < profile.bidders(); ++i) grand.push_back(profile[i].value(all));
    for (std::size_t i = 1; i < grand.size(); ++i)
        if (grand[first] < grand[i]) first = i;
    for (std::size_t i = 0; i < grand.size(); ++i)
        if (i != first && (!second || grand[*second] < grand[i])) second = i;
    return {first, second};
}

}  // namespace detail

/// [m] to the highest v_i([m]) (lowest index on ties) at the second-highest such value.
inline Mechanism grand_bundle_second_price() {
    return {"gb2p", [](const ValuationProfile& profile) {
                const std::size_t n = profile.bidders();
                MechanismOutcome out{Allocation::empty(n), std::vector<Value>(n, Value::from_integer(0, 0))};
                if (n == 0) return out;
                std::vector<Value> grand;
                const auto [first, second] = detail::top_two_grand(profile, grand);
                out.allocation[first] = Bundle::full(profile.items());
                if (second) out.payments[first] = grand[*second];
                return out;
            }};
}

/// Same allocation as the second-price rule; the winner pays its own report.
inline Mechanism first_price_grand_bundle() {
    return {"gb1p", [](const ValuationProfile& profile) {
                const std::size_t n = profile.bidders();
                MechanismOutcome out{Allocation::empty(n), std::vector<Value>(n, Value::from_integer(0, 0))};
                if (n == 0) return out;
                std::vector<Value> grand;
                const auto [first, second] = detail::top_two_grand(profile, grand);
                out.allocation[first] = Bundle::full(profile.items());
                out.payments[first] = grand[first];
                return out;
            }};
}

/// Ignores the reports.
inline Mechanism constant_mechanism(Allocation alloc) {
    return {"constant", [alloc](const ValuationProfile& profile) {
                if (alloc.bidders() != profile.bidders())
                    throw UsageError("constant mechanism: allocation is for " + std::to_string(alloc.bidders()) +
                                     " bidders");
                return MechanismOutcome{alloc, std::vector<Value>(profile.bidders(), Value::from_integer(0, 0))};
            }};
}

using PriceTable = std::map<Bundle, Value>;

/// Bidders visit in index order; each takes the utility-maximizing bundle
/// among its table's entries that are still available (the empty bundle at
/// price 0 is always offered; ties go to the smaller bundle bit pattern).
inline Mechanism posted_price(std::vector<PriceTable> tables) {
    return {"posted-price", [tables](const ValuationProfile& profile) {
                const std::size_t n = profile.bidders();
                if (tables.size() != n)
                    throw UsageError("posted-price: " + std::to_string(tables.size()) + " price tables for " +
                                     std::to_string(n) + " bidders");
                MechanismOutcome out{Allocation::empty(n), std::vector<Value>(n, Value::from_integer(0, 0))};
                Bundle taken;
                for (std::size_t i = 0; i < n; ++i) {
                    Bundle pick;
                    Value price = Value::from_integer(0, 0);
                    Value best_utility = Value::from_integer(0, 0);
                    for (const auto& [s, p] : tables[i]) {
                        if (!s.disjoint(taken)) continue;
                        const Value u = profile[i].value(s) - p;
                        if (best_utility < u) {
                            best_utility = u;
                            pick = s;
                            price = p;
                        }
                    }
                    out.allocation[i] = pick;
                    out.payments[i] = price;
                    taken = taken | pick;
                }
                return out;
            }};
}

// ---------------------------------------------------------------------------
// Truthfulness.

/// Explicit per-bidder lists of valuations.
struct FiniteDomain {
    std::vector<std::vector<Valuation>> per_bidder;

    std::size_t bidders() const { return per_bidder.size(); }
    std::uint64_t profile_count() const {
        std::uint64_t c = 1;
        for (const auto& d : per_bidder) c *= d.size();
        return c;
    }
    void validate() const {
        for (std::size_t i = 0; i < per_bidder.size(); ++i)
            if (per_bidder[i].empty()) throw UsageError("domain: bidder " + std::to_string(i) + " has no valuations");
    }
};

inline constexpr std::uint64_t kDefaultProfileBudget = 100'000;

struct TruthfulnessViolation {
    std::size_t bidder = 0;
    std::size_t truth = 0;           // index of v_i in the bidder's domain
    std::size_t lie = 0;             // index of the profitable misreport
    std::vector<std::size_t> others;  // domain indices for every bidder (entry `bidder` unused)
    Value gain;                       // utility(lie) - utility(truth) > 0
};

struct TruthfulnessReport {
    std::uint64_t profiles = 0;
    std::uint64_t deviations = 0;
    std::vector<TruthfulnessViolation> violations;

    bool ok() const { return violations.empty(); }
};

namespace detail {

// Visits every index tuple of the product domain in odometer order (last bidder fastest).
template <class F>
void for_each_profile_index(const std::vector<std::size_t>& sizes, F&& f) {
    std::vector<std::size_t> idx(sizes.size(), 0);
    for (auto s : sizes)
        if (s == 0) return;
    while (true) {
        f(idx);
        std::size_t pos = sizes.size();
        while (pos > 0) {
            if (++idx[pos - 1] < sizes[pos - 1]) break;
            idx[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) return;
    }
}

inline std::uint64_t flat_index(const std::vector<std::size_t>& idx, const std::vector<std::size_t>& sizes) {
    std::uint64_t f = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) f = f * sizes[i] + idx[i];
    return f;
}

}  // namespace detail

/// Exhaustive sweep of every profile in the domain and every unilateral
/// misreport from the reporting bidder's own list.
inline TruthfulnessReport check_truthful(const Mechanism& mech, const FiniteDomain& domain, int m,
                                         std::uint64_t budget = kDefaultProfileBudget, std::size_t keep = 16) {
    domain.validate();
    const std::uint64_t count = domain.profile_count();
    if (count > budget)
        throw BudgetExceeded("check_truthful: " + std::to_string(count) + " profiles exceed the budget of " +
                             std::to_string(budget));
    std::vector<std::size_t> sizes;
    for (const auto& d : domain.per_bidder) sizes.push_back(d.size());

    std::vector<MechanismOutcome> outcomes;
    outcomes.reserve(count);
    detail::for_each_profile_index(sizes, [&](const std::vector<std::size_t>& idx) {
        std::vector<Valuation> vals;
        for (std::size_t i = 0; i < idx.size(); ++i) vals.push_back(domain.per_bidder[i][idx[i]]);
        auto out = mech.run(ValuationProfile(m, std::move(vals)));
        if (!is_feasible_allocation(out.allocation, m) || out.allocation.bidders() != sizes.size() ||
            out.payments.size() != sizes.size())
            throw std::logic_error("check_truthful: mechanism '" + mech.name + "' returned a malformed outcome");
        outcomes.push_back(std::move(out));
    });

    TruthfulnessReport report;
    report.profiles = count;
    detail::for_each_profile_index(sizes, [&](const std::vector<std::size_t>& idx) {
        const auto& honest = outcomes[detail::flat_index(idx, sizes)];
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const Valuation& v = domain.per_bidder[i][idx[i]];
            const Value u_truth = v.value(honest.allocation[i]) - honest.payments[i];
            auto dev = idx;
            for (std::size_t lie = 0; lie < sizes[i]; ++lie) {
                if (lie == idx[i]) continue;
                ++report.deviations;
                dev[i] = lie;
                const auto& o = outcomes[detail::flat_index(dev, sizes)];
                const Value u_lie = v.value(o.allocation[i]) - o.payments[i];
                if (u_truth < u_lie && report.violations.size() < keep)
                    report.violations.push_back({i, idx[i], lie, idx, u_lie - u_truth});
            }
        }
    });
    return report;
}

// ---------------------------------------------------------------------------
// Menus.

inline constexpr int kMenuMaxItems = 16;

/// Prices by bundle for one bidder. In canonical form the menu is total: a
/// bundle missing from `entries` is unattainable.
struct Menu {
    int m = 0;
    std::map<Bundle, Value> entries;
    bool canonical = false;

    std::optional<Value> price(Bundle s) const {
        const auto it = entries.find(s);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    }

    friend bool operator==(const Menu&, const Menu&) = default;
};

struct MenuWitness {
    std::size_t probe = 0;  // index into the probed list
    Value price;
};

class TaxationViolation : public std::runtime_error {
public:
    TaxationViolation(const std::string& what, Bundle b, MenuWitness first, MenuWitness second)
        : std::runtime_error(what), bundle(b), first(std::move(first)), second(std::move(second)) {}
    Bundle bundle;
    MenuWitness first;
    MenuWitness second;
};

/// Bidder i's menu given the others' valuations, probed with each valuation
/// in `probes`. `others` lists the other bidders' valuations in index order
/// with bidder i omitted.
inline Menu extract_menu(const Mechanism& mech, std::size_t i, const std::vector<Valuation>& others,
                         const std::vector<Valuation>& probes, int m) {
    if (i > others.size()) throw UsageError("extract_menu: bidder index out of range");
    Menu menu{m, {}, false};
    std::map<Bundle, std::size_t> source;
    for (std::size_t t = 0; t < probes.size(); ++t) {
        std::vector<Valuation> vals = others;
        vals.insert(vals.begin() + static_cast<std::ptrdiff_t>(i), probes[t]);
        const auto out = mech.run(ValuationProfile(m, std::move(vals)));
        const Bundle got = out.allocation[i];
        const Value& p = out.payments.at(i);
        const auto [it, inserted] = menu.entries.emplace(got, p);
        if (inserted) {
            source[got] = t;
        } else if (it->second != p) {
            throw TaxationViolation("extract_menu: bundle " + got.to_string() + " priced " + it->second.to_string() +
                                        " and " + p.to_string() + " for bidder " + std::to_string(i),
                                    got, {source[got], it->second}, {t, p});
        }
    }
    return menu;
}

/// M'(S) = min over priced T containing S of M(T), shifted so M'(empty) = 0.
inline Menu monotonize_menu(const Menu& menu) {
    const int m = menu.m;
    if (m < 0 || m > kMenuMaxItems) throw UsageError("monotonize_menu: m must be in 0.." + std::to_string(kMenuMaxItems));
    if (menu.entries.empty()) throw UsageError("monotonize_menu: empty menu");
    const std::size_t n = std::size_t{1} << m;
    std::vector<std::optional<Value>> best(n);
    for (const auto& [s, p] : menu.entries) {
        if (!s.within(m)) throw UsageError("monotonize_menu: bundle " + s.to_string() + " outside [m]");
        if (menu.canonical || !best[s.bits()] || p < *best[s.bits()]) best[s.bits()] = p;
    }
    for (int j = 0; j < m; ++j)
        for (std::uint64_t s = 0; s < n; ++s)
            if (((s >> j) & 1U) == 0) {
                const auto& up = best[s | (std::uint64_t{1} << j)];
                if (up && (!best[s] || *up < *best[s])) best[s] = up;
            }
    const Value shift = *best[0];
    Menu out{m, {}, true};
    for (std::uint64_t s = 0; s < n; ++s)
        if (best[s]) out.entries.emplace(Bundle(s), *best[s] - shift);
    return out;
}

struct MenuCheck {
    bool normalized = false;
    std::vector<std::pair<Bundle, int>> violations;  // (S, j) with M(S + j) < M(S)

    bool ok() const { return normalized && violations.empty(); }
};

/// Monotone and normalized over all 2^m bundles, reading missing entries as unattainable.
inline MenuCheck check_menu_monotone(const Menu& menu) {
    MenuCheck c;
    const auto empty = menu.price(Bundle());
    c.normalized = empty && empty->is_zero();
    const std::uint64_t n = std::uint64_t{1} << menu.m;
    for (std::uint64_t s = 0; s < n; ++s)
        for (int j = 1; j <= menu.m; ++j) {
            const std::uint64_t bit = std::uint64_t{1} << (j - 1);
            if (s & bit) continue;
            const auto lo = menu.price(Bundle(s));
            const auto hi = menu.price(Bundle(s | bit));
            if (hi && (!lo || *hi < *lo)) c.violations.push_back({Bundle(s), j});
        }
    return c;
}

/// Bundles maximizing v(S) - M(S) over the priced bundles.
inline std::vector<Bundle> utility_maximizers(const Menu& menu, const Valuation& v) {
    std::vector<Bundle> out;
    std::optional<Value> best;
    for (const auto& [s, p] : menu.entries) {
        const Value u = v.value(s) - p;
        if (!best || *best < u) {
            best = u;
            out.assign(1, s);
        } else if (u == *best) {
            out.push_back(s);
        }
    }
    return out;
}

/// Every price floored to the 2^-precision grid (integers by default).
inline Menu precision_align(const Menu& menu, unsigned precision = 0) {
    Menu out{menu.m, {}, menu.canonical};
    for (const auto& [s, p] : menu.entries)
        out.entries.emplace(s, p.precision() > precision ? p.floor_to(precision) : p);
    return out;
}

/// Same allocation as `mech`, payments floored to the 2^-precision grid.
inline Mechanism precision_aligned(Mechanism mech, unsigned precision = 0) {
    return {mech.name + "-aligned", [mech, precision](const ValuationProfile& profile) {
                auto out = mech.run(profile);
                for (auto& p : out.payments)
                    if (p.precision() > precision) p = p.floor_to(precision);
                return out;
            }};
}

struct TaxationReport {
    std::vector<std::size_t> menu_counts;  // distinct canonical menus per bidder
    double log2_max = 0;                   // max over bidders of log2(count)
};

/// Counts distinct canonical menus each bidder faces across the others' domains.
inline TaxationReport taxation_complexity(const Mechanism& mech, const FiniteDomain& domain, int m,
                                          std::uint64_t budget = kDefaultProfileBudget) {
    domain.validate();
    if (domain.profile_count() > budget)
        throw BudgetExceeded("taxation_complexity: domain exceeds the budget of " + std::to_string(budget));
    TaxationReport report;
    const std::size_t n = domain.bidders();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> sizes;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sizes.push_back(domain.per_bidder[j].size());
        std::set<std::vector<std::pair<std::uint64_t, std::string>>> seen;
        auto visit = [&](const std::vector<std::size_t>& idx) {
            std::vector<Valuation> others;
            std::size_t t = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others.push_back(domain.per_bidder[j][idx[t++]]);
            const Menu canon = monotonize_menu(extract_menu(mech, i, others, domain.per_bidder[i], m));
            std::vector<std::pair<std::uint64_t, std::string>> key;
            for (const auto& [s, p] : canon.entries) key.emplace_back(s.bits(), p.to_rational().str());
            seen.insert(std::move(key));
        };
        if (sizes.empty())
            visit({});
        else
            detail::for_each_profile_index(sizes, visit);
        report.menu_counts.push_back(seen.size());
        report.log2_max = std::max(report.log2_max, std::log2(static_cast<double>(seen.size())));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Payment bounds for two-bidder mechanisms.

struct PaymentBoundValuations {
    Rational alpha;
    Value epsilon;
    Bundle s;
    SingleMinded upper;
    SingleMinded lower;
    bool upper_exact = true;  // false when the weight was rounded up to a dyadic
    bool lower_exact = true;  // false when the weight was rounded down
};

namespace detail {

inline unsigned bit_length(const BigInt& x) { return x == 0 ? 0U : static_cast<unsigned>(msb(x)) + 1U; }

}  // namespace detail

/// upper weight (1/alpha) v([m]) - v([m] \ S) + eps, lower weight
/// max{alpha v([m]) - v([m] \ S) - eps, 0}; both desire S. Weights that are
/// not dyadic at the working precision are rounded outward (upper up, lower
/// down) and flagged.
inline PaymentBoundValuations payment_bound_valuations(const Valuation& v2, const Rational& alpha, const Value& epsilon,
                                                       Bundle s) {
    const int m = v2.item_count();
    if (s.empty()) throw UsageError("payment bounds: S must be non-empty");
    if (!s.within(m)) throw UsageError("payment bounds: S outside [m]");
    if (alpha <= 0 || alpha > 1) throw UsageError("payment bounds: alpha must be in (0, 1]");
    if (epsilon.is_negative() || epsilon.is_zero()) throw UsageError("payment bounds: epsilon must be positive");
    const Value grand = v2.value(Bundle::full(m));
    const Value rest = v2.value(Bundle::full(m) - s);
    const Rational g = grand.to_rational();
    const Rational r = rest.to_rational();
    const Rational e = epsilon.to_rational();
    const Rational up = g / alpha - r + e;
    Rational lo = alpha * g - r - e;
    if (lo < 0) lo = 0;
    const unsigned base = std::max({grand.precision(), rest.precision(), epsilon.precision()});
    const unsigned p = base + detail::bit_length(numerator(alpha)) + detail::bit_length(denominator(alpha));
    const Value up_w = Value::from_rational(up, p, Rounding::kUp);
    const Value lo_w = Value::from_rational(lo, p, Rounding::kDown);
    return {alpha,
            epsilon,
            s,
            SingleMinded(m, up_w, s),
            SingleMinded(m, lo_w, s),
            up_w.to_rational() == up,
            lo_w.to_rational() == lo};
}

enum class SandwichStatus { kHolds, kViolated, kInconclusive };

inline std::string_view sandwich_status_name(SandwichStatus s) {
    switch (s) {
        case SandwichStatus::kHolds: return "holds";
        case SandwichStatus::kViolated: return "violated";
        case SandwichStatus::kInconclusive: return "inconclusive";
    }
    return "unknown";
}

struct SandwichReport {
    SandwichStatus status = SandwichStatus::kInconclusive;
    Value upper_bound;
    Value lower_bound;
    std::optional<Value> menu_delta;  // M(S) - M(empty) on the monotonized menu
    bool upper_holds = false;
    bool lower_holds = false;
    std::string note;
};

/// Probes bidder 0 of a two-bidder mechanism with the upper and lower
/// valuations against v2 and checks
///   upper weight >= M(S) - M(empty) >= lower weight
/// on the menu closed under supersets (M(S) is the cheapest priced bundle
/// containing S).
inline SandwichReport payment_sandwich_check(const Mechanism& mech, const Valuation& v2, Bundle s, const Value& epsilon,
                                             const Rational& alpha = Rational(1)) {
    const int m = v2.item_count();
    const auto pb = payment_bound_valuations(v2, alpha, epsilon, s);
    SandwichReport rep;
    rep.upper_bound = pb.upper.weight();
    rep.lower_bound = pb.lower.weight();
    const Menu menu = extract_menu(mech, 0, {v2}, {Valuation(pb.upper), Valuation(pb.lower)}, m);
    std::optional<Value> at_s;
    std::optional<Value> at_empty;
    for (const auto& [b, p] : menu.entries) {
        if (b.superset_of(s) && (!at_s || p < *at_s)) at_s = p;
        if (!at_empty || p < *at_empty) at_empty = p;
    }
    if (!at_s || !at_empty) {
        rep.note = "no probe was allocated a bundle containing S";
        return rep;
    }
    rep.menu_delta = *at_s - *at_empty;
    rep.upper_holds = *rep.menu_delta <= rep.upper_bound;
    rep.lower_holds = rep.lower_bound <= *rep.menu_delta;
    rep.status = rep.upper_holds && rep.lower_holds ? SandwichStatus::kHolds : SandwichStatus::kViolated;
    return rep;
}

}  // namespace calab
