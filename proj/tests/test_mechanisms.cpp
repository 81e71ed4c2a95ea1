#include <gtest/gtest.h>

#include "calab/calab.hpp"
#include "oracles.hpp"

using namespace calab;

namespace {

Value iv(std::int64_t n) { return integer_value(n); }

std::vector<Valuation> single_minded_probes(int m, int max_weight) {
    std::vector<Valuation> probes;
    for (std::uint64_t t = 1; t < (std::uint64_t{1} << m); ++t)
        for (int w = 0; w <= max_weight; ++w) probes.emplace_back(SingleMinded(m, iv(w), Bundle(t)));
    return probes;
}

FiniteDomain random_domain(std::size_t n, std::size_t size, int m, Rng& rng) {
    FiniteDomain d;
    for (std::size_t i = 0; i < n; ++i) {
        d.per_bidder.emplace_back();
        for (std::size_t s = 0; s < size; ++s) d.per_bidder.back().emplace_back(random_xos(m, 2, 4, rng, 0));
    }
    return d;
}

}  // namespace

TEST(Vcg, SpecExample) {
    const ValuationProfile p(2, {Xos::additive({iv(3), iv(1)}), Xos::additive({iv(2), iv(2)})});
    const auto out = vcg().run(p);
    EXPECT_EQ(out.allocation[0], Bundle{1});
    EXPECT_EQ(out.allocation[1], Bundle{2});
    EXPECT_EQ(out.payments[0], iv(2));
    EXPECT_EQ(out.payments[1], iv(1));
}

TEST(Vcg, SingleBidderPaysNothing) {
    const auto out = vcg().run(ValuationProfile(2, {Xos::additive({iv(3), iv(1)})}));
    EXPECT_EQ(out.payments[0], iv(0));
}

TEST(Vcg, IdenticalBiddersPaySecondPrice) {
    const ValuationProfile p(1, {Xos::additive({iv(7)}), Xos::additive({iv(7)})});
    const auto out = vcg().run(p);
    EXPECT_EQ(out.allocation[0], Bundle{1});
    EXPECT_EQ(out.payments[0], iv(7));
    EXPECT_EQ(out.payments[1], iv(0));
}

TEST(Vcg, PaymentsAreNonNegative) {
    Rng rng(101);
    for (int t = 0; t < 30; ++t) {
        const ValuationProfile p(4, {random_xos(4, 2, 6, rng), random_single_minded(4, 8, rng), random_xos(4, 3, 6, rng)});
        for (const auto& pay : vcg().run(p).payments) EXPECT_FALSE(pay.is_negative());
    }
}

TEST(GrandBundleSecondPrice, SpecExamples) {
    const ValuationProfile p(1, {Xos::additive({iv(5)}), Xos::additive({iv(3)}), Xos::additive({iv(1)})});
    const auto out = grand_bundle_second_price().run(p);
    EXPECT_EQ(out.allocation[0], Bundle{1});
    EXPECT_EQ(out.payments[0], iv(3));
    EXPECT_EQ(out.payments[1], iv(0));
    EXPECT_EQ(grand_bundle_second_price().run(ValuationProfile(1, {Xos::additive({iv(5)})})).payments[0], iv(0));
}

TEST(GrandBundleSecondPrice, ThirdOfOptimalForSetCoverBidders) {
    Rng rng(103);
    for (int t = 0; t < 20; ++t) {
        std::vector<Valuation> vals;
        for (int i = 0; i < 3; ++i) vals.emplace_back(random_set_cover_valuation(6, 4, rng));
        const ValuationProfile p(6, vals);
        EXPECT_TRUE(approx_ratio(welfare(p, grand_bundle_second_price().run(p).allocation), p).at_least(Rational(1, 3)));
    }
}

TEST(Truthfulness, VcgOnRandomDomains) {
    Rng rng(107);
    for (int t = 0; t < 8; ++t) {
        const std::size_t n = 2 + t % 2;
        const int m = 2 + static_cast<int>(rng.below(3));
        const auto d = random_domain(n, 4, m, rng);
        const auto rep = check_truthful(vcg(), d, m);
        EXPECT_TRUE(rep.ok());
        EXPECT_EQ(rep.profiles, d.profile_count());
    }
}

TEST(Truthfulness, FirstPriceIsCaught) {
    FiniteDomain d;
    d.per_bidder = {{Xos::additive({iv(3), iv(3)}), Xos::additive({iv(1), iv(1)})}, {Xos::additive({iv(1), iv(1)})}};
    const auto rep = check_truthful(first_price_grand_bundle(), d, 2);
    ASSERT_FALSE(rep.ok());
    const auto& v = rep.violations[0];
    EXPECT_EQ(v.bidder, 0U);
    EXPECT_EQ(v.truth, 0U);
    EXPECT_EQ(v.lie, 1U);
    EXPECT_EQ(v.gain, iv(4));
    EXPECT_TRUE(check_truthful(grand_bundle_second_price(), d, 2).ok());
}

TEST(Truthfulness, ConstantMechanism) {
    Rng rng(109);
    const auto d = random_domain(2, 3, 3, rng);
    EXPECT_TRUE(check_truthful(constant_mechanism(Allocation({Bundle{1}, Bundle{2, 3}})), d, 3).ok());
}

TEST(Truthfulness, BudgetExceeded) {
    Rng rng(113);
    const auto d = random_domain(3, 5, 2, rng);
    EXPECT_THROW(check_truthful(vcg(), d, 2, 100), BudgetExceeded);
}

TEST(Menu, VcgMenuIsTheClarkeFormula) {
    Rng rng(127);
    for (int t = 0; t < 10; ++t) {
        const int m = 2 + static_cast<int>(rng.below(2));
        const Xos v2 = random_xos(m, 2, 4, rng, 0);
        const Menu menu = extract_menu(vcg(), 0, {v2}, single_minded_probes(m, 10), m);
        const Value grand = v2.value(Bundle::full(m));
        for (const auto& [s, p] : menu.entries) EXPECT_EQ(p, grand - v2.value(Bundle::full(m) - s));
    }
}

TEST(Menu, ConstantMechanismHasOneEntry) {
    const Menu menu =
        extract_menu(constant_mechanism(Allocation({Bundle{1}, Bundle{2}})), 0, {zero_valuation(2)}, single_minded_probes(2, 3), 2);
    ASSERT_EQ(menu.entries.size(), 1U);
    EXPECT_EQ(menu.entries.begin()->first, Bundle{1});
}

TEST(Menu, PostedPriceMenuIsInsideTheTable) {
    const PriceTable table{{Bundle{1}, iv(2)}, {Bundle{1, 2}, iv(3)}, {Bundle{2}, iv(5)}};
    const Menu menu = extract_menu(posted_price({table, {}}), 0, {zero_valuation(2)}, single_minded_probes(2, 8), 2);
    for (const auto& [s, p] : menu.entries) {
        if (s.empty()) {
            EXPECT_EQ(p, iv(0));
            continue;
        }
        ASSERT_TRUE(table.count(s));
        EXPECT_EQ(table.at(s), p);
    }
}

TEST(Menu, FirstPriceRaisesTaxationViolation) {
    const std::vector<Valuation> probes{Xos::additive({iv(3), iv(3)}), Xos::additive({iv(5), iv(5)})};
    try {
        extract_menu(first_price_grand_bundle(), 0, {Xos::additive({iv(1), iv(1)})}, probes, 2);
        FAIL() << "expected TaxationViolation";
    } catch (const TaxationViolation& e) {
        EXPECT_EQ(e.bundle, Bundle::full(2));
        EXPECT_EQ(e.first.price, iv(6));
        EXPECT_EQ(e.second.price, iv(10));
    }
}

TEST(Monotonize, SpecExample) {
    const Menu menu{2, {{Bundle(), iv(0)}, {Bundle{1}, iv(5)}, {Bundle{1, 2}, iv(3)}}, false};
    const Menu out = monotonize_menu(menu);
    const std::map<Bundle, Value> want{{Bundle(), iv(0)}, {Bundle{1}, iv(3)}, {Bundle{2}, iv(3)}, {Bundle{1, 2}, iv(3)}};
    EXPECT_EQ(out.entries, want);
    EXPECT_TRUE(out.canonical);
    EXPECT_TRUE(check_menu_monotone(out).ok());
    EXPECT_FALSE(check_menu_monotone(menu).ok());
}

TEST(Monotonize, UnattainableBundlesStayMissing) {
    const Menu out = monotonize_menu(Menu{3, {{Bundle{1}, iv(4)}, {Bundle{1, 2}, iv(6)}}, false});
    EXPECT_EQ(out.price(Bundle()), iv(0));
    EXPECT_EQ(out.price(Bundle{1, 2}), iv(2));
    EXPECT_FALSE(out.price(Bundle{3}).has_value());
    EXPECT_TRUE(check_menu_monotone(out).ok());
}

TEST(Monotonize, Errors) {
    EXPECT_THROW(monotonize_menu(Menu{2, {}, false}), UsageError);
    EXPECT_THROW(monotonize_menu(Menu{17, {{Bundle(), iv(0)}}, false}), UsageError);
}

TEST(Monotonize, IdempotentAndReplaysVcgProbes) {
    Rng rng(131);
    for (int t = 0; t < 10; ++t) {
        const int m = 3;
        const Xos v2 = random_xos(m, 2, 5, rng, 0);
        const auto probes = single_minded_probes(m, 6);
        const Menu raw = extract_menu(vcg(), 0, {v2}, probes, m);
        const Menu once = monotonize_menu(raw);
        EXPECT_EQ(monotonize_menu(once), once);
        EXPECT_TRUE(check_menu_monotone(once).ok());
        for (const auto& probe : probes) {
            const Bundle got = vcg().run(ValuationProfile(m, {probe, v2})).allocation[0];
            const auto best = utility_maximizers(once, probe);
            EXPECT_NE(std::find(best.begin(), best.end(), got), best.end());
        }
    }
}

TEST(Taxation, PostedPriceHasOneMenu) {
    Rng rng(137);
    const PriceTable table{{Bundle{1}, iv(1)}, {Bundle{2}, iv(2)}};
    const auto d = random_domain(2, 4, 2, rng);
    const auto rep = taxation_complexity(posted_price({table, table}), d, 2);
    EXPECT_EQ(rep.menu_counts[0], 1U);
    EXPECT_EQ(rep.log2_max, 0.0);
}

TEST(Taxation, VcgSeparatesDistinctOpponents) {
    FiniteDomain d;
    d.per_bidder.push_back(single_minded_probes(2, 8));
    d.per_bidder.push_back({Xos::additive({iv(1), iv(2)}), Xos::additive({iv(2), iv(1)}), Xos::additive({iv(3), iv(3)})});
    EXPECT_EQ(taxation_complexity(vcg(), d, 2).menu_counts[0], 3U);
}

TEST(Taxation, EqualComplementValuesGiveOneMenu) {
    FiniteDomain d;
    d.per_bidder.push_back(single_minded_probes(2, 8));
    // both are 2 on each single item and 3 on the pair
    d.per_bidder.push_back({Xos(2, {{iv(2), iv(1)}, {iv(1), iv(2)}}), Xos(2, {{iv(2), iv(1)}, {iv(1), iv(2)}, {iv(2), iv(0)}})});
    EXPECT_EQ(taxation_complexity(vcg(), d, 2).menu_counts[0], 1U);
}

TEST(PrecisionAlign, FloorsPrices) {
    const Menu menu{2, {{Bundle{1}, Value::parse("27/2^3")}, {Bundle{2}, Value::parse("25/2^3")}, {Bundle{1, 2}, iv(4)}}, false};
    const Menu out = precision_align(menu);
    EXPECT_EQ(out.price(Bundle{1}), iv(3));
    EXPECT_EQ(out.price(Bundle{2}), iv(3));
    EXPECT_EQ(out.price(Bundle{1, 2}), iv(4));
    EXPECT_EQ(precision_align(out), out);
}

TEST(PrecisionAlign, AlignedMechanismStaysTruthfulOnIntegerDomains) {
    Rng rng(139);
    for (int t = 0; t < 6; ++t) {
        const auto d = random_domain(2, 4, 2, rng);
        const auto scaled = precision_aligned(vcg());
        EXPECT_EQ(check_truthful(vcg(), d, 2).ok(), check_truthful(scaled, d, 2).ok());
    }
}

TEST(PaymentBounds, DirectSubstitution) {
    // v2([m]) = 10 and v2([m] \ S) = 4 with S = {1}
    const Valuation v2 = Xos::additive({iv(6), iv(4)});
    const Value eps = Value::parse("1/2^3");
    const auto pb = payment_bound_valuations(v2, Rational(1, 2), eps, Bundle{1});
    EXPECT_EQ(pb.upper.weight(), Value::parse("129/2^3"));
    EXPECT_EQ(pb.lower.weight(), Value::parse("7/2^3"));
    EXPECT_TRUE(pb.upper_exact && pb.lower_exact);
    EXPECT_EQ(pb.upper.desired(), Bundle{1});
}

TEST(PaymentBounds, LowerClampsAtZero) {
    const Valuation v2 = Xos::additive({iv(6), iv(4)});
    const auto pb = payment_bound_valuations(v2, Rational(1, 3), Value::parse("1/2^3"), Bundle{1});
    EXPECT_EQ(pb.lower.weight(), iv(0));
    EXPECT_TRUE(pb.lower_exact);
    EXPECT_EQ(pb.upper.weight(), Value::parse("209/2^3"));
    EXPECT_THROW(payment_bound_valuations(v2, Rational(0), Value::parse("1/2^3"), Bundle{1}), UsageError);
    EXPECT_THROW(payment_bound_valuations(v2, Rational(1), Value::parse("1/2^3"), Bundle()), UsageError);
    EXPECT_THROW(payment_bound_valuations(v2, Rational(1), iv(0), Bundle{1}), UsageError);
}

TEST(PaymentBounds, NonDyadicWeightsRoundOutward) {
    // v2([m]) = 10, v2([m] \ S) = 1
    const Valuation v2 = Xos::additive({iv(9), iv(1)});
    const auto pb = payment_bound_valuations(v2, Rational(3, 5), Value::parse("1/2^3"), Bundle{1});
    const Rational up = Rational(50, 3) - 1 + Rational(1, 8);
    const Rational lo = 6 - 1 - Rational(1, 8);
    EXPECT_FALSE(pb.upper_exact);
    EXPECT_TRUE(pb.lower_exact);
    EXPECT_GT(pb.upper.weight().to_rational(), up);
    EXPECT_LT(pb.upper.weight().to_rational() - up, Rational(1, 1 << 3));
    EXPECT_EQ(pb.lower.weight().to_rational(), lo);
    const auto third = payment_bound_valuations(v2, Rational(1, 3), Value::parse("1/2^3"), Bundle{1});
    const Rational third_lo = Rational(10, 3) - 1 - Rational(1, 8);
    EXPECT_FALSE(third.lower_exact);
    EXPECT_LT(third.lower.weight().to_rational(), third_lo);
    EXPECT_LT(third_lo - third.lower.weight().to_rational(), Rational(1, 1 << 3));
}

TEST(PaymentBounds, GapIsTwoEpsilonAtAlphaOne) {
    const Valuation v2 = Xos::additive({iv(6), iv(4)});
    const Value eps = Value::parse("1/2^10");
    const auto pb = payment_bound_valuations(v2, Rational(1), eps, Bundle{2});
    EXPECT_EQ(pb.upper.weight() - pb.lower.weight(), eps + eps);
}

TEST(Sandwich, VcgIsTight) {
    Rng rng(149);
    for (int t = 0; t < 20; ++t) {
        const int m = 2 + static_cast<int>(rng.below(3));
        const Xos v2 = random_xos(m, 2, 6, rng, 0);
        const Bundle s = random_nonempty_bundle(m, rng);
        const Value eps = Value::parse("1/2^10");
        const auto rep = payment_sandwich_check(vcg(), v2, s, eps);
        if (rep.status == SandwichStatus::kInconclusive) continue;
        EXPECT_EQ(rep.status, SandwichStatus::kHolds);
        const Value clarke = v2.value(Bundle::full(m)) - v2.value(Bundle::full(m) - s);
        EXPECT_EQ(*rep.menu_delta, clarke);
        EXPECT_LE(rep.upper_bound - *rep.menu_delta, eps);
    }
}

TEST(Sandwich, GrandBundleWithFullS) {
    Rng rng(151);
    for (int t = 0; t < 10; ++t) {
        const Xos v2 = random_xos(3, 2, 6, rng, 0);
        const auto rep = payment_sandwich_check(grand_bundle_second_price(), v2, Bundle::full(3), Value::parse("1/2^10"),
                                                Rational(1, 2));
        EXPECT_NE(rep.status, SandwichStatus::kViolated);
    }
}

TEST(Sandwich, LargeEpsilonAlwaysHolds) {
    const Valuation v2 = Xos::additive({iv(6), iv(4)});
    const auto rep = payment_sandwich_check(vcg(), v2, Bundle{1}, iv(1000));
    EXPECT_EQ(rep.status, SandwichStatus::kHolds);
}
