#include <gtest/gtest.h>

#include "calab/calab.hpp"
#include "oracles.hpp"

using namespace calab;

TEST(Dyadic, ParseAndPrintRoundTrip) {
    const Value v = Value::parse("13/2^3");
    EXPECT_EQ(v.numerator(), 13);
    EXPECT_EQ(v.precision(), 3U);
    EXPECT_EQ(v.to_string(), "13/2^3");
    EXPECT_EQ(Value::parse("7"), integer_value(7, 0));
    EXPECT_THROW(Value::parse("1/3"), UsageError);
    EXPECT_THROW(Value::parse("x/2^3"), UsageError);
}

TEST(Dyadic, ComparisonAcrossPrecisions) {
    EXPECT_EQ(Value::from_raw(1, 1), Value::from_raw(4, 3));
    EXPECT_LT(Value::from_raw(1, 2), Value::from_raw(1, 1));
    EXPECT_EQ(widen(Value::from_raw(6, 2)), WideDyadic::from_raw(BigInt(3), 1));
}

TEST(Dyadic, SubtractionRoundTrip) {
    Rng rng(7);
    for (int t = 0; t < 2000; ++t) {
        const auto a = Value::from_raw(static_cast<std::int64_t>(rng.below(1ULL << 50)), 20);
        const auto b = Value::from_raw(static_cast<std::int64_t>(rng.below(1ULL << 50)), 20);
        EXPECT_EQ((a - b) + b, a);
    }
}

TEST(Dyadic, OverflowIsDetected) {
    const Value big = Value::from_raw(std::numeric_limits<std::int64_t>::max() / 2 + 1, 0);
    EXPECT_THROW(big + big, std::overflow_error);
}

TEST(Dyadic, FloorAndRounding) {
    EXPECT_EQ(Value::parse("27/2^3").floor_to(0), integer_value(3, 0));
    EXPECT_EQ(Value::from_rational(Rational(1, 3), 4, Rounding::kDown), Value::from_raw(5, 4));
    EXPECT_EQ(Value::from_rational(Rational(1, 3), 4, Rounding::kUp), Value::from_raw(6, 4));
    EXPECT_EQ(Value::from_rational(Rational(1, 3), 4, Rounding::kNearest), Value::from_raw(5, 4));
}

TEST(Constants, FrozenEnclosuresAt64Bits) {
    EXPECT_EQ(detail::floor_sqrt3_minus_1(64), BigInt("13503953896175478587"));
    EXPECT_EQ(detail::floor_golden_conjugate(64), BigInt("11400714819323198485"));
    const auto rho = enclose_sqrt3_minus_1(64);
    EXPECT_LT(rho.lo, rho.hi);
    EXPECT_EQ(sqrt3_minus_1(20).numerator(), 767611);
    EXPECT_EQ(golden_conjugate(20).numerator(), 648056);
}

TEST(Bundle, BasicsAndComplement) {
    const Bundle s{1, 3};
    EXPECT_EQ(s.items(), (std::vector<int>{1, 3}));
    EXPECT_EQ(s.complement(4), (Bundle{2, 4}));
    EXPECT_EQ(Bundle::full(64).size(), 64);
    EXPECT_TRUE(Bundle{1}.subset_of(s));
    EXPECT_THROW(Bundle{65}, UsageError);
    EXPECT_THROW(Bundle{0}, UsageError);
}

TEST(Allocation, Feasibility) {
    EXPECT_TRUE(is_feasible_allocation(Allocation({Bundle{1}, Bundle{2}}), 2));
    EXPECT_FALSE(is_feasible_allocation(Allocation({Bundle{1}, Bundle{1}}), 2));
    EXPECT_FALSE(is_feasible_allocation(Allocation({Bundle{3}}), 2));
}

TEST(Welfare, SpecExamples) {
    const Valuation v1 = Xos::additive({integer_value(3), integer_value(1)});
    const Valuation v2 = Xos::additive({integer_value(2), integer_value(2)});
    const ValuationProfile p(2, {v1, v2});
    EXPECT_EQ(welfare(p, Allocation::empty(2)), integer_value(0));
    EXPECT_EQ(welfare(p, Allocation({Bundle{1}, Bundle{2}})), integer_value(5));
    const ValuationProfile single(3, {SingleMinded(3, integer_value(7), Bundle{1, 2})});
    EXPECT_EQ(welfare(single, Allocation({Bundle::full(3)})), integer_value(7));
}

TEST(Welfare, DimensionMismatchIsUsageError) {
    const ValuationProfile p(2, {Xos::additive({integer_value(1), integer_value(1)})});
    EXPECT_THROW(welfare(p, Allocation::empty(2)), UsageError);
    EXPECT_THROW(welfare(p, Allocation({Bundle{3}})), UsageError);
}

TEST(Monotonicity, SingleMindedHasNoViolations) {
    EXPECT_TRUE(check_monotone_normalized(SingleMinded(2, integer_value(5), Bundle{1, 2}), 2).ok());
}

TEST(Monotonicity, BrokenTableReportsOneViolation) {
    std::map<Bundle, Value> entries{{Bundle{1}, integer_value(3)}, {Bundle{1, 2}, integer_value(2)}};
    EXPECT_THROW(TableValuation::from_entries(2, entries), UsageError);
    const Valuation v = TableValuation::from_entries(2, entries, false);
    const auto rep = check_monotone_normalized(v, 2);
    ASSERT_EQ(rep.violations.size(), 1U);
    EXPECT_EQ(rep.violations[0].smaller, Bundle{1});
    EXPECT_EQ(rep.violations[0].item, 2);
}

TEST(Monotonicity, SetCoverValuationOnTwoSparseCollection) {
    const auto coll = instantiate_collection(appendix_c_family(), appendix_c_selector()).flat();
    EXPECT_TRUE(check_monotone_normalized(build_set_cover_valuation(coll, 2, 6), 6).ok());
}

TEST(Monotonicity, LimitEnforced) { EXPECT_THROW(check_monotone_normalized(zero_valuation(17), 17), UsageError); }

TEST(Welfare, PermutationInvariance) {
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        std::vector<Valuation> vals;
        for (int i = 0; i < 3; ++i) vals.emplace_back(random_xos(5, 2, 6, rng));
        const ValuationProfile p(5, vals);
        const auto a = oracle::random_allocation(3, 5, rng);
        const ValuationProfile q(5, {vals[1], vals[2], vals[0]});
        EXPECT_EQ(welfare(p, a), welfare(q, Allocation({a[1], a[2], a[0]})));
    }
}
