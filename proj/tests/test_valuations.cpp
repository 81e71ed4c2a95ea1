#include <gtest/gtest.h>

#include "calab/calab.hpp"
#include "oracles.hpp"

using namespace calab;

namespace {

Value iv(std::int64_t n) { return integer_value(n); }

std::shared_ptr<const KWidthFamily> shared_family(const KWidthFamily& f) { return std::make_shared<const KWidthFamily>(f); }

}  // namespace

TEST(SingleMinded, Indicator) {
    const SingleMinded v(3, iv(5), Bundle{1, 2});
    EXPECT_EQ(v.value(Bundle{1, 2, 3}), iv(5));
    EXPECT_EQ(v.value(Bundle{1}), iv(0));
    EXPECT_EQ(v.value(Bundle()), iv(0));
}

TEST(SingleMinded, EmptyDesiredSetWithPositiveWeightRejected) {
    EXPECT_THROW(SingleMinded(3, iv(1), Bundle()), UsageError);
    EXPECT_NO_THROW(SingleMinded(3, iv(0), Bundle()));
}

TEST(SingleMinded, GrandBundleContainsEveryDesiredSet) {
    const Value alpha = Value::parse("1265/2^11");
    const SingleMinded v(10, alpha + iv(1), Bundle{2, 5, 9});
    EXPECT_EQ(v.value(Bundle::full(10)), alpha + iv(1));
}

TEST(Xos, SpecExamples) {
    const Xos v(2, {{iv(1), iv(0)}, {iv(0), iv(2)}});
    EXPECT_EQ(v.value(Bundle{1, 2}), iv(2));
    EXPECT_EQ(v.value(Bundle()), iv(0));
    EXPECT_EQ(Xos(2, {{iv(1), iv(1)}}).value(Bundle{1, 2}), iv(2));
    EXPECT_THROW(Xos(2, {}), UsageError);
    EXPECT_THROW(Xos(2, {{iv(1)}}), UsageError);
}

TEST(BinaryXos, SpecExamples) {
    const BinaryXos v(3, {Bundle{1, 2}, Bundle{3}});
    EXPECT_EQ(v.value(Bundle{1, 3}), iv(1));
    EXPECT_EQ(v.value(Bundle{1, 2, 3}), iv(2));
}

TEST(BinaryXos, GrandBundleOfEqualSizedSets) {
    Rng rng(5);
    AvgIntersectionFamily fam = random_avg_intersection_family(64, 1, 4, 6, rng, 50);
    const BinaryXos v(64, fam.sets);
    EXPECT_EQ(v.value(Bundle::full(64)), iv(16));
}

TEST(BinaryXos, EqualsIndicatorXos) {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        std::vector<Bundle> coll;
        for (int c = 0; c < 4; ++c) coll.push_back(random_bundle(10, rng));
        const BinaryXos b(10, coll);
        const Xos x = b.to_xos();
        for (std::uint64_t s = 0; s < 1024; ++s) ASSERT_EQ(b.value(Bundle(s)), x.value(Bundle(s)));
    }
}

TEST(Subadditivity, XosIsSubadditive) {
    Rng rng(13);
    for (int t = 0; t < 10; ++t) EXPECT_TRUE(check_subadditive(random_xos(8, 3, 7, rng), 8).ok());
}

TEST(Subadditivity, SingleMindedComplementarity) {
    const auto rep = check_subadditive(SingleMinded(2, iv(5), Bundle{1, 2}), 2);
    ASSERT_FALSE(rep.ok());
    const auto& v = rep.violations[0];
    EXPECT_EQ(v.s | v.t, (Bundle{1, 2}));
    EXPECT_TRUE((v.s == Bundle{1} && v.t == Bundle{2}) || (v.s == Bundle{2} && v.t == Bundle{1}));
}

TEST(Subadditivity, SingleMindedFailsIffDesiredSetHasTwoItems) {
    Rng rng(17);
    for (int t = 0; t < 40; ++t) {
        const auto v = random_single_minded(6, 9, rng);
        EXPECT_EQ(check_subadditive(v, 6).ok(), v.desired().size() < 2);
    }
}

TEST(Subadditivity, SetCoverValuation) {
    Rng rng(19);
    for (int t = 0; t < 5; ++t) EXPECT_TRUE(check_subadditive(random_set_cover_valuation(8, 4, rng), 8).ok());
}

TEST(Subadditivity, LimitEnforced) { EXPECT_THROW(check_subadditive(zero_valuation(13), 13), UsageError); }

TEST(SingleMStar, WeightAtFourWithPerturbation) {
    Rng rng(1);
    const auto fam = shared_family(random_width_family(8, 2, rng));
    const SingleMStar v(fam, 1, 1, 4, 20);
    // round(4 (sqrt3 - 1) 2^20) + 2^20
    EXPECT_EQ(v.weight().numerator(), 4119020);
    EXPECT_EQ(v.weight().precision(), 20U);
    EXPECT_EQ(v.value(fam->g_complement(1)), v.weight());
    EXPECT_EQ(v.value(Bundle::full(8)), v.weight());
}

TEST(SingleMStar, ZeroOffTheComplement) {
    Rng rng(2);
    const auto fam = shared_family(random_width_family(8, 3, rng));
    for (int i = 0; i < 3; ++i) {
        const SingleMStar v(fam, i, 0, 5);
        EXPECT_EQ(v.value(Bundle()), iv(0));
        if (!fam->g[static_cast<std::size_t>(i)].empty()) EXPECT_EQ(v.value(fam->g[static_cast<std::size_t>(i)]), iv(0));
    }
}

TEST(SingleMStar, AgreesWithSingleMindedForm) {
    Rng rng(3);
    const auto fam = shared_family(random_width_family(9, 3, rng));
    for (int i = 0; i < 3; ++i)
        for (int d = 0; d <= 1; ++d) {
            const SingleMStar s(fam, i, d, 7);
            const SingleMinded plain = s.as_single_minded();
            for (std::uint64_t x = 0; x < 512; ++x) ASSERT_EQ(s.value(Bundle(x)), plain.value(Bundle(x)));
        }
}

TEST(SingleMStar, RegistryResolvesAndRejectsUnknownIds) {
    FamilyRegistry reg;
    reg.add("c", appendix_c_family());
    EXPECT_EQ(make_single_m_star(reg, "c", 0, 0, 3).desired(), (Bundle{3, 4, 5, 6}));
    EXPECT_THROW(make_single_m_star(reg, "missing", 0, 0, 3), UsageError);
}

TEST(TableValuation, ValidatesEagerly) {
    std::map<Bundle, Value> ok{{Bundle{1}, iv(1)}, {Bundle{2}, iv(1)}, {Bundle{1, 2}, iv(2)}};
    EXPECT_EQ(TableValuation::from_entries(2, ok).value(Bundle{1, 2}), iv(2));
    EXPECT_THROW(TableValuation::from_entries(2, {{Bundle(), iv(1)}}), UsageError);
}

TEST(Generators, SetCoverNeedsTwoItems) {
    Rng rng(23);
    EXPECT_THROW(random_set_cover_valuation(1, 3, rng), UsageError);
    EXPECT_EQ(random_set_cover_valuation(2, 3, rng).item_count(), 2);
}
