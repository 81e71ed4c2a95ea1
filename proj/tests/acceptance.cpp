// One line per acceptance criterion. ctest fails the run if any line reads FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "calab/calab.hpp"
#include "oracles.hpp"

using namespace calab;

namespace {

Value iv(std::int64_t n) { return integer_value(n); }

struct Outcome {
    bool pass = true;
    std::string note;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            note = what;
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<void(Outcome&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < limit_seconds, "over the time limit");
    if (!out.pass) ++failures;
    std::printf("%s %2d %s (%.2fs)%s%s\n", out.pass ? "PASS" : "FAIL", id, title, secs, out.note.empty() ? "" : ": ",
                out.note.c_str());
    std::fflush(stdout);
}

std::vector<Valuation> single_minded_probes(int m, int max_weight) {
    std::vector<Valuation> probes;
    for (std::uint64_t t = 1; t < (std::uint64_t{1} << m); ++t)
        for (int w = 0; w <= max_weight; ++w) probes.emplace_back(SingleMinded(m, iv(w), Bundle(t)));
    return probes;
}

FiniteDomain random_integer_domain(std::size_t n, std::size_t size, int m, Rng& rng) {
    FiniteDomain d;
    for (std::size_t i = 0; i < n; ++i) {
        d.per_bidder.emplace_back();
        for (std::size_t s = 0; s < size; ++s) {
            if (rng.coin())
                d.per_bidder.back().emplace_back(random_xos(m, 1 + static_cast<int>(rng.below(3)), 4, rng, 0));
            else
                d.per_bidder.back().emplace_back(random_single_minded(m, 6, rng, 0));
        }
    }
    return d;
}

Valuation random_subadditive(int m, Rng& rng) {
    if (rng.coin()) return random_set_cover_valuation(m, 3 + static_cast<int>(rng.below(3)), rng);
    return random_xos(m, 1 + static_cast<int>(rng.below(3)), 6, rng);
}

void fixture_family(Outcome& o) {
    const auto f = appendix_c_family();
    const auto c = instantiate_collection(f, appendix_c_selector());
    const std::vector<Bundle> want{Bundle{1, 2, 3, 4}, Bundle{1, 2, 3, 4}, Bundle{1, 2, 3, 4, 5}, Bundle{1, 2, 3, 4, 6}};
    o.require(c.flat() == want, "instantiated sets differ");
    o.require(is_l_sparse(c.flat(), 2, 6).sparse, "not 2-sparse");
    const auto three = is_l_sparse(c.flat(), 3, 6);
    o.require(!three.sparse && three.witness == std::vector<std::size_t>{2, 3}, "3-sparsity witness is not (S21, S22)");
    o.require(!is_l_independent(f, 3, IndependenceMode::exhaustive_sweep()).independent, "family is 3-independent");
}

void set_cover_lemma(Outcome& o) {
    Rng rng(1001);
    for (int t = 0; t < 24; ++t) {
        const int m = 6 + t % 5;
        const int l = 3 + t % 3;
        const auto coll = random_sparse_collection(m, 2 + static_cast<int>(rng.below(4)), l, rng);
        const auto v = build_set_cover_valuation(coll, l, m);
        const auto table = oracle::set_cover_table(coll, l, m);
        const std::string at = " (collection " + std::to_string(t) + ")";
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
            const Bundle s(x);
            o.require(v.value(s).to_rational() == table[x], "value differs from the definition" + at);
            o.require(v.value(s) + v.value(s.complement(m)) == iv(l), "complement identity fails" + at);
        }
        o.require(check_monotone_normalized(v, m).ok(), "not monotone and normalized" + at);
        o.require(check_subadditive(v, m).ok(), "not subadditive" + at);
        for (const auto& s : coll) {
            o.require(v.value(s) == iv(1), "v(S) != 1" + at);
            o.require(v.value(s.complement(m)) == iv(l - 1), "v(complement S) != l - 1" + at);
        }
    }
}

void ratio_formulas(Outcome& o) {
    for (std::int64_t l = 3; l <= 10000; ++l)
        if (!sqrt3_dichotomy_formula(l, 64).holds) o.require(false, "sqrt3 bound fails at l = " + std::to_string(l));
    const auto at_max = sqrt3_dichotomy_formula(10000, 64);
    o.require(std::abs(at_max.midpoint() - 0.3660) <= 1e-3, "sqrt3 value at l = 10^4 is not near 0.3660");
    for (std::int64_t m : {1000LL, 1000000LL, 1000000000LL})
        o.require(sqrt5_collision_formula(m, 64).holds, "sqrt5 bound fails at m = " + std::to_string(m));
    o.require(std::abs(sqrt5_collision_formula(1000000000, 64).midpoint() - 0.6180) <= 1e-2,
              "sqrt5 value at m = 10^9 is not near 0.6180");
}

void truthfulness(Outcome& o) {
    Rng rng(1004);
    for (int t = 0; t < 12; ++t) {
        const std::size_t n = 2 + t % 2;
        const int m = 2 + t % 4;
        const auto d = random_integer_domain(n, n == 2 ? 5 : 4, m, rng);
        o.require(check_truthful(vcg(), d, m).ok(), "vcg violation on domain " + std::to_string(t));
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Valuation> others;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others.push_back(d.per_bidder[j][rng.below(d.per_bidder[j].size())]);
            extract_menu(vcg(), i, others, d.per_bidder[i], m);
        }
    }
    FiniteDomain fp;
    fp.per_bidder = {{Xos::additive({iv(3), iv(3)}), Xos::additive({iv(1), iv(1)})}, {Xos::additive({iv(1), iv(1)})}};
    const auto rep = check_truthful(first_price_grand_bundle(), fp, 2);
    o.require(!rep.ok() && rep.violations[0].gain.to_rational() > 0, "first-price grand bundle not caught");
    for (int t = 0; t < 10; ++t) {
        const int m = 2 + t % 2;
        const Xos v2 = random_xos(m, 2, 5, rng, 0);
        const Menu menu = extract_menu(vcg(), 0, {v2}, single_minded_probes(m, 12), m);
        for (const auto& [s, p] : menu.entries)
            o.require(p == v2.value(Bundle::full(m)) - v2.value(Bundle::full(m) - s), "menu price differs from the Clarke formula");
    }
}

void reduction(Outcome& o) {
    Rng rng(1005);
    int overlapping = 0;
    for (int t = 0; t < 120; ++t) {
        const int m = 3 + t % 6;
        std::vector<Valuation> vals;
        std::vector<Bundle> desired;
        for (int i = 0; i < 3; ++i) {
            if (rng.below(3) < 2) {
                auto sm = random_single_minded(m, 9, rng);
                desired.push_back(sm.desired());
                vals.emplace_back(std::move(sm));
            } else {
                vals.emplace_back(random_set_cover_valuation(m, 3 + static_cast<int>(rng.below(3)), rng));
            }
        }
        bool overlap = false;
        for (std::size_t a = 0; a < desired.size(); ++a)
            for (std::size_t b = a + 1; b < desired.size(); ++b) overlap = overlap || !desired[a].disjoint(desired[b]);
        if (overlap) ++overlapping;
        const ValuationProfile p(m, vals);
        ReductionStats stats;
        const auto out = blackbox_reduction(exact_inner(), p, kDefaultPrecision, &stats);
        const std::string at = " (profile " + std::to_string(t) + ")";
        o.require(is_feasible_allocation(out.allocation, m), "infeasible allocation" + at);
        o.require(welfare(p, out.allocation) == optimal_welfare(p).value, "differs from optimal_welfare" + at);
        o.require(welfare(p, out.allocation).to_rational() == oracle::best_welfare(p), "differs from the oracle" + at);
        o.require(out.ledger.total_bits() <= stats.bit_bound, "ledger exceeds the bit bound" + at);
    }
    o.require(overlapping >= 10, "too few overlapping desired sets");
}

void menus(Outcome& o) {
    Rng rng(1006);
    for (int t = 0; t < 30; ++t) {
        const int m = 1 + t % 10;
        Menu menu{m, {}, false};
        const int entries = 1 + static_cast<int>(rng.below(12));
        for (int e = 0; e < entries; ++e) menu.entries[random_bundle(m, rng)] = Value::from_raw(static_cast<std::int64_t>(rng.below(200)), 3);
        const Menu once = monotonize_menu(menu);
        o.require(check_menu_monotone(once).ok(), "monotonized random menu is not monotone");
        o.require(monotonize_menu(once) == once, "monotonize is not idempotent");
    }
    for (int t = 0; t < 55; ++t) {
        const int m = 2 + t % 3;
        const Valuation v2 = random_subadditive(m, rng);
        const auto probes = single_minded_probes(m, 5);
        const Menu once = monotonize_menu(extract_menu(vcg(), 0, {v2}, probes, m));
        o.require(check_menu_monotone(once).ok() && monotonize_menu(once) == once, "vcg menu not canonical");
        for (const auto& probe : probes) {
            const Bundle got = vcg().run(ValuationProfile(m, {probe, v2})).allocation[0];
            const auto best = utility_maximizers(once, probe);
            o.require(std::find(best.begin(), best.end(), got) != best.end(), "replay lost an original winner");
        }
    }
    for (int t = 0; t < 24; ++t) {
        const int m = 2 + t % 2;
        const auto d = random_integer_domain(2, 3, m, rng);
        Mechanism mech = vcg();
        if (t % 2 == 1) {
            std::vector<PriceTable> tables(2);
            for (auto& table : tables)
                for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s)
                    table[Bundle(s)] = Value::from_raw(static_cast<std::int64_t>(rng.below(64)), 3);
            mech = posted_price(tables);
        }
        const bool before = check_truthful(mech, d, m).ok();
        const bool after = check_truthful(precision_aligned(mech), d, m).ok();
        o.require(before && after, "alignment broke truthfulness on domain " + std::to_string(t));
    }
}

void sandwich(Outcome& o) {
    Rng rng(1007);
    const Value eps = Value::parse("1/2^10");
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const int m = 2 + t % 4;
        const Valuation v2 = random_subadditive(m, rng);
        const Bundle s = random_nonempty_bundle(m, rng);
        const auto rep = payment_sandwich_check(vcg(), v2, s, eps);
        const std::string at = " (pair " + std::to_string(t) + ")";
        o.require(rep.status == SandwichStatus::kHolds, "sandwich " + std::string(sandwich_status_name(rep.status)) + at);
        if (!rep.menu_delta) continue;
        o.require(rep.upper_bound - *rep.menu_delta <= eps && *rep.menu_delta - rep.lower_bound <= eps, "delta not tight" + at);
        ++checked;
    }
    o.require(checked >= 50, "fewer than 50 conclusive pairs");
}

void transcripts(Outcome& o) {
    o.require(rectangle_check(full_revelation_map(8, 8)).empty(), "full revelation rejected");
    o.require(rectangle_check(constant_map(8, 8)).empty(), "constant map rejected");
    TranscriptMap crossed(2, 2);
    crossed.set(0, 0, 7);
    crossed.set(1, 1, 7);
    crossed.set(0, 1, 1);
    crossed.set(1, 0, 2);
    o.require(!rectangle_check(crossed).empty(), "crossed 2x2 map accepted");
    for (int K = 1; K <= 3; ++K) {
        const std::size_t n = std::size_t{1} << (2 * K);
        o.require(diagonal_cover_check(full_revelation_map(n, n), K).pass, "full revelation fails the cover check");
    }
    const auto flagged = diagonal_cover_check(constant_map(4, 4), 1);
    o.require(!flagged.pass && !flagged.cells_ok, "constant transcript not flagged at K = 1");
    const Rational want = Rational(BigInt("76560905301892445123"), BigInt(1) << 64);
    const Rational diff = four_tuple_bound(10).to_rational() - want;
    o.require((diff < 0 ? -diff : diff) < Rational(BigInt(1), BigInt(1) << 40), "10 log2(4/3) off at 40 bits");
}

void constructions(Outcome& o) {
    int families = 0, intersections = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed);
        if (generate_independent_family(30, 3, 2, rng, 50)) ++families;
        Rng rng2(seed);
        try {
            const auto fam = random_avg_intersection_family(64, 1, 4, 10, rng2, 50);
            if (verify_avg_intersection(fam)) ++intersections;
        } catch (const RetriesExhausted&) {
        }
    }
    o.require(families >= 95, std::to_string(families) + "/100 width families");
    o.require(intersections >= 95, std::to_string(intersections) + "/100 intersection families");
}

void baselines(Outcome& o) {
    Rng rng(1010);
    for (int t = 0; t < 240; ++t) {
        const int n = 2 + t % 2;
        const int m = 2 + t % 7;
        std::vector<Valuation> vals;
        for (int i = 0; i < n; ++i) vals.push_back(random_subadditive(m, rng));
        const ValuationProfile p(m, vals);
        const Rational got = welfare(p, grand_bundle_to_best(p).allocation).to_rational();
        const Rational best = oracle::best_welfare(p);
        o.require(got * n >= best, "grand bundle below 1/" + std::to_string(n) + " on profile " + std::to_string(t));
    }
    const Rational bound = enclose_golden_conjugate(64).lo.to_rational() - Rational(BigInt(1), BigInt(1) << 50);
    for (int t = 0; t < 240; ++t) {
        const int m = 1 + t % 10;
        const auto v1 = random_single_minded(m, 12, rng);
        const auto v2 = random_xos(m, 1 + static_cast<int>(rng.below(3)), 6, rng);
        const ValuationProfile p(m, {v1, v2});
        const auto out = simultaneous_threshold_protocol(v1, v2);
        o.require(out.ledger.size() == 2, "threshold protocol used more than two messages");
        o.require(approx_ratio(welfare(p, out.allocation), p).at_least(bound), "threshold ratio below phi on pair " + std::to_string(t));
    }
}

}  // namespace

int main() {
    criterion(1, "fixture family instantiation, sparsity and independence", 1, fixture_family);
    criterion(2, "set-cover valuation lemma on random sparse collections", 60, set_cover_lemma);
    criterion(3, "sqrt3 and sqrt5 ratio formulas at 64 bits", 10, ratio_formulas);
    criterion(4, "truthfulness, taxation principle and the vcg menu", 60, truthfulness);
    criterion(5, "reduction with exact inner equals the optimum", 120, reduction);
    criterion(6, "menu monotonization, replay and precision alignment", 60, menus);
    criterion(7, "payment sandwich for vcg at eps 2^-10", 30, sandwich);
    criterion(8, "rectangle, diagonal cover and four-tuple bound", 5, transcripts);
    criterion(9, "width families and average-intersection families over 100 seeds", 300, constructions);
    criterion(10, "grand-bundle and threshold baselines", 120, baselines);
    std::printf("%d of 10 criteria met\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
