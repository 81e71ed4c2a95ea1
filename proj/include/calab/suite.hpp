#pragma once

// Property suites for every module, run at desk-scale caps.

#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "calab/generators.hpp"
#include "calab/lowerbound.hpp"
#include "calab/mechanisms.hpp"

namespace calab::suite {

struct CheckResult {
    std::string module;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Options {
    std::uint64_t seed = 1;
    unsigned precision = kDefaultPrecision;
    std::set<std::string> only;  // empty runs everything
    bool inject_broken_monotone = false;
};

inline const std::vector<std::string>& module_names() {
    static const std::vector<std::string> names{"core", "valuations", "families", "welfare", "mechanisms", "lowerbound"};
    return names;
}

namespace detail {

class Recorder {
public:
    explicit Recorder(std::vector<CheckResult>& out) : out_(out) {}

    void run(const std::string& module, const std::string& name, const std::function<std::string()>& body) {
        CheckResult r{module, name, false, {}};
        try {
            r.detail = body();
            r.pass = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        out_.push_back(std::move(r));
    }

private:
    std::vector<CheckResult>& out_;
};

inline ValuationProfile random_subadditive_profile(int n, int m, Rng& rng, unsigned k) {
    std::vector<Valuation> vals;
    for (int i = 0; i < n; ++i) {
        if (rng.coin())
            vals.emplace_back(random_set_cover_valuation(m, 3 + static_cast<int>(rng.below(3)), rng, k));
        else
            vals.emplace_back(random_xos(m, 1 + static_cast<int>(rng.below(3)), 4, rng, k));
    }
    return ValuationProfile(m, std::move(vals));
}

inline ValuationProfile random_mixed_profile(int n, int m, Rng& rng, unsigned k) {
    std::vector<Valuation> vals;
    for (int i = 0; i < n; ++i) {
        if (rng.coin())
            vals.emplace_back(random_single_minded(m, 8, rng, k));
        else
            vals.emplace_back(random_set_cover_valuation(m, 3 + static_cast<int>(rng.below(3)), rng, k));
    }
    return ValuationProfile(m, std::move(vals));
}

inline Allocation random_allocation(std::size_t n, int m, Rng& rng) {
    Allocation a = Allocation::empty(n);
    for (int j = 1; j <= m; ++j) {
        const auto who = rng.below(n + 1);
        if (who < n) a[who].insert(j);
    }
    return a;
}

}  // namespace detail

inline void core_suite(detail::Recorder& rec, const Options& opt) {
    Rng rng(opt.seed);
    rec.run("core", "exact subtraction round-trip", [&]() -> std::string {
        for (int t = 0; t < 1000; ++t) {
            const Value a = Value::from_raw(static_cast<std::int64_t>(rng.below(1ULL << 40)), opt.precision);
            const Value b = Value::from_raw(static_cast<std::int64_t>(rng.below(1ULL << 40)), opt.precision);
            if ((a - b) + b != a) return "(a-b)+b != a for a=" + a.to_string() + " b=" + b.to_string();
        }
        return {};
    });
    rec.run("core", "welfare invariant under bidder permutation", [&]() -> std::string {
        for (int t = 0; t < 50; ++t) {
            const auto p = detail::random_subadditive_profile(3, 6, rng, opt.precision);
            const auto a = detail::random_allocation(3, 6, rng);
            const ValuationProfile q(6, {p[2], p[0], p[1]});
            const Allocation b({a[2], a[0], a[1]});
            if (welfare(p, a) != welfare(q, b)) return "permuted welfare differs";
        }
        return {};
    });
    rec.run("core", "welfare monotone under enlargement", [&]() -> std::string {
        for (int t = 0; t < 50; ++t) {
            const auto p = detail::random_subadditive_profile(3, 6, rng, opt.precision);
            auto a = detail::random_allocation(3, 6, rng);
            const Value before = welfare(p, a);
            const Bundle free = Bundle::full(6) - a.allocated();
            if (free.empty()) continue;
            const auto who = rng.below(3);
            a[who] = a[who] | free;
            if (!is_feasible_allocation(a, 6)) continue;
            if (welfare(p, a) < before) return "welfare dropped after adding unallocated items";
        }
        return {};
    });
    rec.run("core", "fixture valuations monotone and normalized", [&]() -> std::string {
        std::vector<std::pair<std::string, Valuation>> fixtures{
            {"single-minded", SingleMinded(4, integer_value(5), Bundle{1, 2})},
            {"xos", random_xos(6, 3, 5, rng, opt.precision)},
            {"bxos", BinaryXos(6, {Bundle{1, 2}, Bundle{3, 4, 5}})},
        };
        if (opt.inject_broken_monotone) {
            std::map<Bundle, Value> entries{{Bundle{1}, integer_value(3)}, {Bundle{1, 2}, integer_value(2)}};
            fixtures.emplace_back("injected table", TableValuation::from_entries(2, entries, false));
        }
        for (const auto& [name, v] : fixtures) {
            const auto rep = check_monotone_normalized(v, v.item_count());
            if (!rep.normalized()) return name + ": v(empty) = " + rep.empty_value.to_string();
            if (!rep.violations.empty()) {
                const auto& x = rep.violations.front();
                return name + ": v(" + x.smaller.to_string() + ") = " + x.smaller_value.to_string() + " > v(" +
                       (x.smaller | Bundle{x.item}).to_string() + ") = " + x.larger_value.to_string();
            }
        }
        return {};
    });
}

inline void valuations_suite(detail::Recorder& rec, const Options& opt) {
    Rng rng(opt.seed + 1);
    rec.run("valuations", "XOS is subadditive", [&]() -> std::string {
        for (int t = 0; t < 10; ++t) {
            const auto v = random_xos(8, 3, 6, rng, opt.precision);
            if (const auto rep = check_subadditive(v, 8); !rep.ok())
                return "violation at S=" + rep.violations[0].s.to_string() + " T=" + rep.violations[0].t.to_string();
        }
        return {};
    });
    rec.run("valuations", "BXOS equals its indicator XOS", [&]() -> std::string {
        for (int t = 0; t < 20; ++t) {
            std::vector<Bundle> coll;
            for (int c = 0; c < 3; ++c) coll.push_back(random_bundle(8, rng));
            const BinaryXos b(8, coll, opt.precision);
            const Xos x = b.to_xos();
            for (std::uint64_t s = 0; s < 256; ++s)
                if (b.value(Bundle(s)) != x.value(Bundle(s))) return "mismatch at " + Bundle(s).to_string();
        }
        return {};
    });
    rec.run("valuations", "single-minded with |T|>=2 is not subadditive", [&]() -> std::string {
        for (int t = 0; t < 20; ++t) {
            const auto v = random_single_minded(6, 9, rng, opt.precision);
            const bool expect_violation = v.desired().size() >= 2;
            if (check_subadditive(v, 6).ok() == expect_violation)
                return "unexpected verdict for T=" + v.desired().to_string();
        }
        return {};
    });
    rec.run("valuations", "SingleM* agrees with its single-minded form", [&]() -> std::string {
        auto fam = std::make_shared<const KWidthFamily>(random_width_family(8, 3, rng));
        for (int i = 0; i < 3; ++i)
            for (int delta = 0; delta <= 1; ++delta) {
                const SingleMStar s(fam, i, delta, 5, opt.precision);
                const SingleMinded plain = s.as_single_minded();
                for (std::uint64_t x = 0; x < 256; ++x)
                    if (s.value(Bundle(x)) != plain.value(Bundle(x))) return "mismatch at " + Bundle(x).to_string();
            }
        return {};
    });
}

inline void families_suite(detail::Recorder& rec, const Options& opt) {
    Rng rng(opt.seed + 2);
    rec.run("families", "set-cover valuation lemma properties", [&]() -> std::string {
        for (int t = 0; t < 12; ++t) {
            const int m = 6 + static_cast<int>(rng.below(5));
            const int l = 3 + static_cast<int>(rng.below(3));
            const auto v = random_set_cover_valuation(m, l, rng, opt.precision);
            const Value lv = Value::from_integer(l, opt.precision);
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x)
                if (v.value(Bundle(x)) + v.value(Bundle(x).complement(m)) != lv)
                    return "complement identity fails at " + Bundle(x).to_string();
            if (!check_monotone_normalized(v, m).ok()) return "not monotone/normalized";
            if (m <= 8 && !check_subadditive(v, m).ok()) return "not subadditive";
        }
        return {};
    });
    rec.run("families", "instantiation is pure and respects the top layer", [&]() -> std::string {
        const auto f = random_width_family(12, 3, rng);
        for (std::uint64_t code = 0; code < 64; ++code) {
            const auto sel = SelectorPair::from_code(code * 97 % 4096, 3);
            const auto a = instantiate_collection(f, sel);
            const auto b = instantiate_collection(f, sel);
            if (a.sets != b.sets) return "instantiation not deterministic";
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const auto ui = static_cast<std::size_t>(i);
                    const Bundle top = sel.b[ui] == 0 ? f.g[ui] : f.g_complement(i);
                    if (!a.sets[ui][static_cast<std::size_t>(j)].superset_of(top)) return "S[i][j] misses its top set";
                }
        }
        return {};
    });
    rec.run("families", "sparsity is monotone in l", [&]() -> std::string {
        for (int t = 0; t < 30; ++t) {
            std::vector<Bundle> coll;
            for (int c = 0; c < 6; ++c) coll.push_back(random_bundle(10, rng));
            bool prev = true;
            for (int l = 1; l <= 6; ++l) {
                const bool now = is_l_sparse(coll, l, 10).sparse;
                if (now && !prev) return "l-sparse but not (l-1)-sparse";
                prev = now;
            }
        }
        return {};
    });
    rec.run("families", "bundled 2-width family", [&]() -> std::string {
        const auto f = appendix_c_family();
        const auto c = instantiate_collection(f, appendix_c_selector()).flat();
        const std::vector<Bundle> want{Bundle{1, 2, 3, 4}, Bundle{1, 2, 3, 4}, Bundle{1, 2, 3, 4, 5}, Bundle{1, 2, 3, 4, 6}};
        if (c != want) return "instantiation differs from the expected sets";
        if (!is_l_sparse(c, 2, 6).sparse) return "expected 2-sparse";
        if (is_l_sparse(c, 3, 6).sparse) return "expected not 3-sparse";
        if (is_l_independent(f, 3, IndependenceMode::exhaustive_sweep()).independent) return "expected not 3-independent";
        if (!claim_vals_props_check(f, 2, appendix_c_selector(), opt.precision).empty()) return "claim identities fail";
        return {};
    });
}

inline void welfare_suite(detail::Recorder& rec, const Options& opt) {
    Rng rng(opt.seed + 3);
    rec.run("welfare", "oracle dominates random allocations", [&]() -> std::string {
        for (int t = 0; t < 20; ++t) {
            const auto p = detail::random_subadditive_profile(3, 6, rng, opt.precision);
            const Value best = optimal_welfare(p).value;
            for (int r = 0; r < 20; ++r)
                if (best < welfare(p, detail::random_allocation(3, 6, rng))) return "random allocation beats the oracle";
        }
        return {};
    });
    rec.run("welfare", "reduction with exact inner equals the optimum", [&]() -> std::string {
        const auto inner = exact_inner();
        for (int t = 0; t < 20; ++t) {
            const auto p = detail::random_mixed_profile(3, 6, rng, opt.precision);
            ReductionStats st;
            const auto out = blackbox_reduction(inner, p, opt.precision, &st);
            if (welfare(p, out.allocation) != optimal_welfare(p).value) return "reduction misses the optimum";
            if (out.ledger.total_bits() > st.bit_bound) return "ledger exceeds the shape bound";
        }
        return {};
    });
    rec.run("welfare", "simultaneous protocol sends two messages", [&]() -> std::string {
        for (int t = 0; t < 20; ++t) {
            const auto v1 = random_single_minded(6, 10, rng, opt.precision);
            const auto v2 = random_xos(6, 2, 4, rng, opt.precision);
            if (simultaneous_threshold_protocol(v1, v2, opt.precision).ledger.size() != 2) return "message count != 2";
        }
        return {};
    });
}

inline void mechanisms_suite(detail::Recorder& rec, const Options& opt) {
    Rng rng(opt.seed + 4);
    rec.run("mechanisms", "vcg truthful on random domains", [&]() -> std::string {
        for (int t = 0; t < 3; ++t) {
            FiniteDomain d;
            for (int i = 0; i < 2; ++i) {
                d.per_bidder.emplace_back();
                for (int c = 0; c < 4; ++c) d.per_bidder.back().emplace_back(random_xos(4, 2, 5, rng, opt.precision));
            }
            if (!check_truthful(vcg(), d, 4).ok()) return "vcg violates truthfulness";
        }
        return {};
    });
    rec.run("mechanisms", "taxation principle for vcg and gb2p", [&]() -> std::string {
        for (int t = 0; t < 10; ++t) {
            const Valuation v2 = random_xos(4, 2, 5, rng, opt.precision);
            std::vector<Valuation> probes;
            for (int c = 0; c < 8; ++c) probes.emplace_back(random_single_minded(4, 10, rng, opt.precision));
            extract_menu(vcg(), 0, {v2}, probes, 4);
            extract_menu(grand_bundle_second_price(), 0, {v2}, probes, 4);
        }
        return {};
    });
    rec.run("mechanisms", "monotonized menus are monotone and normalized", [&]() -> std::string {
        for (int t = 0; t < 20; ++t) {
            Menu menu{6, {}, false};
            for (int c = 0; c < 6; ++c) menu.entries[random_bundle(6, rng)] = integer_value(static_cast<std::int64_t>(rng.below(20)));
            const Menu canon = monotonize_menu(menu);
            if (!check_menu_monotone(canon).ok()) return "monotonized menu fails the check";
            if (monotonize_menu(canon) != canon) return "monotonization not idempotent";
        }
        return {};
    });
    rec.run("mechanisms", "precision alignment idempotent and order preserving", [&]() -> std::string {
        for (int t = 0; t < 20; ++t) {
            Menu menu{4, {}, false};
            for (int c = 0; c < 6; ++c)
                menu.entries[random_bundle(4, rng)] = Value::from_raw(static_cast<std::int64_t>(rng.below(1 << 24)), 20);
            const Menu a = precision_align(menu);
            if (precision_align(a) != a) return "not idempotent";
            for (const auto& [s, p] : menu.entries)
                for (const auto& [s2, p2] : menu.entries)
                    if (p <= p2 && !(*a.price(s) <= *a.price(s2))) return "order not preserved";
        }
        return {};
    });
}

inline void lowerbound_suite(detail::Recorder& rec, const Options& opt) {
    Rng rng(opt.seed + 5);
    rec.run("lowerbound", "sqrt3 dichotomy formula below its bound for l in 3..10000", [&]() -> std::string {
        for (std::int64_t l = 3; l <= 10000; ++l)
            if (!sqrt3_dichotomy_formula(l).holds) return "fails at l=" + std::to_string(l);
        return {};
    });
    rec.run("lowerbound", "four-tuple bound is linear", [&]() -> std::string {
        const auto one = four_tuple_bound(1);
        for (std::int64_t k = 0; k <= 50; ++k)
            if (four_tuple_bound(k) != one.times(BigInt(k))) return "non-linear at K=" + std::to_string(k);
        return {};
    });
    rec.run("lowerbound", "merged-revelation protocols pass the cover check", [&]() -> std::string {
        for (int K = 1; K <= 3; ++K)
            for (int t = 0; t < 4; ++t) {
                std::vector<std::optional<std::pair<int, int>>> merges(static_cast<std::size_t>(K));
                for (auto& mg : merges)
                    if (rng.coin()) {
                        const int a = 1 + static_cast<int>(rng.below(3));
                        mg = std::pair{a, a + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(4 - a)))};
                    }
                const auto rep = diagonal_cover_check(merged_revelation_map(K, merges), K);
                if (!rep.rectangle_ok || !rep.cells_ok || !rep.size_ok)
                    return "cover check fails at K=" + std::to_string(K);
            }
        return {};
    });
    rec.run("lowerbound", "rectangle check on reference maps", [&]() -> std::string {
        if (!rectangle_check(full_revelation_map(4, 4)).empty()) return "full revelation rejected";
        if (!rectangle_check(constant_map(4, 4)).empty()) return "constant map rejected";
        return {};
    });
}

inline std::vector<CheckResult> run_suite(const Options& opt) {
    for (const auto& name : opt.only) {
        bool known = false;
        for (const auto& m : module_names()) known = known || m == name;
        if (!known) throw UsageError("run-suite: unknown module '" + name + "'");
    }
    std::vector<CheckResult> out;
    detail::Recorder rec(out);
    auto want = [&](const std::string& m) { return opt.only.empty() || opt.only.count(m) > 0; };
    if (want("core")) core_suite(rec, opt);
    if (want("valuations")) valuations_suite(rec, opt);
    if (want("families")) families_suite(rec, opt);
    if (want("welfare")) welfare_suite(rec, opt);
    if (want("mechanisms")) mechanisms_suite(rec, opt);
    if (want("lowerbound")) lowerbound_suite(rec, opt);
    return out;
}

}  // namespace calab::suite
