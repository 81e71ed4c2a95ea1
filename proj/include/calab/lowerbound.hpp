#pragma once

// Verifiers for the lower-bound gadgets: welfare dichotomies and their ratio
// formulas, transcript rectangle and diagonal-cover checks, counting bounds.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "calab/families.hpp"
#include "calab/rng.hpp"
#include "calab/welfare.hpp"

namespace calab {

/// Fractional bits used for every comparison against an irrational constant.
inline constexpr unsigned kCertificatePrecision = 64;

namespace detail {

inline Rational lo_of(const DyadicInterval& iv) { return iv.lo.to_rational(); }
inline Rational hi_of(const DyadicInterval& iv) { return iv.hi.to_rational(); }

inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

// floor(cbrt(x)) for x >= 0
inline BigInt icbrt(const BigInt& x) {
    BigInt lo = 0;
    BigInt hi = 1;
    while (hi * hi * hi <= x) hi <<= 1;
    while (hi - lo > 1) {
        const BigInt mid = (lo + hi) >> 1;
        if (mid * mid * mid <= x) lo = mid; else hi = mid;
    }
    return lo;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Bad 4-tuples over a width family.

struct BadTupleSpec {
    KWidthFamily family;
    int l = 0;
    std::array<SelectorPair, 4> selectors;
    int i_star = 0;
    int j1_star = 0;
    int j2_star = 0;

    /// Throws UsageError naming the first broken structural condition.
    void validate() const {
        family.validate();
        for (const auto& s : selectors) s.validate(family.k);
        auto in_range = [&](int x) { return x >= 0 && x < family.k; };
        if (!in_range(i_star) || !in_range(j1_star) || !in_range(j2_star))
            throw UsageError("bad tuple: indices outside the family");
        const auto i = static_cast<std::size_t>(i_star);
        const auto j1 = static_cast<std::size_t>(j1_star);
        const auto j2 = static_cast<std::size_t>(j2_star);
        if (selectors[0].b[i] != 0 || selectors[1].b[i] != 0)
            throw UsageError("bad tuple: b(1) and b(2) must be 0 at i*");
        if (selectors[2].b[i] != 1 || selectors[3].b[i] != 1)
            throw UsageError("bad tuple: b(3) and b(4) must be 1 at i*");
        if (selectors[0].c[i][j1] != 0 || selectors[1].c[i][j1] != 1)
            throw UsageError("bad tuple: C(1), C(2) must be 0, 1 at (i*, j1*)");
        if (selectors[2].c[i][j2] != 0 || selectors[3].c[i][j2] != 1)
            throw UsageError("bad tuple: C(3), C(4) must be 0, 1 at (i*, j2*)");
    }
};

struct DichotomyReport {
    // scenario low: the single-minded bidder (delta = 1) is served cheaply
    Value low_cap;        // v_{i*,1}(compl G) + v1(G) + v2(G)
    Value low_benchmark;  // welfare of (empty, compl G - H0, H0)
    Rational low_ratio;
    // scenario high
    Value high_cap;        // l
    Value high_benchmark;  // welfare of (compl G, G - H1, H1)
    Rational high_ratio;

    Rational max_ratio;
    Rational paper_bound_lo;  // lower end of the certified enclosure of (sqrt3-1)/2 + 3/l
    Rational paper_bound_hi;
    unsigned certificate_precision = kCertificatePrecision;
    bool claim_identities_hold = false;  // v1(G) = v2(G) = 1 and both benchmarks equal 2(l-1) plus the constant
    bool benchmarks_feasible = false;
    bool dichotomy_holds = false;  // max_ratio < paper_bound_lo
};

/// Evaluates both welfare scenarios of the bad-4-tuple argument on the
/// constructed valuations. No mechanism is involved.
inline DichotomyReport bad_tuple_welfare_dichotomy(const BadTupleSpec& spec, unsigned precision = kDefaultPrecision) {
    if (spec.l < 3) throw UsageError("bad tuple dichotomy: l must be at least 3 (got " + std::to_string(spec.l) + ")");
    spec.validate();
    const auto& f = spec.family;
    const int m = f.m;
    const int l = spec.l;
    std::vector<SetCoverValuation> v;
    for (const auto& sel : spec.selectors)
        v.push_back(build_set_cover_valuation(instantiate_collection(f, sel).flat(), l, m, precision));
    auto shared = std::make_shared<const KWidthFamily>(f);
    const SingleMStar a0(shared, spec.i_star, 0, l, precision);
    const SingleMStar a1(shared, spec.i_star, 1, l, precision);

    const auto i = static_cast<std::size_t>(spec.i_star);
    const Bundle g = f.g[i];
    const Bundle gc = f.g_complement(spec.i_star);
    const Bundle h0 = f.h0[i][static_cast<std::size_t>(spec.j1_star)];
    const Bundle h1 = f.h1[i][static_cast<std::size_t>(spec.j2_star)];

    DichotomyReport r;
    const Allocation low_alloc({Bundle(), gc - h0, h0});
    const Allocation high_alloc({gc, g - h1, h1});
    r.benchmarks_feasible = is_feasible_allocation(low_alloc, m) && is_feasible_allocation(high_alloc, m);
    if (!r.benchmarks_feasible) throw std::logic_error("bad tuple dichotomy: benchmark allocation is not feasible");

    r.low_cap = a1.value(gc) + v[0].value(g) + v[1].value(g);
    r.low_benchmark = v[0].value(gc - h0) + v[1].value(h0);
    r.high_cap = Value::from_integer(l, precision);
    r.high_benchmark = a0.value(gc) + v[2].value(g - h1) + v[3].value(h1);

    const Value one = Value::from_integer(1, precision);
    const Value two_l_minus_1 = Value::from_integer(2 * (l - 1), precision);
    r.claim_identities_hold = v[0].value(g) == one && v[1].value(g) == one && r.low_benchmark == two_l_minus_1 &&
                              r.high_benchmark == a0.weight() + two_l_minus_1;

    r.low_ratio = r.low_cap.to_rational() / r.low_benchmark.to_rational();
    r.high_ratio = r.high_cap.to_rational() / r.high_benchmark.to_rational();
    r.max_ratio = detail::rmax(r.low_ratio, r.high_ratio);
    const auto rho = enclose_sqrt3_minus_1(kCertificatePrecision);
    r.paper_bound_lo = detail::lo_of(rho) / 2 + Rational(3, l);
    r.paper_bound_hi = detail::hi_of(rho) / 2 + Rational(3, l);
    r.dichotomy_holds = r.max_ratio < r.paper_bound_lo;
    return r;
}

/// Draws selector quadruples meeting the structural conditions at
/// (i*, j1*, j2*) = (0, 0, 0) until all four instantiations are l-sparse.
inline std::optional<BadTupleSpec> find_bad_tuple(const KWidthFamily& f, int l, Rng& rng, int max_tries) {
    const std::uint64_t codes = std::uint64_t{1} << (f.k + f.k * f.k);
    for (int t = 0; t < max_tries; ++t) {
        BadTupleSpec spec{f, l, {}, 0, 0, 0};
        bool sparse = true;
        for (int q = 0; q < 4 && sparse; ++q) {
            auto sel = SelectorPair::from_code(rng.below(codes), f.k);
            sel.b[0] = q < 2 ? 0 : 1;
            sel.c[0][0] = q % 2;
            sparse = is_l_sparse(instantiate_collection(f, sel).flat(), l, f.m).sparse;
            spec.selectors[static_cast<std::size_t>(q)] = std::move(sel);
        }
        if (sparse) return spec;
    }
    return std::nullopt;
}

/// Certified evaluation of max{(rho l + 3) / (2(l-1)), l / (rho l + 2(l-1))}
/// with rho = sqrt3 - 1 enclosed to `precision` bits. The first term grows
/// with rho and the second shrinks, so the upper end of the maximum uses the
/// upper end of rho in the first term and the lower end in the second.
struct FormulaCertificate {
    Rational value_lo;  // enclosure of the maximum
    Rational value_hi;
    Rational bound_lo;  // enclosure of the bound
    Rational bound_hi;
    bool holds = false;  // value_hi < bound_lo

    double midpoint() const { return static_cast<double>((value_lo + value_hi) / 2); }
    double bound_midpoint() const { return static_cast<double>((bound_lo + bound_hi) / 2); }
};

inline FormulaCertificate sqrt3_dichotomy_formula(std::int64_t l, unsigned precision = kCertificatePrecision) {
    if (l < 3) throw UsageError("dichotomy formula: l must be at least 3");
    const auto rho = enclose_sqrt3_minus_1(precision);
    const Rational lo = detail::lo_of(rho), hi = detail::hi_of(rho);
    const Rational L(l);
    auto r1 = [&](const Rational& p) { return (p * L + 3) / (2 * (L - 1)); };
    auto r2 = [&](const Rational& p) { return L / (p * L + 2 * (L - 1)); };
    FormulaCertificate c;
    c.value_lo = detail::rmax(r1(lo), r2(hi));
    c.value_hi = detail::rmax(r1(hi), r2(lo));
    c.bound_lo = lo / 2 + Rational(3, l);
    c.bound_hi = hi / 2 + Rational(3, l);
    c.holds = c.value_hi < c.bound_lo;
    return c;
}

/// max{((alpha+1) + 2b^2 m) / (bm), bm / (alpha + bm)}, exact.
inline Rational collision_formula(const Rational& alpha, const Rational& b, const Rational& m) {
    const Rational bm = b * m;
    return detail::rmax((alpha + 1 + 2 * b * b * m) / bm, bm / (alpha + bm));
}

/// The collision formula at b = m^(-1/3), alpha = phi * b * m (phi the golden
/// conjugate), against phi + 3 m^(-1/3). m must be a perfect cube so b is exact.
inline FormulaCertificate sqrt5_collision_formula(std::int64_t m, unsigned precision = kCertificatePrecision) {
    if (m < 8) throw UsageError("collision formula: m must be at least 8");
    const BigInt t = detail::icbrt(BigInt(m));
    if (t * t * t != m) throw UsageError("collision formula: m must be a perfect cube");
    const auto phi = enclose_golden_conjugate(precision);
    const Rational lo = detail::lo_of(phi), hi = detail::hi_of(phi);
    const Rational b(BigInt(1), t);
    const Rational M(m);
    // first term grows with phi, second shrinks
    auto r1 = [&](const Rational& p) { return (p * b * M + 1 + 2 * b * b * M) / (b * M); };
    auto r2 = [&](const Rational& p) { return (b * M) / (p * b * M + b * M); };
    FormulaCertificate c;
    c.value_lo = detail::rmax(r1(lo), r2(hi));
    c.value_hi = detail::rmax(r1(hi), r2(lo));
    c.bound_lo = lo + 3 * b;
    c.bound_hi = hi + 3 * b;
    c.holds = c.value_hi < c.bound_lo;
    return c;
}

struct CollisionReport {
    std::size_t witness = 0;  // index into the family of a set in H but not H'
    Bundle h;
    // case M(compl H) <= alpha: profile (v_{compl H,1}, v_B')
    Rational low_welfare;  // alpha + 1 + v_B'(H)
    Rational low_optimum;  // v_B'([m])
    Rational low_ratio;
    Rational low_formula;  // ((alpha+1) + 2b^2m) / (bm)
    // case M(compl H) > alpha: profile (v_{compl H,0}, v_B)
    Rational high_welfare;  // v_B([m])
    Rational high_optimum;  // alpha + v_B(H)
    Rational high_ratio;
    Rational high_formula;  // bm / (alpha + bm)
    Rational bound_lo;      // enclosure of phi + 3 m^(-1/3)
    Rational bound_hi;
    bool holds = false;  // max of the measured ratios < bound_lo
};

/// Welfare caps for two XOS* valuations (sub-collections H, H' of an
/// average-intersection family, given as index lists) that present the same
/// menu to a single-minded bidder.
inline CollisionReport xos_collision_dichotomy(const AvgIntersectionFamily& fam, const std::vector<std::size_t>& h_idx,
                                               const std::vector<std::size_t>& h2_idx, const Rational& alpha,
                                               unsigned precision = kCertificatePrecision) {
    const int m = fam.m;
    auto collect = [&](const std::vector<std::size_t>& idx) {
        std::vector<Bundle> out;
        for (auto t : idx) {
            if (t >= fam.sets.size()) throw UsageError("collision: index " + std::to_string(t) + " outside the family");
            out.push_back(fam.sets[t]);
        }
        if (out.empty()) throw UsageError("collision: sub-collections must be non-empty");
        return out;
    };
    const BinaryXos vb(m, collect(h_idx));
    const BinaryXos vb2(m, collect(h2_idx));
    const std::set<std::size_t> other(h2_idx.begin(), h2_idx.end());
    std::optional<std::size_t> witness;
    for (auto t : h_idx)
        if (!other.count(t)) {
            witness = t;
            break;
        }
    if (!witness) throw UsageError("collision: H is contained in H', no distinguishing set");

    CollisionReport r;
    r.witness = *witness;
    r.h = fam.sets[*witness];
    const Bundle all = Bundle::full(m);
    r.low_welfare = alpha + 1 + vb2.value(r.h).to_rational();
    r.low_optimum = vb2.value(all).to_rational();
    r.low_ratio = r.low_welfare / r.low_optimum;
    r.high_welfare = vb.value(all).to_rational();
    r.high_optimum = alpha + vb.value(r.h).to_rational();
    r.high_ratio = r.high_welfare / r.high_optimum;
    const Rational b(fam.b_num, fam.b_den);
    const Rational bm = b * m;
    r.low_formula = (alpha + 1 + 2 * b * b * m) / bm;
    r.high_formula = bm / (alpha + bm);

    // m^(-1/3) enclosed through floor(cbrt(m 2^(3p)))
    const BigInt c = detail::icbrt(BigInt(m) << (3 * precision));
    const Rational scale = Rational(BigInt(1) << precision);
    const Rational cbrt_lo = Rational(c) / scale;
    const Rational cbrt_hi = Rational(c + 1) / scale;
    const auto phi = enclose_golden_conjugate(precision);
    r.bound_lo = detail::lo_of(phi) + 3 / cbrt_hi;
    r.bound_hi = detail::hi_of(phi) + 3 / cbrt_lo;
    r.holds = detail::rmax(r.low_ratio, r.high_ratio) < r.bound_lo;
    return r;
}

/// max{(alpha + 2b^2 m) / (bm), ((b - b^2/4) m) / (alpha + bm)}, exact.
inline Rational threebidder_attempt_ratio(const Rational& alpha, const Rational& b, const Rational& m) {
    if (b <= 0 || b > 1) throw UsageError("three-bidder ratio: b must be in (0, 1]");
    const Rational bm = b * m;
    return detail::rmax((alpha + 2 * b * b * m) / bm, ((b - b * b / 4) * m) / (alpha + bm));
}

struct AlphaSweep {
    Rational b;
    Rational best_alpha;
    Rational best_ratio;
};

/// Minimizes the three-bidder ratio over alpha = (t / steps) * bm, t = 0..steps.
/// The ratio is scale-free in m, so m only fixes units.
inline AlphaSweep threebidder_min_over_alpha(const Rational& b, const Rational& m, int steps) {
    if (steps < 1) throw UsageError("three-bidder sweep: steps must be positive");
    AlphaSweep s{b, 0, threebidder_attempt_ratio(0, b, m)};
    for (int t = 1; t <= steps; ++t) {
        const Rational alpha = Rational(t, steps) * b * m;
        const Rational r = threebidder_attempt_ratio(alpha, b, m);
        if (r < s.best_ratio) {
            s.best_ratio = r;
            s.best_alpha = alpha;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Transcript maps.

/// Finite map from input pairs (row x, column y) to transcript ids. Cells
/// holding kUndefined are outside the map's domain.
struct TranscriptMap {
    static constexpr std::int64_t kUndefined = -1;

    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> cells;  // row-major

    TranscriptMap() = default;
    TranscriptMap(std::size_t r, std::size_t c) : rows(r), cols(c), cells(r * c, kUndefined) {}

    template <class F>
    static TranscriptMap from_function(std::size_t r, std::size_t c, F&& f) {
        TranscriptMap t(r, c);
        for (std::size_t x = 0; x < r; ++x)
            for (std::size_t y = 0; y < c; ++y) t.set(x, y, f(x, y));
        return t;
    }

    std::int64_t at(std::size_t x, std::size_t y) const { return cells.at(x * cols + y); }
    void set(std::size_t x, std::size_t y, std::int64_t id) {
        if (id < 0) throw UsageError("transcript map: ids must be non-negative");
        cells.at(x * cols + y) = id;
    }
};

struct RectangleViolation {
    std::int64_t transcript = 0;
    std::size_t x1 = 0, y1 = 0;  // tau(x1, y1) = transcript
    std::size_t x2 = 0, y2 = 0;  // tau(x2, y2) = transcript
    std::int64_t crossed = 0;    // tau(x1, y2), which differs (kUndefined if outside the map)
};

/// Equal transcripts on (x, y) and (x', y') must force the same transcript on
/// (x, y') and (x', y). Reports one violation per offending crossed cell.
inline std::vector<RectangleViolation> rectangle_check(const TranscriptMap& tau, std::size_t keep = 64) {
    std::map<std::int64_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> support;
    std::map<std::int64_t, std::map<std::size_t, std::size_t>> row_witness, col_witness;
    for (std::size_t x = 0; x < tau.rows; ++x)
        for (std::size_t y = 0; y < tau.cols; ++y) {
            const auto t = tau.at(x, y);
            if (t == TranscriptMap::kUndefined) continue;
            if (!row_witness[t].count(x)) {
                row_witness[t][x] = y;
                support[t].first.push_back(x);
            }
            if (!col_witness[t].count(y)) {
                col_witness[t][y] = x;
                support[t].second.push_back(y);
            }
        }
    std::vector<RectangleViolation> out;
    for (const auto& [t, rc] : support)
        for (auto x : rc.first)
            for (auto y : rc.second) {
                const auto got = tau.at(x, y);
                if (got == t) continue;
                if (out.size() < keep) out.push_back({t, x, row_witness[t][x], col_witness[t][y], y, got});
            }
    return out;
}

/// Digits of b in [4]^K (values 1..4), index 0 first.
inline std::vector<int> base4_digits(std::uint64_t b, int K) {
    std::vector<int> d(static_cast<std::size_t>(K));
    for (int i = K - 1; i >= 0; --i) {
        d[static_cast<std::size_t>(i)] = static_cast<int>(b % 4) + 1;
        b /= 4;
    }
    return d;
}

struct TranscriptCells {
    std::int64_t transcript = 0;
    std::vector<std::uint64_t> inputs;  // I(T): strings b with tau(b, b) = T
    std::vector<std::set<int>> cells;   // per index i, {b[i] : b in I(T)}
    bool all_cells_proper = true;       // no cell set equals {1,2,3,4}
};

struct CoverReport {
    int K = 0;
    std::vector<TranscriptCells> per_transcript;
    std::size_t max_i = 0;
    std::uint64_t bound_3k = 0;
    std::size_t transcript_count = 0;
    Rational lower_bound;  // (4/3)^K
    bool rectangle_ok = false;
    bool cells_ok = false;
    bool size_ok = false;   // max |I(T)| <= 3^K
    bool count_ok = false;  // transcript_count >= (4/3)^K
    bool pass = false;
};

inline constexpr int kCoverMaxK = 8;

/// Checks a transcript map over string-indexed inputs [4]^K (rows and
/// columns both enumerate the 4^K strings in base-4 order) on its diagonal.
inline CoverReport diagonal_cover_check(const TranscriptMap& tau, int K) {
    if (K < 1 || K > kCoverMaxK) throw UsageError("cover check: K must be in 1.." + std::to_string(kCoverMaxK));
    const std::uint64_t n = std::uint64_t{1} << (2 * K);
    if (tau.rows != n || tau.cols != n)
        throw UsageError("cover check: map must be 4^K x 4^K (" + std::to_string(n) + ")");
    CoverReport r;
    r.K = K;
    std::map<std::int64_t, std::vector<std::uint64_t>> groups;
    for (std::uint64_t b = 0; b < n; ++b) {
        const auto t = tau.at(b, b);
        if (t == TranscriptMap::kUndefined)
            throw UsageError("cover check: diagonal input " + std::to_string(b) + " has no transcript");
        groups[t].push_back(b);
    }
    r.rectangle_ok = rectangle_check(tau, 1).empty();
    r.cells_ok = true;
    std::uint64_t pow3 = 1;
    for (int i = 0; i < K; ++i) pow3 *= 3;
    r.bound_3k = pow3;
    for (const auto& [t, inputs] : groups) {
        TranscriptCells tc{t, inputs, std::vector<std::set<int>>(static_cast<std::size_t>(K)), true};
        for (auto b : inputs) {
            const auto d = base4_digits(b, K);
            for (int i = 0; i < K; ++i) tc.cells[static_cast<std::size_t>(i)].insert(d[static_cast<std::size_t>(i)]);
        }
        for (const auto& c : tc.cells)
            if (c.size() == 4) tc.all_cells_proper = false;
        r.cells_ok = r.cells_ok && tc.all_cells_proper;
        r.max_i = std::max(r.max_i, inputs.size());
        r.per_transcript.push_back(std::move(tc));
    }
    r.transcript_count = groups.size();
    r.lower_bound = Rational(BigInt(1) << (2 * K), BigInt(pow3));
    r.size_ok = r.max_i <= pow3;
    r.count_ok = Rational(r.transcript_count) >= r.lower_bound;
    r.pass = r.rectangle_ok && r.cells_ok && r.size_ok && r.count_ok;
    return r;
}

/// Both sides reveal their whole input: tau(x, y) = x * cols + y.
inline TranscriptMap full_revelation_map(std::size_t rows, std::size_t cols) {
    return TranscriptMap::from_function(rows, cols, [&](std::size_t x, std::size_t y) {
        return static_cast<std::int64_t>(x * cols + y);
    });
}

inline TranscriptMap constant_map(std::size_t rows, std::size_t cols) {
    return TranscriptMap::from_function(rows, cols, [](std::size_t, std::size_t) { return std::int64_t{0}; });
}

/// Over [4]^K x [4]^K: each side reveals its string after identifying the
/// digit pair merges[i] (if any) at index i. Digits are 1..4.
inline TranscriptMap merged_revelation_map(int K, const std::vector<std::optional<std::pair<int, int>>>& merges) {
    if (K < 1 || K > kCoverMaxK) throw UsageError("merged revelation: K must be in 1.." + std::to_string(kCoverMaxK));
    if (merges.size() != static_cast<std::size_t>(K)) throw UsageError("merged revelation: one merge slot per index");
    const std::uint64_t n = std::uint64_t{1} << (2 * K);
    std::vector<std::uint64_t> code(n);
    for (std::uint64_t b = 0; b < n; ++b) {
        const auto d = base4_digits(b, K);
        std::uint64_t c = 0;
        for (int i = 0; i < K; ++i) {
            int digit = d[static_cast<std::size_t>(i)];
            if (const auto& mg = merges[static_cast<std::size_t>(i)]; mg && digit == mg->second) digit = mg->first;
            c = c * 4 + static_cast<std::uint64_t>(digit - 1);
        }
        code[b] = c;
    }
    return TranscriptMap::from_function(n, n, [&](std::size_t x, std::size_t y) {
        return static_cast<std::int64_t>(code[x] * n + code[y]);
    });
}

/// log2(4/3) rounded to nearest at `precision` fractional bits.
inline WideDyadic log2_four_thirds(unsigned precision = kCertificatePrecision) {
    using Float = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;
    if (precision > 320) throw UsageError("log2(4/3): precision above 320 bits is not supported");
    const Float x = log(Float(4) / 3) / log(Float(2));
    const Float scaled = floor(ldexp(x, static_cast<int>(precision)) + Float(0.5));
    return WideDyadic::from_raw(scaled.convert_to<BigInt>(), precision);
}

/// K * log2(4/3): the bits forced by the diagonal-cover argument.
inline WideDyadic four_tuple_bound(std::int64_t K, unsigned precision = kCertificatePrecision) {
    if (K < 0) throw UsageError("four_tuple_bound: K must be non-negative");
    return log2_four_thirds(precision).times(BigInt(K));
}

/// k + k^2 - k log2(2^k + 2^cc_sw): the bits any protocol must use when each
/// of the 2^(k+k^2) selector pairs needs its own transcript and the
/// welfare-computing sub-protocol has cost cc_sw.
inline double selector_counting_bound(double k, double cc_sw) {
    if (k < 0 || cc_sw < 0) throw UsageError("counting bound: arguments must be non-negative");
    const double hi = std::max(k, cc_sw);
    const double lg = hi + std::log2(1.0 + std::exp2(-std::abs(k - cc_sw)));
    return k + k * k - k * lg;
}

}  // namespace calab
