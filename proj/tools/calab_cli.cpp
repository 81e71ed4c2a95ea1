// calab: command-line front end for the auction laboratory.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "calab/calab.hpp"

namespace {

using calab::io::json;
using namespace calab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
    std::uint64_t seed = 1;
    unsigned precision = kDefaultPrecision;
    int budget_m = kMaxItems;
    std::uint64_t budget = kDefaultEnumerationBudget;
    std::string out;
    std::string format = "json";
};

void write_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + cfg.out + "'");
    f << text;
}

void emit(const RunConfig& cfg, const json& j) { write_text(cfg, j.dump(2) + "\n"); }

void require_json(const RunConfig& cfg, const std::string& cmd) {
    if (cfg.format != "json") throw UsageError(cmd + ": only --format json is supported");
}

void check_m(const RunConfig& cfg, int m) {
    if (m > cfg.budget_m)
        throw BudgetExceeded("m=" + std::to_string(m) + " exceeds --budget-m " + std::to_string(cfg.budget_m));
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

Mechanism mechanism_by_name(const std::string& name, const RunConfig& cfg) {
    if (name == "vcg") return vcg(cfg.budget);
    if (name == "gb2p") return grand_bundle_second_price();
    if (name == "gb1p") return first_price_grand_bundle();
    if (name == "vcg-aligned") return precision_aligned(vcg(cfg.budget));
    throw UsageError("unknown mechanism '" + name + "' (vcg, gb2p, gb1p, vcg-aligned)");
}

Rational parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(BigInt(text));
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw UsageError("bad rational '" + text + "'");
    }
}

Bundle parse_items(const std::string& text) {
    const Bundle b = io::bundle_from_key(text);
    if (b.empty()) throw UsageError("expected a non-empty comma-separated item list, got '" + text + "'");
    return b;
}

/// 64-bit dyadic enclosure of q rendered as its exact decimal expansion.
std::string dyadic_decimal(const Rational& q, Rounding mode) {
    return io::exact_decimal(WideDyadic::from_rational(q, kCertificatePrecision, mode));
}

json certificate_json(const FormulaCertificate& c) {
    return {{"value", {{"lo", io::rational_json(c.value_lo)}, {"hi", io::rational_json(c.value_hi)}}},
            {"bound", {{"lo", io::rational_json(c.bound_lo)}, {"hi", io::rational_json(c.bound_hi)}}},
            {"holds", c.holds},
            {"precisionBits", kCertificatePrecision}};
}

json ledger_summary(const ProtocolOutcome& o, bool messages) { return io::to_json(o, messages); }

// ---------------------------------------------------------------------------

struct GenerateFamilyArgs {
    int m = 30, k = 3, l = 2, retries = 50;
    std::uint64_t trials = 20000;
    std::string fixture;
};

int cmd_generate_family(const RunConfig& cfg, const GenerateFamilyArgs& a) {
    require_json(cfg, "generate-family");
    if (!a.fixture.empty()) {
        if (a.fixture != "appendix-c") throw UsageError("unknown fixture '" + a.fixture + "' (appendix-c)");
        const auto f = appendix_c_family();
        const auto coll = instantiate_collection(f, appendix_c_selector(), "appendix-c");
        const auto flat = coll.flat();
        const auto s3 = is_l_sparse(flat, 3, f.m, cfg.budget);
        json witness = json::array();
        for (auto t : s3.witness) witness.push_back(t);
        emit(cfg, {{"fixture", "appendix-c"},
                   {"family", io::to_json(f)},
                   {"selector", io::to_json(appendix_c_selector())},
                   {"instantiation", io::to_json(coll)},
                   {"sparse", {{"l2", is_l_sparse(flat, 2, f.m, cfg.budget).sparse}, {"l3", s3.sparse}}},
                   {"l3CoveringSets", witness}});
        return kExitPass;
    }
    if (a.l < 2) throw UsageError("generate-family: l must be at least 2");
    if (a.k < 1) throw UsageError("generate-family: k must be positive");
    check_m(cfg, a.m);
    Rng rng(cfg.seed);
    const bool exhaustive = a.k + a.k * a.k <= 20;
    std::optional<KWidthFamily> found;
    IndependenceResult verdict;
    int attempts = 0;
    for (int t = 0; t <= a.retries && !found; ++t) {
        ++attempts;
        auto f = random_width_family(a.m, a.k, rng);
        const auto mode = exhaustive ? IndependenceMode::exhaustive_sweep() : IndependenceMode::sampled(rng.bits(), a.trials);
        verdict = is_l_independent(f, a.l, mode, cfg.budget);
        if (verdict.independent) found = std::move(f);
    }
    const double lm = std::log(static_cast<double>(a.m));
    json report = {{"m", a.m},
                   {"k", a.k},
                   {"l", a.l},
                   {"seed", cfg.seed},
                   {"attempts", attempts},
                   {"independent", verdict.independent},
                   {"mode", exhaustive ? "exhaustive" : "sampled"},
                   {"selectorsChecked", verdict.selectors_checked},
                   {"asymptoticReference",
                    {{"l", std::log2(static_cast<double>(a.m)) / 4}, {"k", std::exp(2 * std::sqrt(a.m) / lm)}}}};
    if (found) {
        report["family"] = io::to_json(*found);
    } else if (verdict.witness_selector) {
        report["lastWitness"] = {{"selector", io::to_json(*verdict.witness_selector)}, {"sets", verdict.witness_sets}};
    }
    emit(cfg, report);
    return found ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

struct TableRow {
    std::string table, parameter;
    std::string value, value_display, bound, bound_display, margin_display;
    bool holds = true;
};

int cmd_ratio_tables(const RunConfig& cfg, const std::string& which) {
    if (which != "all" && which != "sqrt3" && which != "sqrt5" && which != "threebidder")
        throw UsageError("ratio-tables: --table must be all, sqrt3, sqrt5 or threebidder");
    auto want = [&](const char* t) { return which == "all" || which == t; };
    std::vector<TableRow> rows;
    auto cert_row = [&](const std::string& table, const std::string& param, const FormulaCertificate& c) {
        rows.push_back({table, param, dyadic_decimal(c.value_hi, Rounding::kUp), io::decimal(c.value_hi, 6),
                        dyadic_decimal(c.bound_lo, Rounding::kDown), io::decimal(c.bound_lo, 6),
                        io::decimal(c.bound_lo - c.value_hi, 6), c.holds});
    };
    const auto rho = enclose_sqrt3_minus_1(kCertificatePrecision);
    const auto phi = enclose_golden_conjugate(kCertificatePrecision);
    if (want("sqrt3")) {
        for (std::int64_t l : {3, 4, 5, 10, 20, 50, 100, 1000, 10000})
            cert_row("sqrt3", "l=" + std::to_string(l), sqrt3_dichotomy_formula(l));
        const Rational lim = rho.lo.to_rational() / 2;
        rows.push_back({"sqrt3", "limit", dyadic_decimal(lim, Rounding::kDown), io::decimal(lim, 6), "", "", "", true});
    }
    if (want("sqrt5")) {
        for (std::int64_t m : {1000LL, 1000000LL, 1000000000LL})
            cert_row("sqrt5", "m=" + std::to_string(m), sqrt5_collision_formula(m));
        const Rational lim = phi.lo.to_rational();
        rows.push_back({"sqrt5", "limit", dyadic_decimal(lim, Rounding::kDown), io::decimal(lim, 6), "", "", "", true});
    }
    if (want("threebidder")) {
        const Rational phi_hi = phi.hi.to_rational();
        for (const auto& [num, den] : std::vector<std::pair<int, int>>{{1, 2}, {1, 10}, {1, 100}}) {
            const auto s = threebidder_min_over_alpha(Rational(num, den), 1, 1000);
            rows.push_back({"threebidder", "b=" + std::to_string(num) + "/" + std::to_string(den),
                            dyadic_decimal(s.best_ratio, Rounding::kDown), io::decimal(s.best_ratio, 6),
                            dyadic_decimal(phi_hi, Rounding::kUp), io::decimal(phi_hi, 6),
                            io::decimal(s.best_ratio - phi_hi, 6), s.best_ratio >= phi_hi});
        }
    }
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.holds;
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "table,parameter,value,value_display,bound,bound_display,margin_display,holds\n";
        for (const auto& r : rows)
            os << r.table << ',' << r.parameter << ',' << r.value << ',' << r.value_display << ',' << r.bound << ','
               << r.bound_display << ',' << r.margin_display << ',' << (r.holds ? "true" : "false") << '\n';
        write_text(cfg, os.str());
    } else if (cfg.format == "json") {
        json out = json::array();
        for (const auto& r : rows)
            out.push_back({{"table", r.table},
                           {"parameter", r.parameter},
                           {"value", r.value},
                           {"valueDisplay", r.value_display},
                           {"bound", r.bound},
                           {"boundDisplay", r.bound_display},
                           {"marginDisplay", r.margin_display},
                           {"holds", r.holds}});
        emit(cfg, {{"rows", out}, {"allHold", ok}});
    } else {
        throw UsageError("unknown --format '" + cfg.format + "'");
    }
    return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

int cmd_run_suite(const RunConfig& cfg, const std::vector<std::string>& only, const std::string& inject) {
    suite::Options opt;
    opt.seed = cfg.seed;
    opt.precision = cfg.precision;
    opt.only = std::set<std::string>(only.begin(), only.end());
    if (!inject.empty()) {
        if (inject != "broken-monotone") throw UsageError("run-suite: unknown --inject '" + inject + "'");
        opt.inject_broken_monotone = true;
    }
    const auto results = suite::run_suite(opt);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "module,name,pass,detail\n";
        for (const auto& r : results)
            os << r.module << ',' << csv_field(r.name) << ',' << (r.pass ? "true" : "false") << ','
               << csv_field(r.detail) << '\n';
        write_text(cfg, os.str());
    } else if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& r : results)
            arr.push_back({{"module", r.module}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        emit(cfg, {{"seed", cfg.seed}, {"results", arr}, {"passed", results.size() - failed}, {"failed", failed}});
    } else {
        throw UsageError("unknown --format '" + cfg.format + "'");
    }
    return failed == 0 ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

json welfare_json(const ValuationProfile& p, const Allocation& a, const RunConfig& cfg) {
    const Value achieved = welfare(p, a);
    const auto best = optimal_welfare(p, cfg.budget);
    const auto ratio = make_ratio(achieved, best.value);
    json j = {{"welfare", io::to_json(achieved)},
              {"optimal", io::to_json(best.value)},
              {"optimalAllocation", io::to_json(best.allocation)}};
    j["ratio"] = ratio.ratio ? io::rational_json(*ratio.ratio) : json(nullptr);
    return j;
}

ValuationProfile load_profile(const RunConfig& cfg, const std::string& path) {
    auto p = io::profile_from_json(io::read_json_file(path));
    check_m(cfg, p.items());
    return p;
}

int cmd_run_auction(const RunConfig& cfg, const std::string& mech_name, const std::string& profile_path) {
    require_json(cfg, "run-auction");
    const auto mech = mechanism_by_name(mech_name, cfg);
    const auto profile = load_profile(cfg, profile_path);
    const auto out = mech.run(profile);
    json payments = json::array();
    for (const auto& p : out.payments) payments.push_back(io::to_json(p));
    json j = {{"mechanism", mech.name}, {"allocation", io::to_json(out.allocation)}, {"payments", payments}};
    j.update(welfare_json(profile, out.allocation, cfg));
    emit(cfg, j);
    return kExitPass;
}

int cmd_run_protocol(const RunConfig& cfg, const std::string& protocol, const std::string& inner_name,
                     const std::string& profile_path, bool messages) {
    require_json(cfg, "run-protocol");
    const auto profile = load_profile(cfg, profile_path);
    json j = {{"protocol", protocol}};
    bool ok = true;
    ProtocolOutcome out;
    if (protocol == "reduction") {
        InnerProtocol inner;
        if (inner_name == "exact")
            inner = exact_inner(cfg.budget);
        else if (inner_name == "grand-bundle")
            inner = grand_bundle_inner();
        else
            throw UsageError("run-protocol: unknown --inner '" + inner_name + "' (exact, grand-bundle)");
        ReductionStats st;
        out = blackbox_reduction(inner, profile, cfg.precision, &st);
        ok = out.ledger.total_bits() <= st.bit_bound;
        j["inner"] = inner.name;
        j["singleMinded"] = st.single_minded;
        j["feasibleK"] = st.feasible_k;
        j["bitBound"] = st.bit_bound;
        j["withinBitBound"] = ok;
    } else if (protocol == "grand-bundle") {
        out = grand_bundle_to_best(profile, cfg.precision);
    } else if (protocol == "threshold") {
        if (profile.bidders() != 2) throw UsageError("run-protocol: threshold needs exactly two bidders");
        out = simultaneous_threshold_protocol(profile[0], profile[1], cfg.precision);
    } else {
        throw UsageError("run-protocol: unknown protocol '" + protocol + "' (reduction, grand-bundle, threshold)");
    }
    j.update(ledger_summary(out, messages));
    j.update(welfare_json(profile, out.allocation, cfg));
    emit(cfg, j);
    return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

std::vector<Valuation> load_probes(const std::string& path, int m) {
    const json j = io::read_json_file(path);
    const json& list = j.is_object() && j.contains("probes") ? j.at("probes") : j;
    if (!list.is_array()) throw UsageError("probes: expected an array of valuations");
    std::vector<Valuation> out;
    for (const auto& v : list) out.push_back(io::valuation_from_json(v, m));
    return out;
}

/// Single-minded probes on every non-empty bundle with integer weights 0..W,
/// W one above the sum of the others' values for [m].
std::vector<Valuation> default_probes(const std::vector<Valuation>& others, int m, unsigned precision) {
    Value total = Value::from_integer(0, 0);
    for (const auto& v : others) total = total + v.value(Bundle::full(m));
    const Rational t = total.to_rational();
    const BigInt whole = numerator(t) / denominator(t);
    const auto w_max = whole.convert_to<std::int64_t>() + 2;
    std::vector<Valuation> out;
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s)
        for (std::int64_t w = 0; w <= w_max; ++w) out.emplace_back(SingleMinded(m, Value::from_integer(w, precision), Bundle(s)));
    return out;
}

json taxation_violation_json(const TaxationViolation& e) {
    return {{"error", "taxation-violation"},
            {"message", e.what()},
            {"bundle", io::to_json(e.bundle)},
            {"first", {{"probe", e.first.probe}, {"price", io::to_json(e.first.price)}}},
            {"second", {{"probe", e.second.probe}, {"price", io::to_json(e.second.price)}}}};
}

int cmd_extract_menu(const RunConfig& cfg, const std::string& mech_name, const std::string& profile_path,
                     std::size_t bidder, const std::string& probes_path) {
    require_json(cfg, "extract-menu");
    const auto mech = mechanism_by_name(mech_name, cfg);
    const auto profile = load_profile(cfg, profile_path);
    const int m = profile.items();
    if (m > kMenuMaxItems) throw UsageError("extract-menu: m must be at most " + std::to_string(kMenuMaxItems));
    if (bidder >= profile.bidders()) throw UsageError("extract-menu: --bidder out of range");
    std::vector<Valuation> others;
    for (std::size_t j = 0; j < profile.bidders(); ++j)
        if (j != bidder) others.push_back(profile[j]);
    const auto probes = probes_path.empty() ? default_probes(others, m, cfg.precision) : load_probes(probes_path, m);
    try {
        const Menu menu = extract_menu(mech, bidder, others, probes, m);
        const Menu canon = monotonize_menu(menu);
        emit(cfg, {{"mechanism", mech.name},
                   {"bidder", bidder},
                   {"probes", probes.size()},
                   {"menu", io::to_json(menu)},
                   {"canonical", io::to_json(canon)}});
        return kExitPass;
    } catch (const TaxationViolation& e) {
        emit(cfg, taxation_violation_json(e));
        return kExitFail;
    }
}

FiniteDomain load_domain(const RunConfig& cfg, const std::string& path, int& m) {
    const json j = io::read_json_file(path);
    m = j.value("m", 0);
    check_m(cfg, m);
    return io::domain_from_json(j);
}

int cmd_taxation_count(const RunConfig& cfg, const std::string& mech_name, const std::string& domain_path) {
    require_json(cfg, "taxation-count");
    const auto mech = mechanism_by_name(mech_name, cfg);
    int m = 0;
    const auto domain = load_domain(cfg, domain_path, m);
    try {
        const auto rep = taxation_complexity(mech, domain, m);
        emit(cfg, {{"mechanism", mech.name}, {"menuCounts", rep.menu_counts}, {"taxationComplexity", rep.log2_max}});
        return kExitPass;
    } catch (const TaxationViolation& e) {
        emit(cfg, taxation_violation_json(e));
        return kExitFail;
    }
}

int cmd_check_truthful(const RunConfig& cfg, const std::string& mech_name, const std::string& domain_path) {
    require_json(cfg, "check-truthful");
    const auto mech = mechanism_by_name(mech_name, cfg);
    int m = 0;
    const auto domain = load_domain(cfg, domain_path, m);
    const auto rep = check_truthful(mech, domain, m);
    json violations = json::array();
    for (const auto& v : rep.violations)
        violations.push_back(
            {{"bidder", v.bidder}, {"truth", v.truth}, {"lie", v.lie}, {"others", v.others}, {"gain", io::to_json(v.gain)}});
    emit(cfg, {{"mechanism", mech.name},
               {"profiles", rep.profiles},
               {"deviations", rep.deviations},
               {"truthful", rep.ok()},
               {"violations", violations}});
    return rep.ok() ? kExitPass : kExitFail;
}

int cmd_payment_bounds(const RunConfig& cfg, const std::string& mech_name, const std::string& v2_path,
                       const std::string& s_text, const std::string& eps_text, const std::string& alpha_text) {
    require_json(cfg, "payment-bounds");
    const auto mech = mechanism_by_name(mech_name, cfg);
    const Valuation v2 = io::valuation_from_json(io::read_json_file(v2_path));
    check_m(cfg, v2.item_count());
    const Bundle s = parse_items(s_text);
    const Value eps = Value::parse(eps_text);
    const Rational alpha = parse_rational(alpha_text);
    const auto pb = payment_bound_valuations(v2, alpha, eps, s);
    const auto rep = payment_sandwich_check(mech, v2, s, eps, alpha);
    json j = {{"mechanism", mech.name},
              {"S", io::to_json(s)},
              {"alpha", io::rational_string(alpha)},
              {"epsilon", io::to_json(eps)},
              {"upper", {{"weight", io::to_json(pb.upper.weight())}, {"exact", pb.upper_exact}}},
              {"lower", {{"weight", io::to_json(pb.lower.weight())}, {"exact", pb.lower_exact}}},
              {"status", std::string(sandwich_status_name(rep.status))},
              {"upperHolds", rep.upper_holds},
              {"lowerHolds", rep.lower_holds}};
    j["menuDelta"] = rep.menu_delta ? io::to_json(*rep.menu_delta) : json(nullptr);
    if (!rep.note.empty()) j["note"] = rep.note;
    emit(cfg, j);
    return rep.status == SandwichStatus::kViolated ? kExitFail : kExitPass;
}

// ---------------------------------------------------------------------------

struct DichotomyArgs {
    std::string kind = "sqrt3";
    std::int64_t l = 100;
    std::int64_t m = 1000;
    int family_m = 16;
    int family_k = 2;
    std::string spec;
};

BadTupleSpec spec_from_json(const json& j) {
    try {
        BadTupleSpec s;
        s.family = io::family_from_json(j.at("family"));
        s.l = j.at("l").get<int>();
        const auto& sels = j.at("selectors");
        if (sels.size() != 4) throw UsageError("bad tuple json: need four selectors");
        for (std::size_t q = 0; q < 4; ++q) s.selectors[q] = io::selector_from_json(sels[q]);
        s.i_star = j.at("i").get<int>();
        s.j1_star = j.at("j1").get<int>();
        s.j2_star = j.at("j2").get<int>();
        return s;
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad tuple json: ") + e.what());
    }
}

json spec_to_json(const BadTupleSpec& s) {
    json sels = json::array();
    for (const auto& sel : s.selectors) sels.push_back(io::to_json(sel));
    return {{"family", io::to_json(s.family)}, {"l", s.l}, {"selectors", sels},
            {"i", s.i_star},                   {"j1", s.j1_star}, {"j2", s.j2_star}};
}

int cmd_verify_dichotomy(const RunConfig& cfg, const DichotomyArgs& a) {
    require_json(cfg, "verify-dichotomy");
    if (a.kind == "sqrt3") {
        const auto c = sqrt3_dichotomy_formula(a.l);
        json j = certificate_json(c);
        j["kind"] = "sqrt3";
        j["l"] = a.l;
        emit(cfg, j);
        return c.holds ? kExitPass : kExitFail;
    }
    if (a.kind == "sqrt5") {
        const auto c = sqrt5_collision_formula(a.m);
        json j = certificate_json(c);
        j["kind"] = "sqrt5";
        j["m"] = a.m;
        emit(cfg, j);
        return c.holds ? kExitPass : kExitFail;
    }
    if (a.kind != "bad-tuple") throw UsageError("verify-dichotomy: --kind must be sqrt3, sqrt5 or bad-tuple");
    if (a.l < 3) throw UsageError("verify-dichotomy: l must be at least 3");
    BadTupleSpec spec;
    if (!a.spec.empty()) {
        spec = spec_from_json(io::read_json_file(a.spec));
    } else {
        check_m(cfg, a.family_m);
        Rng rng(cfg.seed);
        std::optional<BadTupleSpec> found;
        for (int t = 0; t < 50 && !found; ++t)
            found = find_bad_tuple(random_width_family(a.family_m, a.family_k, rng), static_cast<int>(a.l), rng, 200);
        if (!found) throw ConstructionError("verify-dichotomy: no l-sparse bad tuple found for this seed");
        spec = *found;
    }
    const auto r = bad_tuple_welfare_dichotomy(spec, cfg.precision);
    emit(cfg, {{"kind", "bad-tuple"},
               {"spec", spec_to_json(spec)},
               {"low", {{"cap", io::to_json(r.low_cap)}, {"benchmark", io::to_json(r.low_benchmark)},
                        {"ratio", io::rational_json(r.low_ratio)}}},
               {"high", {{"cap", io::to_json(r.high_cap)}, {"benchmark", io::to_json(r.high_benchmark)},
                         {"ratio", io::rational_json(r.high_ratio)}}},
               {"maxRatio", io::rational_json(r.max_ratio)},
               {"bound", {{"lo", io::rational_json(r.paper_bound_lo)}, {"hi", io::rational_json(r.paper_bound_hi)}}},
               {"claimIdentitiesHold", r.claim_identities_hold},
               {"benchmarksFeasible", r.benchmarks_feasible},
               {"holds", r.dichotomy_holds}});
    return r.dichotomy_holds && r.claim_identities_hold ? kExitPass : kExitFail;
}

int cmd_check_rectangle(const RunConfig& cfg, const std::string& map_path) {
    require_json(cfg, "check-rectangle");
    const auto tau = io::transcript_map_from_json(io::read_json_file(map_path));
    const auto v = rectangle_check(tau);
    json arr = json::array();
    for (const auto& x : v)
        arr.push_back({{"transcript", x.transcript},
                       {"first", {x.x1, x.y1}},
                       {"second", {x.x2, x.y2}},
                       {"crossedCell", {x.x1, x.y2}},
                       {"crossedTranscript", x.crossed}});
    emit(cfg, {{"rectangle", v.empty()}, {"violations", arr}});
    return v.empty() ? kExitPass : kExitFail;
}

int cmd_cover_check(const RunConfig& cfg, int K, const std::string& map_path, const std::string& builtin) {
    require_json(cfg, "cover-check");
    if (K < 1 || K > kCoverMaxK) throw UsageError("cover-check: --K must be in 1.." + std::to_string(kCoverMaxK));
    const std::size_t n = std::size_t{1} << (2 * K);
    TranscriptMap tau;
    if (!map_path.empty())
        tau = io::transcript_map_from_json(io::read_json_file(map_path));
    else if (builtin == "full")
        tau = full_revelation_map(n, n);
    else if (builtin == "constant")
        tau = constant_map(n, n);
    else
        throw UsageError("cover-check: give --map or --builtin full|constant");
    const auto r = diagonal_cover_check(tau, K);
    json per = json::array();
    for (const auto& t : r.per_transcript) {
        json cells = json::array();
        for (const auto& c : t.cells) cells.push_back(std::vector<int>(c.begin(), c.end()));
        per.push_back({{"transcript", t.transcript}, {"size", t.inputs.size()}, {"cells", cells}, {"proper", t.all_cells_proper}});
    }
    emit(cfg, {{"K", K},
               {"perTranscript", per},
               {"maxI", r.max_i},
               {"bound3K", r.bound_3k},
               {"transcriptCount", r.transcript_count},
               {"lowerBound", io::rational_json(r.lower_bound)},
               {"rectangleOk", r.rectangle_ok},
               {"cellsOk", r.cells_ok},
               {"sizeOk", r.size_ok},
               {"countOk", r.count_ok},
               {"pass", r.pass}});
    return r.pass ? kExitPass : kExitFail;
}

int cmd_bound_calc(const RunConfig& cfg, std::int64_t K, double k, double cc_sw, bool have_counting) {
    require_json(cfg, "bound-calc");
    if (K < 0) throw UsageError("bound-calc: K must be non-negative");
    const auto bits = four_tuple_bound(K);
    json j = {{"K", K},
              {"fourTupleBound", {{"exact", io::exact_decimal(bits)}, {"display", bits.to_double()}}},
              {"precisionBits", kCertificatePrecision}};
    if (have_counting) j["selectorCountingBound"] = {{"k", k}, {"ccSW", cc_sw}, {"bits", selector_counting_bound(k, cc_sw)}};
    emit(cfg, j);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combinatorial auction mechanism laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--seed", cfg.seed, "RNG seed for randomized commands")->capture_default_str();
    app.add_option("--precision", cfg.precision, "fractional bits k of values")->capture_default_str();
    app.add_option("--budget-m", cfg.budget_m, "largest item count accepted")->capture_default_str();
    app.add_option("--budget", cfg.budget, "enumeration budget")->capture_default_str();
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--format", cfg.format, "json or csv")->capture_default_str();

    std::function<int()> action;

    GenerateFamilyArgs gf;
    auto* c = app.add_subcommand("generate-family", "draw and verify an l-independent width family");
    c->add_option("--m", gf.m)->capture_default_str();
    c->add_option("--k", gf.k)->capture_default_str();
    c->add_option("--l", gf.l)->capture_default_str();
    c->add_option("--retries", gf.retries)->capture_default_str();
    c->add_option("--trials", gf.trials, "selector samples when k is too large to sweep")->capture_default_str();
    c->add_option("--fixture", gf.fixture, "write a bundled family (appendix-c)");
    c->callback([&] { action = [&] { return cmd_generate_family(cfg, gf); }; });

    std::string table = "all";
    c = app.add_subcommand("ratio-tables", "tabulate the ratio formulas against their bounds");
    c->add_option("--table", table, "all, sqrt3, sqrt5 or threebidder")->capture_default_str();
    c->callback([&] { action = [&] { return cmd_ratio_tables(cfg, table); }; });

    std::vector<std::string> only;
    std::string inject;
    c = app.add_subcommand("run-suite", "run the module property suites");
    c->add_option("--only", only, "restrict to these modules");
    c->add_option("--inject", inject, "add a broken fixture (broken-monotone)");
    c->callback([&] { action = [&] { return cmd_run_suite(cfg, only, inject); }; });

    std::string mech = "vcg", profile, probes, domain;
    c = app.add_subcommand("run-auction", "run a mechanism on a profile");
    c->add_option("--mech", mech)->capture_default_str();
    c->add_option("--profile", profile)->required();
    c->callback([&] { action = [&] { return cmd_run_auction(cfg, mech, profile); }; });

    std::string protocol = "reduction", inner = "exact";
    bool messages = false;
    c = app.add_subcommand("run-protocol", "run a protocol and report its transcript cost");
    c->add_option("--protocol", protocol, "reduction, grand-bundle or threshold")->capture_default_str();
    c->add_option("--inner", inner, "inner protocol of the reduction (exact, grand-bundle)")->capture_default_str();
    c->add_option("--profile", profile)->required();
    c->add_flag("--messages", messages, "list every message");
    c->callback([&] { action = [&] { return cmd_run_protocol(cfg, protocol, inner, profile, messages); }; });

    std::size_t bidder = 0;
    c = app.add_subcommand("extract-menu", "extract one bidder's menu");
    c->add_option("--mech", mech)->capture_default_str();
    c->add_option("--profile", profile, "the other bidders are read from here")->required();
    c->add_option("--bidder", bidder)->capture_default_str();
    c->add_option("--probes", probes, "valuations to probe with (default: single-minded grid)");
    c->callback([&] { action = [&] { return cmd_extract_menu(cfg, mech, profile, bidder, probes); }; });

    c = app.add_subcommand("taxation-count", "count distinct menus per bidder over a domain");
    c->add_option("--mech", mech)->capture_default_str();
    c->add_option("--domain", domain)->required();
    c->callback([&] { action = [&] { return cmd_taxation_count(cfg, mech, domain); }; });

    c = app.add_subcommand("check-truthful", "exhaustive deviation sweep over a domain");
    c->add_option("--mech", mech)->capture_default_str();
    c->add_option("--domain", domain)->required();
    c->callback([&] { action = [&] { return cmd_check_truthful(cfg, mech, domain); }; });

    std::string v2_path, s_text, eps_text = "1/2^10", alpha_text = "1";
    c = app.add_subcommand("payment-bounds", "upper/lower payment valuations and the sandwich check");
    c->add_option("--mech", mech)->capture_default_str();
    c->add_option("--v2", v2_path, "valuation file of bidder 2")->required();
    c->add_option("--S", s_text, "bundle, e.g. 1,2")->required();
    c->add_option("--epsilon", eps_text)->capture_default_str();
    c->add_option("--alpha", alpha_text)->capture_default_str();
    c->callback([&] { action = [&] { return cmd_payment_bounds(cfg, mech, v2_path, s_text, eps_text, alpha_text); }; });

    DichotomyArgs da;
    c = app.add_subcommand("verify-dichotomy", "check a welfare dichotomy");
    c->add_option("--kind", da.kind, "sqrt3, sqrt5 or bad-tuple")->capture_default_str();
    c->add_option("--l", da.l)->capture_default_str();
    c->add_option("--m", da.m, "item count for sqrt5 (a perfect cube)")->capture_default_str();
    c->add_option("--family-m", da.family_m)->capture_default_str();
    c->add_option("--family-k", da.family_k)->capture_default_str();
    c->add_option("--spec", da.spec, "bad tuple file (default: random search)");
    c->callback([&] { action = [&] { return cmd_verify_dichotomy(cfg, da); }; });

    std::string map_path, builtin;
    c = app.add_subcommand("check-rectangle", "rectangle property of a transcript map");
    c->add_option("--map", map_path)->required();
    c->callback([&] { action = [&] { return cmd_check_rectangle(cfg, map_path); }; });

    int cover_k = 1;
    c = app.add_subcommand("cover-check", "diagonal cover check over [4]^K");
    c->add_option("--K", cover_k)->capture_default_str();
    c->add_option("--map", map_path);
    c->add_option("--builtin", builtin, "full or constant");
    c->callback([&] { action = [&] { return cmd_cover_check(cfg, cover_k, map_path, builtin); }; });

    std::int64_t bound_k = 1;
    double width = 0, cc_sw = 0;
    c = app.add_subcommand("bound-calc", "evaluate the counting bounds");
    c->add_option("--K", bound_k)->capture_default_str();
    auto* width_opt = c->add_option("--k", width, "width for the selector counting bound");
    c->add_option("--cc-sw", cc_sw, "cost of the welfare protocol, bits");
    c->callback([&] { action = [&] { return cmd_bound_calc(cfg, bound_k, width, cc_sw, width_opt->count() > 0); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }
    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kExitFail;
    }
}
