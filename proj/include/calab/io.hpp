#pragma once

// JSON encodings of the library's data types.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "calab/families.hpp"
#include "calab/lowerbound.hpp"
#include "calab/mechanisms.hpp"
#include "calab/welfare.hpp"

namespace calab::io {

using nlohmann::json;

inline json to_json(const Value& v) { return v.to_string(); }
inline json to_json(const WideDyadic& v) { return v.to_string(); }

inline Value value_from_json(const json& j) {
    if (j.is_string()) return Value::parse(j.get<std::string>());
    if (j.is_number_integer()) return Value::from_integer(j.get<std::int64_t>(), 0);
    throw UsageError("json: expected a value string \"n/2^k\" or an integer, got " + j.dump());
}

inline json to_json(Bundle b) { return b.items(); }

inline Bundle bundle_from_json(const json& j) {
    if (!j.is_array()) throw UsageError("json: expected an item list, got " + j.dump());
    Bundle b;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw UsageError("json: item must be an integer, got " + x.dump());
        b.insert(x.get<int>());
    }
    return b;
}

inline std::string rational_string(const Rational& q) { return q.str(); }

/// Decimal rendering with `digits` places after the point (truncated toward zero).
inline std::string decimal(const Rational& q, int digits) {
    const bool neg = q < 0;
    const Rational a = neg ? Rational(-q) : q;
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    const BigInt n = numerator(a) * scale / denominator(a);
    std::string s = BigInt(n / scale).str();
    if (digits > 0) {
        std::string frac = BigInt(n % scale).str();
        s += "." + std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
    }
    return (neg ? "-" : "") + s;
}

/// Full decimal expansion of a dyadic rational (always finite).
template <class Int>
std::string exact_decimal(const BasicDyadic<Int>& v) {
    return decimal(v.to_rational(), static_cast<int>(v.precision()));
}

inline json rational_json(const Rational& q, int digits = 12) {
    return {{"exact", rational_string(q)}, {"decimal", decimal(q, digits)}};
}

// ---------------------------------------------------------------------------

inline json to_json(const KWidthFamily& f) {
    json g = json::array(), h0 = json::array(), h1 = json::array();
    for (int i = 0; i < f.k; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        g.push_back(to_json(f.g[ui]));
        json r0 = json::array(), r1 = json::array();
        for (int j = 0; j < f.k; ++j) {
            r0.push_back(to_json(f.h0[ui][static_cast<std::size_t>(j)]));
            r1.push_back(to_json(f.h1[ui][static_cast<std::size_t>(j)]));
        }
        h0.push_back(r0);
        h1.push_back(r1);
    }
    return {{"m", f.m}, {"k", f.k}, {"G", g}, {"H0", h0}, {"H1", h1}};
}

inline KWidthFamily family_from_json(const json& j) {
    KWidthFamily f;
    try {
        f.m = j.at("m").get<int>();
        f.k = j.at("k").get<int>();
        for (const auto& g : j.at("G")) f.g.push_back(bundle_from_json(g));
        for (const auto& row : j.at("H0")) {
            f.h0.emplace_back();
            for (const auto& h : row) f.h0.back().push_back(bundle_from_json(h));
        }
        for (const auto& row : j.at("H1")) {
            f.h1.emplace_back();
            for (const auto& h : row) f.h1.back().push_back(bundle_from_json(h));
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("family json: ") + e.what());
    }
    f.validate();
    return f;
}

inline json to_json(const SelectorPair& s) { return {{"b", s.b}, {"C", s.c}}; }

inline SelectorPair selector_from_json(const json& j) {
    try {
        return {j.at("b").get<std::vector<int>>(), j.at("C").get<std::vector<std::vector<int>>>()};
    } catch (const json::exception& e) {
        throw UsageError(std::string("selector json: ") + e.what());
    }
}

inline json to_json(const InstantiatedCollection& c) {
    json sets = json::array();
    for (const auto& row : c.sets) {
        json r = json::array();
        for (const auto& s : row) r.push_back(to_json(s));
        sets.push_back(r);
    }
    return {{"m", c.m}, {"sets", sets}, {"provenance", {{"family", c.family_id}, {"selector", to_json(c.selector)}}}};
}

// ---------------------------------------------------------------------------
// Valuations.

/// Comma-joined items, "" for the empty bundle.
inline std::string bundle_key(Bundle b) {
    std::string s;
    for (int j : b.items()) s += (s.empty() ? "" : ",") + std::to_string(j);
    return s;
}

inline Bundle bundle_from_key(const std::string& key) {
    Bundle b;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        try {
            b.insert(std::stoi(part));
        } catch (const std::logic_error&) {
            throw UsageError("json: bad bundle key '" + key + "'");
        }
    }
    return b;
}

inline json to_json(const Valuation& v) {
    const int m = v.item_count();
    if (const auto* s = v.get_if<SingleMinded>())
        return {{"type", "single-minded"}, {"m", m}, {"w", to_json(s->weight())}, {"T", to_json(s->desired())}};
    if (const auto* s = v.get_if<SingleMStar>())
        return {{"type", "single-minded"}, {"m", m}, {"w", to_json(s->weight())}, {"T", to_json(s->desired())}};
    if (const auto* x = v.get_if<Xos>()) {
        json clauses = json::array();
        for (const auto& c : x->clauses()) {
            json row = json::array();
            for (const auto& e : c) row.push_back(to_json(e));
            clauses.push_back(row);
        }
        return {{"type", "xos"}, {"m", m}, {"clauses", clauses}};
    }
    if (const auto* b = v.get_if<BinaryXos>()) {
        json coll = json::array();
        for (const auto& g : b->collection()) coll.push_back(to_json(g));
        return {{"type", "bxos"}, {"m", m}, {"collection", coll}};
    }
    if (const auto* s = v.get_if<SetCoverValuation>()) {
        json coll = json::array();
        for (const auto& g : s->collection()) coll.push_back(to_json(g));
        return {{"type", "set-cover"}, {"m", m}, {"l", s->l()}, {"collection", coll}};
    }
    if (m > kTableMaxItems) throw UsageError("json: cannot tabulate a valuation over more than 16 items");
    json values = json::object();
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) values[bundle_key(Bundle(s))] = to_json(v.value(Bundle(s)));
    return {{"type", "table"}, {"m", m}, {"values", values}};
}

inline Valuation valuation_from_json(const json& j, int m_default = -1) {
    try {
        const std::string type = j.at("type").get<std::string>();
        const int m = j.contains("m") ? j.at("m").get<int>() : m_default;
        if (m < 0) throw UsageError("valuation json: missing m");
        if (type == "single-minded") return SingleMinded(m, value_from_json(j.at("w")), bundle_from_json(j.at("T")));
        if (type == "xos") {
            std::vector<std::vector<Value>> clauses;
            for (const auto& row : j.at("clauses")) {
                clauses.emplace_back();
                for (const auto& e : row) clauses.back().push_back(value_from_json(e));
            }
            return Xos(m, std::move(clauses));
        }
        if (type == "bxos") {
            std::vector<Bundle> coll;
            for (const auto& g : j.at("collection")) coll.push_back(bundle_from_json(g));
            return BinaryXos(m, std::move(coll));
        }
        if (type == "set-cover") {
            std::vector<Bundle> coll;
            for (const auto& g : j.at("collection")) coll.push_back(bundle_from_json(g));
            return build_set_cover_valuation(coll, j.at("l").get<int>(), m);
        }
        if (type == "table") {
            std::map<Bundle, Value> entries;
            for (const auto& [key, val] : j.at("values").items()) entries.emplace(bundle_from_key(key), value_from_json(val));
            const bool validate = !j.contains("validate") || j.at("validate").get<bool>();
            return TableValuation::from_entries(m, entries, validate);
        }
        throw UsageError("valuation json: unknown type '" + type + "'");
    } catch (const json::exception& e) {
        throw UsageError(std::string("valuation json: ") + e.what());
    }
}

inline json to_json(const ValuationProfile& p) {
    json bidders = json::array();
    for (const auto& v : p.valuations()) bidders.push_back(to_json(v));
    return {{"m", p.items()}, {"bidders", bidders}};
}

inline ValuationProfile profile_from_json(const json& j) {
    try {
        const int m = j.at("m").get<int>();
        std::vector<Valuation> vals;
        for (const auto& b : j.at("bidders")) vals.push_back(valuation_from_json(b, m));
        return ValuationProfile(m, std::move(vals));
    } catch (const json::exception& e) {
        throw UsageError(std::string("profile json: ") + e.what());
    }
}

/// {"m": m, "bidders": [[valuation, ...], ...]}: one list per bidder.
inline FiniteDomain domain_from_json(const json& j) {
    try {
        const int m = j.at("m").get<int>();
        FiniteDomain d;
        for (const auto& list : j.at("bidders")) {
            d.per_bidder.emplace_back();
            for (const auto& v : list) d.per_bidder.back().push_back(valuation_from_json(v, m));
        }
        d.validate();
        return d;
    } catch (const json::exception& e) {
        throw UsageError(std::string("domain json: ") + e.what());
    }
}

inline json to_json(const FiniteDomain& d, int m) {
    json bidders = json::array();
    for (const auto& list : d.per_bidder) {
        json row = json::array();
        for (const auto& v : list) row.push_back(to_json(v));
        bidders.push_back(row);
    }
    return {{"m", m}, {"bidders", bidders}};
}

inline json to_json(const Allocation& a) {
    json out = json::array();
    for (const auto& b : a.bundles) out.push_back(to_json(b));
    return out;
}

inline json to_json(const ProtocolOutcome& o, bool with_messages = false) {
    json j = {{"allocation", to_json(o.allocation)}, {"totalBits", o.ledger.total_bits()},
              {"messageCount", o.ledger.size()}};
    if (with_messages) {
        json msgs = json::array();
        for (const auto& m : o.ledger.messages())
            msgs.push_back({{"speaker", m.speaker}, {"label", m.label}, {"bits", m.payload.size()}});
        j["messages"] = msgs;
    }
    return j;
}

inline json to_json(const Menu& menu) {
    json entries = json::array();
    for (const auto& [b, p] : menu.entries) entries.push_back({{"bundle", to_json(b)}, {"price", to_json(p)}});
    return {{"m", menu.m}, {"entries", entries}, {"canonical", menu.canonical}};
}

inline Menu menu_from_json(const json& j) {
    try {
        Menu menu;
        menu.m = j.at("m").get<int>();
        menu.canonical = j.contains("canonical") && j.at("canonical").get<bool>();
        for (const auto& e : j.at("entries")) menu.entries[bundle_from_json(e.at("bundle"))] = value_from_json(e.at("price"));
        return menu;
    } catch (const json::exception& e) {
        throw UsageError(std::string("menu json: ") + e.what());
    }
}

inline TranscriptMap transcript_map_from_json(const json& j) {
    try {
        const auto dims = j.at("inputs");
        TranscriptMap t(dims.at(0).get<std::size_t>(), dims.at(1).get<std::size_t>());
        for (const auto& e : j.at("map")) {
            const auto x = e.at(0).get<std::size_t>(), y = e.at(1).get<std::size_t>();
            if (x >= t.rows || y >= t.cols) throw UsageError("transcript map json: entry " + e.dump() + " outside inputs");
            t.set(x, y, e.at(2).get<std::int64_t>());
        }
        return t;
    } catch (const json::exception& e) {
        throw UsageError(std::string("transcript map json: ") + e.what());
    }
}

inline json to_json(const TranscriptMap& t) {
    json map = json::array();
    for (std::size_t x = 0; x < t.rows; ++x)
        for (std::size_t y = 0; y < t.cols; ++y)
            if (t.at(x, y) != TranscriptMap::kUndefined) map.push_back({x, y, t.at(x, y)});
    return {{"inputs", {t.rows, t.cols}}, {"map", map}};
}

// ---------------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("'" + path + "': " + e.what());
    }
}

}  // namespace calab::io
