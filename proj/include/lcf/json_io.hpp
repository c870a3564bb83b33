#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "charmode.hpp"
#include "coefficient.hpp"
#include "embedding.hpp"
#include "errors.hpp"
#include "exponent.hpp"
#include "padic.hpp"
#include "series.hpp"
#include "ultraspace.hpp"
#include "urysohn.hpp"

namespace lcf::io {

using nlohmann::json;

// Exponents serialize as strings "a/b" or "inf"; coefficients as tagged
// objects {"pf": k} | {"rat": "a/b"} | {"pw": [d0,...]} | {"gen": alpha}.
// All emitters are deterministic: nlohmann::json objects keep keys sorted,
// so identical values dump to identical bytes.

namespace jdetail {

inline const json& expect(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + "/" + key, "missing field");
    return *it;
}

inline std::string expect_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

inline std::uint64_t expect_uint(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw SchemaError(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

} // namespace jdetail

inline json exponent_to_json(const Exponent& e) { return e.str(); }

inline Exponent exponent_from_json(const json& j, const std::string& path) {
    try {
        return Exponent::parse(jdetail::expect_string(j, path));
    } catch (const DomainError& err) {
        throw SchemaError(path, err.what());
    }
}

inline Rational rational_from_json(const json& j, const std::string& path) {
    const Exponent e = exponent_from_json(j, path);
    if (e.is_inf()) throw SchemaError(path, "expected a finite exponent");
    return e.finite();
}

inline json coefficient_to_json(const Coefficient& c) {
    switch (c.kind()) {
    case Coefficient::Kind::PrimeField: return json{{"pf", c.pf_residue()}};
    case Coefficient::Kind::Rational: return json{{"rat", c.rat().str()}};
    case Coefficient::Kind::PadicWord: return json{{"pw", c.pw_digits()}};
    case Coefficient::Kind::Generator: return json{{"gen", c.gen_index()}};
    }
    throw DomainError("unreachable coefficient kind");
}

/// `p` supplies the domain for the context-dependent tags pf and pw.
inline Coefficient coefficient_from_json(const json& j, std::uint32_t p,
                                         const std::string& path) {
    if (!j.is_object() || j.size() != 1)
        throw SchemaError(path, "expected exactly one of pf | rat | pw | gen");
    if (j.contains("pf")) {
        if (p == 0) throw SchemaError(path + "/pf", "residue coefficient needs p > 0");
        return Coefficient::prime_field(p, jdetail::expect_uint(j["pf"], path + "/pf"));
    }
    if (j.contains("rat"))
        return Coefficient::rational(rational_from_json(j["rat"], path + "/rat"));
    if (j.contains("gen"))
        return Coefficient::generator(
            static_cast<std::uint32_t>(jdetail::expect_uint(j["gen"], path + "/gen")));
    if (j.contains("pw")) {
        if (p == 0) throw SchemaError(path + "/pw", "p-adic word needs p > 0");
        if (!j["pw"].is_array()) throw SchemaError(path + "/pw", "expected an array of digits");
        std::vector<std::uint32_t> ds;
        for (std::size_t i = 0; i < j["pw"].size(); ++i)
            ds.push_back(static_cast<std::uint32_t>(
                jdetail::expect_uint(j["pw"][i], path + "/pw/" + std::to_string(i))));
        try {
            return Coefficient::padic_word(p, std::move(ds));
        } catch (const DomainError& err) {
            throw SchemaError(path + "/pw", err.what());
        }
    }
    throw SchemaError(path, "unknown coefficient tag");
}

inline json charmode_to_json(const CharMode& m) {
    return json{{"mode", m.is_mixed() ? "mixed" : "equal"}, {"p", m.residue_char()}};
}

inline CharMode charmode_from_json(const json& j, const std::string& path) {
    const std::string mode = jdetail::expect_string(jdetail::expect(j, "mode", path), path + "/mode");
    const std::uint32_t p =
        static_cast<std::uint32_t>(jdetail::expect_uint(jdetail::expect(j, "p", path), path + "/p"));
    try {
        if (mode == "equal") return CharMode::equal(p);
        if (mode == "mixed") return CharMode::mixed(p);
    } catch (const DomainError& err) {
        throw SchemaError(path + "/p", err.what());
    }
    throw SchemaError(path + "/mode", "expected \"equal\" or \"mixed\"");
}

inline json series_to_json(const Series& x) {
    json terms = json::array();
    for (const auto& t : x.terms())
        terms.push_back(json{{"g", t.exponent.str()}, {"c", coefficient_to_json(t.coef)}});
    json out = charmode_to_json(x.mode());
    out["trunc"] = exponent_to_json(x.trunc());
    out["terms"] = std::move(terms);
    return out;
}

/// Parses a series; `allow_raw` admits pw/rat coefficients in mixed mode (the
/// pre-normalization form), returning the terms without the normalized-form
/// checks. Regular parsing validates against the Series invariants.
inline Series series_from_json(const json& j, const std::string& path = "") {
    const CharMode mode = charmode_from_json(j, path);
    const Exponent trunc = exponent_from_json(jdetail::expect(j, "trunc", path), path + "/trunc");
    const json& terms = jdetail::expect(j, "terms", path);
    if (!terms.is_array()) throw SchemaError(path + "/terms", "expected an array");
    std::vector<Term> ts;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tpath = path + "/terms/" + std::to_string(i);
        const Rational g =
            rational_from_json(jdetail::expect(terms[i], "g", tpath), tpath + "/g");
        const Coefficient c = coefficient_from_json(jdetail::expect(terms[i], "c", tpath),
                                                    mode.residue_char(), tpath + "/c");
        ts.push_back(Term{g, c});
    }
    try {
        return Series(mode, std::move(ts), trunc);
    } catch (const Error& err) {
        throw SchemaError(path + "/terms", err.what());
    }
}

struct RawSeries {
    std::uint32_t p = 2;
    std::vector<Term> terms;
    Exponent trunc;
};

/// Pre-normalization input: mixed mode with pw / rat / pf / gen coefficients.
inline RawSeries raw_series_from_json(const json& j, const std::string& path = "") {
    const CharMode mode = charmode_from_json(j, path);
    if (!mode.is_mixed()) throw SchemaError(path + "/mode", "raw input is mixed-characteristic");
    RawSeries out;
    out.p = mode.residue_char();
    out.trunc = exponent_from_json(jdetail::expect(j, "trunc", path), path + "/trunc");
    const json& terms = jdetail::expect(j, "terms", path);
    if (!terms.is_array()) throw SchemaError(path + "/terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tpath = path + "/terms/" + std::to_string(i);
        const Rational g =
            rational_from_json(jdetail::expect(terms[i], "g", tpath), tpath + "/g");
        const Coefficient c = coefficient_from_json(jdetail::expect(terms[i], "c", tpath),
                                                    out.p, tpath + "/c");
        out.terms.push_back(Term{g, c});
    }
    return out;
}

inline json padic_to_json(const PadicInt& a) {
    return json{{"p", a.p()}, {"N", a.precision()}, {"v", a.value()}};
}

inline PadicInt padic_from_json(const json& j, const std::string& path = "") {
    const auto p = static_cast<std::uint32_t>(
        jdetail::expect_uint(jdetail::expect(j, "p", path), path + "/p"));
    const auto n = static_cast<std::uint32_t>(
        jdetail::expect_uint(jdetail::expect(j, "N", path), path + "/N"));
    const auto v = jdetail::expect_uint(jdetail::expect(j, "v", path), path + "/v");
    try {
        return PadicInt(p, n, v);
    } catch (const Error& err) {
        throw SchemaError(path, err.what());
    }
}

inline json space_to_json(const UltraSpace& s, std::optional<double> eta = std::nullopt) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < s.size(); ++j) row.push_back(s.g(i, j).str());
        rows.push_back(std::move(row));
    }
    json out{{"points", s.labels()}, {"exponents", std::move(rows)}};
    if (eta) out["eta"] = *eta;
    return out;
}

inline UltraSpace space_from_json(const json& j, const std::string& path = "") {
    const json& pts = jdetail::expect(j, "points", path);
    if (!pts.is_array()) throw SchemaError(path + "/points", "expected an array");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < pts.size(); ++i)
        labels.push_back(jdetail::expect_string(pts[i], path + "/points/" + std::to_string(i)));
    const json& rows = jdetail::expect(j, "exponents", path);
    if (!rows.is_array()) throw SchemaError(path + "/exponents", "expected an array");
    std::vector<std::vector<Exponent>> m;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string rpath = path + "/exponents/" + std::to_string(i);
        if (!rows[i].is_array()) throw SchemaError(rpath, "expected an array");
        std::vector<Exponent> row;
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            row.push_back(exponent_from_json(rows[i][k], rpath + "/" + std::to_string(k)));
        m.push_back(std::move(row));
    }
    try {
        return UltraSpace(std::move(labels), std::move(m));
    } catch (const MalformedMatrix& err) {
        throw SchemaError(path, err.what());
    }
}

inline json urysohn_to_json(const UrysohnPoint& f) {
    json support = json::array();
    for (const auto& [g, m] : f.support())
        support.push_back(json{{"g", g.str()}, {"m", m}});
    return json{{"support", std::move(support)}};
}

inline UrysohnPoint urysohn_from_json(const json& j, const std::string& path = "") {
    const json& sup = jdetail::expect(j, "support", path);
    if (!sup.is_array()) throw SchemaError(path + "/support", "expected an array");
    std::vector<std::pair<Rational, std::uint64_t>> support;
    for (std::size_t i = 0; i < sup.size(); ++i) {
        const std::string spath = path + "/support/" + std::to_string(i);
        support.emplace_back(
            rational_from_json(jdetail::expect(sup[i], "g", spath), spath + "/g"),
            jdetail::expect_uint(jdetail::expect(sup[i], "m", spath), spath + "/m"));
    }
    try {
        return UrysohnPoint(std::move(support));
    } catch (const DomainError& err) {
        throw SchemaError(path + "/support", err.what());
    }
}

inline json exponent_set_to_json(const ExponentSet& s) {
    json items = json::array();
    for (const auto& g : s.items()) items.push_back(g.str());
    return json{{"exponents", std::move(items)}};
}

inline ExponentSet exponent_set_from_json(const json& j, const std::string& path = "") {
    const json& items = jdetail::expect(j, "exponents", path);
    if (!items.is_array()) throw SchemaError(path + "/exponents", "expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out.push_back(rational_from_json(items[i], path + "/exponents/" + std::to_string(i)));
    try {
        return ExponentSet(std::move(out));
    } catch (const DomainError& err) {
        throw SchemaError(path + "/exponents", err.what());
    }
}

inline json embed_state_to_json(const EmbedState& st) {
    json images = json::object();
    for (const auto& [label, series] : st.images()) images[label] = series_to_json(series);
    json out = charmode_to_json(st.mode());
    out["sentinel"] = json{{"label", st.sentinel_label()},
                           {"anchor", st.anchor_label()},
                           {"g0", st.sentinel_exponent().str()}};
    out["order"] = st.order();
    out["images"] = std::move(images);
    out["space"] = space_to_json(st.space());
    out["generators_used"] = st.generators_used();
    return out;
}

inline EmbedState embed_state_from_json(const json& j, const std::string& path = "") {
    const CharMode mode = charmode_from_json(j, path);
    const json& sent = jdetail::expect(j, "sentinel", path);
    const std::string sentinel =
        jdetail::expect_string(jdetail::expect(sent, "label", path + "/sentinel"),
                               path + "/sentinel/label");
    const std::string anchor =
        jdetail::expect_string(jdetail::expect(sent, "anchor", path + "/sentinel"),
                               path + "/sentinel/anchor");
    const Rational g0 = rational_from_json(jdetail::expect(sent, "g0", path + "/sentinel"),
                                           path + "/sentinel/g0");
    const json& order_j = jdetail::expect(j, "order", path);
    if (!order_j.is_array()) throw SchemaError(path + "/order", "expected an array");
    std::vector<std::string> order;
    for (std::size_t i = 0; i < order_j.size(); ++i)
        order.push_back(jdetail::expect_string(order_j[i], path + "/order/" + std::to_string(i)));

    UltraSpace space = space_from_json(jdetail::expect(j, "space", path), path + "/space");
    const json& images_j = jdetail::expect(j, "images", path);
    if (!images_j.is_object()) throw SchemaError(path + "/images", "expected an object");
    std::map<std::string, Series> images;
    for (const auto& [label, sj] : images_j.items())
        images.emplace(label, series_from_json(sj, path + "/images/" + label));

    std::uint32_t next_gen = static_cast<std::uint32_t>(jdetail::expect_uint(
                                 jdetail::expect(j, "generators_used", path),
                                 path + "/generators_used")) +
                             1;
    return EmbedState(mode, std::move(space), sentinel, anchor, g0, std::move(order),
                      std::move(images), next_gen);
}

inline json parse_text(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError(origin, "not valid JSON");
    return j;
}

} // namespace lcf::io
