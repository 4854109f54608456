#pragma once

// JSON encoding of inputs and results. Every number travels as a decimal
// string ("p/q" for non-integral rationals) so no consumer loses precision.

#include <json.hpp>
#include <regex>
#include <string>
#include <vector>

#include "quatsplit/pipeline.hpp"

namespace quatsplit::json_io {

using json = nlohmann::json;

inline constexpr const char* schema = "quatsplit/1";

inline Rat rat_from(const json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(Int(std::to_string(j.get<long long>())));
    throw InvalidArgument("expected a rational as a string, got " + j.dump());
}

inline Int int_from(const json& j) {
    if (j.is_string()) return parse_int(j.get<std::string>());
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    throw InvalidArgument("expected an integer as a string, got " + j.dump());
}

inline json to_json(const Int& n) { return n.get_str(); }
inline json to_json(const Rat& q) { return to_string(q); }

inline json to_json(const QFElem& x) { return {{"a", to_string(x.a())}, {"b", to_string(x.b())}}; }

/// A scalar is a rational string or an {"a", "b"} pair meaning a + b sqrt d.
inline QFElem qfelem_from(const json& j, const std::optional<QuadField>& k) {
    if (!j.is_object()) return QFElem(rat_from(j));
    if (!j.contains("a")) throw InvalidArgument("scalar object needs an \"a\" entry");
    const Rat a = rat_from(j.at("a"));
    const Rat b = j.contains("b") ? rat_from(j.at("b")) : Rat(0);
    if (b == 0) return QFElem(a);
    if (!k) throw InvalidArgument("irrational scalar in an algebra over Q");
    return QFElem(a, b, *k);
}

/// Text form of a scalar: "p/q", "a+b*sqrt(d)", "b*sqrt(d)", or "a,b".
inline QFElem qfelem_from_text(const std::string& s, const std::optional<QuadField>& k) {
    static const std::regex printed(R"(^\s*([+-]?[0-9]+(?:/[0-9]+)?)?\s*(?:([+-]?)\s*([0-9]+(?:/[0-9]+)?)\*sqrt\((-?[0-9]+)\))?\s*$)");
    const auto comma = s.find(',');
    if (comma != std::string::npos) {
        const Rat a = parse_rat(s.substr(0, comma)), b = parse_rat(s.substr(comma + 1));
        if (b == 0) return QFElem(a);
        if (!k) throw InvalidArgument("irrational scalar needs a field (--d)");
        return QFElem(a, b, *k);
    }
    std::smatch m;
    if (!std::regex_match(s, m, printed) || (!m[1].matched && !m[3].matched))
        throw InvalidArgument("cannot parse scalar \"" + s + "\"");
    const Rat a = m[1].matched ? parse_rat(m[1].str()) : Rat(0);
    if (!m[3].matched) return QFElem(a);
    if (!k) throw InvalidArgument("irrational scalar needs a field (--d)");
    if (parse_int(m[4].str()) != k->radicand())
        throw InvalidArgument("scalar \"" + s + "\" is not in Q(sqrt " + k->radicand().get_str() + ")");
    Rat b = parse_rat(m[3].str());
    if (m[2].str() == "-") b = -b;
    return QFElem(a, b, *k);
}

inline json to_json(const AlgElem& x) {
    json out = json::array();
    for (const auto& c : x) out.push_back(to_json(c));
    return out;
}

inline AlgElem algelem_from(const json& j, const std::optional<QuadField>& k) {
    if (!j.is_array() || j.size() != 4) throw InvalidArgument("algebra element must be an array of 4 scalars");
    AlgElem x;
    for (std::size_t i = 0; i < 4; ++i) x[i] = qfelem_from(j[i], k);
    return x;
}

inline json to_json(const Matrix<QFElem>& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

inline Matrix<QFElem> matrix_from(const json& j, const std::optional<QuadField>& k) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw InvalidArgument("matrix must be an array of rows");
    Matrix<QFElem> m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != m.cols()) throw InvalidArgument("matrix rows differ in length");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = qfelem_from(j[r][c], k);
    }
    return m;
}

// ---------------------------------------------------------------------------
// fields and algebras

inline json field_json(const std::optional<QuadField>& k) {
    if (!k) return "Q";
    return {{"d", k->radicand().get_str()}};
}

inline std::optional<QuadField> field_from(const json& j) {
    if (j.is_string() && j.get<std::string>() == "Q") return std::nullopt;
    if (j.is_object() && j.contains("d")) return QuadField(int_from(j.at("d")));
    throw InvalidArgument("base must be \"Q\" or {\"d\": ...}");
}

inline json to_json(const SCAlgebra& A) {
    json gamma = json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < 4; ++j) {
            json cell = json::array();
            for (std::size_t l = 0; l < 4; ++l) cell.push_back(to_json(A.gamma[i][j][l]));
            row.push_back(cell);
        }
        gamma.push_back(row);
    }
    return {{"base", field_json(A.base)}, {"gamma", gamma}, {"one", to_json(A.one)}};
}

/// Structure constants, or the shorthand {"base", "alpha", "beta"} for the
/// quaternion algebra (alpha, beta). `d` supplies the base when the document
/// has none.
inline SCAlgebra algebra_from(const json& j, const std::optional<Int>& d = std::nullopt) {
    if (!j.is_object()) throw InvalidArgument("algebra must be a JSON object");
    std::optional<QuadField> k;
    if (j.contains("base")) {
        k = field_from(j.at("base"));
        const Int have = k ? k->radicand() : Int(1);
        if (d && *d != have) throw InvalidArgument("--d disagrees with the algebra's base field");
    } else if (d) {
        k = QuadField(*d);
    }
    if (j.contains("alpha") || j.contains("beta")) {
        if (j.contains("gamma")) throw InvalidArgument("give either gamma or alpha/beta, not both");
        return structure_constants(QuatAlgebra(k, qfelem_from(j.at("alpha"), k), qfelem_from(j.at("beta"), k)));
    }
    if (!j.contains("gamma") || !j.contains("one")) throw InvalidArgument("algebra needs \"gamma\" and \"one\"");
    const json& g = j.at("gamma");
    if (!g.is_array() || g.size() != 4) throw InvalidArgument("gamma must be 4 x 4 x 4");
    SCAlgebra A{k, {}, algelem_from(j.at("one"), k)};
    for (std::size_t i = 0; i < 4; ++i) {
        if (!g[i].is_array() || g[i].size() != 4) throw InvalidArgument("gamma must be 4 x 4 x 4");
        for (std::size_t l = 0; l < 4; ++l) A.gamma[i][l] = algelem_from(g[i][l], k);
    }
    return A;
}

// ---------------------------------------------------------------------------
// forms and certificates

inline json to_json(const QuadForm& q) {
    json gram = json::array();
    for (std::size_t i = 0; i < q.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < q.dim(); ++j) row.push_back(to_json(q.gram()(i, j)));
        gram.push_back(row);
    }
    return {{"gram", gram}};
}

inline QuadForm form_from(const json& j) {
    if (!j.is_object() || !j.contains("gram")) throw InvalidArgument("form needs a \"gram\" entry");
    const json& g = j.at("gram");
    if (!g.is_array() || g.empty()) throw InvalidArgument("gram must be a nonempty square array");
    Matrix<Rat> m(g.size(), g.size());
    for (std::size_t r = 0; r < g.size(); ++r) {
        if (!g[r].is_array() || g[r].size() != g.size()) throw InvalidArgument("gram must be square");
        for (std::size_t c = 0; c < g.size(); ++c) m(r, c) = rat_from(g[r][c]);
    }
    return QuadForm(std::move(m));
}

inline json to_json(const std::vector<Int>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

inline std::vector<Int> ints_from(const json& j) {
    if (!j.is_array()) throw InvalidArgument("expected an array of integers");
    std::vector<Int> v;
    for (const auto& x : j) v.push_back(int_from(x));
    return v;
}

inline json to_json(const AnisotropyWitness& w) {
    json reason = {{"kind", w.kind}, {"form", to_json(w.form)}};
    if (w.value) reason["value"] = to_json(*w.value);
    return {{"place", w.place.to_string()}, {"reason", reason}};
}

inline AnisotropyWitness witness_from(const json& j) {
    if (!j.is_object() || !j.contains("place") || !j.contains("reason"))
        throw InvalidArgument("witness needs \"place\" and \"reason\"");
    const json& r = j.at("reason");
    AnisotropyWitness w{Place::parse(j.at("place").get<std::string>()), r.at("kind").get<std::string>(),
                        ints_from(r.at("form")), std::nullopt};
    if (r.contains("value")) w.value = int_from(r.at("value"));
    return w;
}

inline json to_json(const NotSplitCertificate& c) {
    return {{"stage", std::to_string(c.stage)}, {"witness", to_json(c.witness)}};
}

inline NotSplitCertificate certificate_from(const json& j) {
    return {static_cast<int>(int_from(j.at("stage")).get_si()), witness_from(j.at("witness"))};
}

inline json to_json(const PipelineResult& r) {
    json out = {{"zero_divisor", to_json(r.zero_divisor)}, {"branch", to_string(r.branch)}};
    if (r.isomorphism) {
        json iso = json::array();
        for (const auto& m : *r.isomorphism) iso.push_back(to_json(m));
        out["isomorphism"] = iso;
    }
    return out;
}

inline json to_json(const Factorization& f) {
    json factors = json::array();
    for (const auto& pe : f.factors)
        factors.push_back({{"prime", pe.prime.get_str()}, {"exponent", std::to_string(pe.exponent)}});
    return {{"sign", std::to_string(f.sign)}, {"factors", factors}, {"proven", f.proven}};
}

}  // namespace quatsplit::json_io
