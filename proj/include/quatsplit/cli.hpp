#pragma once

// Command-line driver. Every command writes one JSON document carrying its
// own input, so `verify` can re-check any output file on its own.
//
// Exit codes: 0 solved, 2 verified negative certificate, 1 error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "quatsplit/json_io.hpp"

namespace quatsplit::cli {

using json = nlohmann::json;

enum ExitCode { Solved = 0, Error = 1, Negative = 2 };

/// Environment variable holding a wall-clock budget for factoring, in ms.
inline constexpr const char* budget_env = "QUATSPLIT_FACTOR_BUDGET_MS";

namespace detail {

/// JSON from a file, or inline when the argument itself is a JSON object.
inline json load(const std::string& arg) {
    std::string text;
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
        text = arg;
    } else {
        std::ifstream in(arg);
        if (!in) throw InvalidArgument("cannot open " + arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument("malformed JSON in " + (arg.size() > 40 ? arg.substr(0, 40) + "..." : arg) + ": " +
                              e.what());
    }
}

inline json header(const std::string& command) { return {{"schema", json_io::schema}, {"command", command}}; }

inline std::string scalar_text(const json& x, const std::string& d) {
    const Rat a = parse_rat(x.at("a").get<std::string>()), b = parse_rat(x.at("b").get<std::string>());
    if (b == 0) return to_string(a);
    std::string s = a == 0 ? "" : to_string(a);
    if (b > 0 && a != 0) s += "+";
    return s + to_string(b) + "*sqrt(" + d + ")";
}

inline std::string join(const json& arr, const std::string& d = "d") {
    std::string s;
    for (const auto& x : arr) {
        if (!s.empty()) s += ", ";
        s += x.is_object() ? scalar_text(x, d) : x.get<std::string>();
    }
    return s;
}

inline std::string witness_text(const json& w) {
    return "anisotropic at " + w.at("place").get<std::string>() + " (" +
           w.at("reason").at("kind").get<std::string>() + ")";
}

// ---------------------------------------------------------------------------
// commands; each returns the document and its exit code

struct Outcome {
    json doc;
    int code;
};

inline Outcome do_factor(const std::string& n_text) {
    const Int n = parse_int(n_text);
    if (n == 0) throw InvalidArgument("cannot factor 0");
    json doc = header("factor");
    doc["input"] = {{"n", n.get_str()}};
    doc["status"] = "solved";
    doc["result"] = json_io::to_json(factor(n));
    return {doc, Solved};
}

inline json solve_result(const SolveResult& r) {
    if (const auto* v = std::get_if<IsotropicVector>(&r)) return {{"vector", json_io::to_json(v->coords)}};
    return {{"witness", json_io::to_json(std::get<AnisotropyWitness>(r))}};
}

inline Outcome do_quadform(const json& form) {
    const QuadForm q = json_io::form_from(form);
    const auto r = solve(q);
    json doc = header("quadform-solve");
    doc["input"] = {{"form", json_io::to_json(q)}};
    doc["result"] = solve_result(r);
    const bool iso = std::holds_alternative<IsotropicVector>(r);
    doc["status"] = iso ? "solved" : "anisotropic";
    return {doc, iso ? Solved : Negative};
}

inline Outcome do_conic(const std::string& a, const std::string& b, const std::string& c) {
    const std::vector<Rat> coeffs{parse_rat(a), parse_rat(b), parse_rat(c)};
    for (const auto& x : coeffs)
        if (x == 0) throw ZeroCoefficient("conic coefficients must be nonzero");
    const auto r = solve(QuadForm::diagonal(coeffs));
    json doc = header("conic");
    doc["input"] = {{"a", to_string(coeffs[0])}, {"b", to_string(coeffs[1])}, {"c", to_string(coeffs[2])}};
    doc["result"] = solve_result(r);
    const bool iso = std::holds_alternative<IsotropicVector>(r);
    doc["status"] = iso ? "solved" : "no-solution";
    return {doc, iso ? Solved : Negative};
}

inline Outcome do_zerodiv(const json& alg, const std::optional<Int>& d, bool emit, const std::string& command) {
    const SCAlgebra A = json_io::algebra_from(alg, d);
    PipelineOptions opt;
    opt.emit_isomorphism = emit;
    const auto r = zero_divisor(A, opt);
    json doc = header(command);
    doc["input"] = {{"algebra", json_io::to_json(A)}};
    if (const auto* c = std::get_if<NotSplitCertificate>(&r)) {
        doc["status"] = "not-split";
        doc["result"] = {{"certificate", json_io::to_json(*c)}};
        return {doc, Negative};
    }
    doc["status"] = "solved";
    doc["result"] = json_io::to_json(std::get<PipelineResult>(r));
    return {doc, Solved};
}

inline Outcome do_isomorphism(const json& alg, const std::optional<Int>& d, const std::optional<json>& element) {
    if (!element) return do_zerodiv(alg, d, true, "isomorphism");
    const SCAlgebra A = json_io::algebra_from(alg, d);
    if (const auto report = validate(A); !report.ok) throw InvalidArgument("invalid algebra: " + report.defect);
    const AlgElem r = json_io::algelem_from(*element, A.base);
    const PipelineResult res{r, Branch::EarlyNilpotent, explicit_isomorphism(A, r)};
    json doc = header("isomorphism");
    doc["input"] = {{"algebra", json_io::to_json(A)}, {"element", json_io::to_json(r)}};
    doc["status"] = "solved";
    json out = json_io::to_json(res);
    out.erase("branch");
    doc["result"] = out;
    return {doc, Solved};
}

inline Outcome do_conic_ext(const Int& d, const std::string& a, const std::string& b) {
    const QuadField k(d);
    const QFElem alpha = json_io::qfelem_from_text(a, k), beta = json_io::qfelem_from_text(b, k);
    const auto r = solve_conic_quadfield(alpha, beta, k);
    json doc = header("conic-ext");
    doc["input"] = {{"d", d.get_str()}, {"alpha", json_io::to_json(alpha)}, {"beta", json_io::to_json(beta)}};
    if (const auto* n = std::get_if<NoSolution>(&r)) {
        doc["status"] = "no-solution";
        doc["result"] = {{"certificate", json_io::to_json(n->certificate)}};
        return {doc, Negative};
    }
    const auto& s = std::get<ConicSolution>(r);
    doc["status"] = "solved";
    doc["result"] = {{"x", json_io::to_json(s.x)}, {"y", json_io::to_json(s.y)}, {"z", json_io::to_json(s.z)}};
    return {doc, Solved};
}

// ---------------------------------------------------------------------------
// verification of a previously written document

/// Empty when the document checks out, otherwise the first failure.
inline std::string check_solve(const QuadForm& q, const json& result) {
    if (result.contains("vector")) {
        const auto v = json_io::ints_from(result.at("vector"));
        if (v.size() != q.dim()) return "vector has the wrong length";
        if (evaluate(q, v) != 0) return "vector is not a zero of the form";
        if (quatsplit::detail::primitive(v) != v) return "vector is not primitive";
        return {};
    }
    const auto w = json_io::witness_from(result.at("witness"));
    if (!verify_witness(w)) return "witness does not verify";
    const auto diag = diagonalize(q);
    if (diag.degenerate || is_isotropic_local(diag, w.place)) return "the input form is isotropic at the witness place";
    return {};
}

inline std::string check_certificate(const json& result) {
    const auto c = json_io::certificate_from(result.at("certificate"));
    if (c.stage != 2 && c.stage != 4) return "unknown certificate stage";
    return verify_witness(c.witness) ? "" : "witness does not verify";
}

inline std::string check(const json& doc) {
    if (!doc.is_object() || doc.value("schema", "") != json_io::schema) return "not a quatsplit/1 document";
    const std::string cmd = doc.at("command").get<std::string>();
    const json& in = doc.at("input");
    const json& res = doc.at("result");
    const std::string status = doc.at("status").get<std::string>();
    if (cmd == "factor") {
        const Int n = json_io::int_from(in.at("n"));
        Factorization f;
        f.sign = static_cast<int>(json_io::int_from(res.at("sign")).get_si());
        for (const auto& pe : res.at("factors")) {
            const Int p = json_io::int_from(pe.at("prime"));
            if (!is_prime(p)) return p.get_str() + " is not prime";
            f.factors.push_back({p, static_cast<unsigned>(json_io::int_from(pe.at("exponent")).get_ui())});
        }
        return f.value() == n ? "" : "factors do not multiply to n";
    }
    if (cmd == "quadform-solve") return check_solve(json_io::form_from(in.at("form")), res);
    if (cmd == "conic") {
        const std::vector<Rat> coeffs{json_io::rat_from(in.at("a")), json_io::rat_from(in.at("b")),
                                      json_io::rat_from(in.at("c"))};
        return check_solve(QuadForm::diagonal(coeffs), res);
    }
    if (cmd == "zerodiv" || cmd == "isomorphism") {
        const SCAlgebra A = json_io::algebra_from(in.at("algebra"));
        if (!validate(A).ok) return "input algebra is invalid";
        if (status == "not-split") return check_certificate(res);
        const AlgElem z = json_io::algelem_from(res.at("zero_divisor"), A.base);
        if (is_zero(z)) return "zero divisor is zero";
        if (!(determinant(regular_rep(A, z)) == 0)) return "zero divisor is invertible";
        if (in.contains("element") && json_io::algelem_from(in.at("element"), A.base) != z)
            return "zero divisor differs from the given element";
        if (res.contains("isomorphism")) {
            const json& iso = res.at("isomorphism");
            if (!iso.is_array() || iso.size() != 4) return "isomorphism must have 4 images";
            Isomorphism phi;
            for (std::size_t i = 0; i < 4; ++i) {
                phi[i] = json_io::matrix_from(iso[i], A.base);
                if (phi[i].rows() != 2 || phi[i].cols() != 2) return "images must be 2 x 2";
            }
            if (!verify_isomorphism(A, phi)) return "isomorphism is not unital and multiplicative";
        } else if (cmd == "isomorphism") {
            return "isomorphism missing";
        }
        return {};
    }
    if (cmd == "conic-ext") {
        const QuadField k(json_io::int_from(in.at("d")));
        const QFElem alpha = json_io::qfelem_from(in.at("alpha"), k), beta = json_io::qfelem_from(in.at("beta"), k);
        if (status == "no-solution") return check_certificate(res);
        const QFElem x = json_io::qfelem_from(res.at("x"), k), y = json_io::qfelem_from(res.at("y"), k),
                     z = json_io::qfelem_from(res.at("z"), k);
        if (x == 0 && y == 0 && z == 0) return "trivial solution";
        return alpha * x * x + beta * y * y == z * z ? "" : "triple does not satisfy the conic";
    }
    return "unknown command " + cmd;
}

inline Outcome do_verify(const std::string& path) {
    const json doc = load(path);
    std::string failure;
    try {
        failure = check(doc);
    } catch (const std::exception& e) {
        failure = std::string("malformed document: ") + e.what();
    }
    json out = header("verify");
    out["input"] = {{"command", doc.is_object() ? doc.value("command", "") : ""}};
    out["status"] = failure.empty() ? "verified" : "failed";
    out["result"] = {{"verified", failure.empty()}};
    if (!failure.empty()) out["result"]["reason"] = failure;
    return {out, failure.empty() ? Solved : Error};
}

// ---------------------------------------------------------------------------
// plain-text rendering

/// Radicand of the field a document works in, as text.
inline std::string radicand_of(const json& doc) {
    const json& in = doc.at("input");
    if (in.contains("d")) return in.at("d").get<std::string>();
    if (in.contains("algebra") && in.at("algebra").at("base").is_object())
        return in.at("algebra").at("base").at("d").get<std::string>();
    return "d";
}

inline std::string text(const json& doc) {
    std::ostringstream os;
    const std::string d = radicand_of(doc);
    const std::string cmd = doc.at("command").get<std::string>();
    const std::string status = doc.at("status").get<std::string>();
    const json& res = doc.at("result");
    if (cmd == "factor") {
        os << doc.at("input").at("n").get<std::string>() << " =";
        if (res.at("sign") == "-1") os << " -1 *";
        bool first = true;
        for (const auto& pe : res.at("factors")) {
            os << (first ? " " : " * ") << pe.at("prime").get<std::string>();
            if (pe.at("exponent") != "1") os << "^" << pe.at("exponent").get<std::string>();
            first = false;
        }
        if (first) os << " 1";
        os << "\n";
    } else if (cmd == "verify") {
        os << status;
        if (res.contains("reason")) os << ": " << res.at("reason").get<std::string>();
        os << "\n";
    } else if (res.contains("vector")) {
        os << "isotropic vector: (" << join(res.at("vector")) << ")\n";
    } else if (res.contains("witness")) {
        os << status << ": " << witness_text(res.at("witness")) << "\n";
    } else if (res.contains("certificate")) {
        os << status << " (stage " << res.at("certificate").at("stage").get<std::string>()
           << "): " << witness_text(res.at("certificate").at("witness")) << "\n";
    } else if (cmd == "conic-ext") {
        os << "x = " << scalar_text(res.at("x"), d) << "\ny = " << scalar_text(res.at("y"), d)
           << "\nz = " << scalar_text(res.at("z"), d) << "\n";
    } else {
        os << "zero divisor: [" << join(res.at("zero_divisor"), d) << "]\n";
        if (res.contains("branch")) os << "branch: " << res.at("branch").get<std::string>() << "\n";
        if (res.contains("isomorphism")) {
            std::size_t i = 1;
            for (const auto& m : res.at("isomorphism"))
                os << "a" << i++ << " -> [[" << join(m[0], d) << "], [" << join(m[1], d) << "]]\n";
        }
    }
    return os.str();
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zero divisors and explicit isomorphisms for quaternion algebras over quadratic fields"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    std::string output;
    app.add_flag("--json", as_json, "Print the JSON document instead of a summary");
    app.add_option("-o,--output", output, "Also write the JSON document to this file");

    std::string n_text, form, algebra, element, a, b, c, result_path;
    std::optional<std::string> d_text;
    bool emit = false;

    auto* factor_cmd = app.add_subcommand("factor", "Factor an integer");
    factor_cmd->add_option("n", n_text, "Integer to factor")->required();

    auto* qf_cmd = app.add_subcommand("quadform-solve", "Isotropic vector of a rational form, or a local obstruction");
    qf_cmd->add_option("--form", form, "Form JSON file or inline {\"gram\": ...}")->required();

    auto* conic_cmd = app.add_subcommand("conic", "Solve a x^2 + b y^2 + c z^2 = 0 over Q");
    conic_cmd->add_option("-a", a, "Coefficient a")->required();
    conic_cmd->add_option("-b", b, "Coefficient b")->required();
    conic_cmd->add_option("-c", c, "Coefficient c")->required();

    auto* zd_cmd = app.add_subcommand("zerodiv", "Zero divisor of an algebra over Q(sqrt d)");
    zd_cmd->add_option("--algebra", algebra, "Algebra JSON file or inline object")->required();
    zd_cmd->add_option("--d", d_text, "Radicand, when the algebra file has no base");
    zd_cmd->add_flag("--emit-isomorphism", emit, "Also emit the isomorphism with M_2(Q(sqrt d))");

    auto* iso_cmd = app.add_subcommand("isomorphism", "Explicit isomorphism with M_2(Q(sqrt d))");
    iso_cmd->add_option("--algebra", algebra, "Algebra JSON file or inline object")->required();
    iso_cmd->add_option("--d", d_text, "Radicand, when the algebra file has no base");
    iso_cmd->add_option("--element", element, "Known zero divisor as a JSON array of 4 scalars");

    auto* ext_cmd = app.add_subcommand("conic-ext", "Solve alpha x^2 + beta y^2 = z^2 over Q(sqrt d)");
    ext_cmd->add_option("--d", d_text, "Radicand")->required();
    ext_cmd->add_option("-a", a, "alpha, as p/q, a,b or a+b*sqrt(d)")->required();
    ext_cmd->add_option("-b", b, "beta, same format")->required();

    auto* verify_cmd = app.add_subcommand("verify", "Re-check a JSON document written by another command");
    verify_cmd->add_option("result", result_path, "Document to check")->required();

    std::vector<const char*> argv{"quatsplit"};
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Solved : Error;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        std::optional<FactorBudget> budget;
        if (const char* ms = std::getenv(budget_env); ms && *ms) {
            const Int v = parse_int(ms);
            if (v <= 0 || !v.fits_slong_p()) throw InvalidArgument(std::string(budget_env) + " must be a positive integer");
            budget.emplace(std::chrono::milliseconds(v.get_si()));
        }
        std::optional<Int> d;
        if (d_text) d = parse_int(*d_text);

        detail::Outcome o;
        if (command == "factor") o = detail::do_factor(n_text);
        else if (command == "quadform-solve") o = detail::do_quadform(detail::load(form));
        else if (command == "conic") o = detail::do_conic(a, b, c);
        else if (command == "zerodiv") o = detail::do_zerodiv(detail::load(algebra), d, emit, "zerodiv");
        else if (command == "isomorphism")
            o = detail::do_isomorphism(detail::load(algebra), d,
                                       element.empty() ? std::nullopt : std::optional(detail::load(element)));
        else if (command == "conic-ext") o = detail::do_conic_ext(*d, a, b);
        else o = detail::do_verify(result_path);

        const std::string doc = o.doc.dump(2) + "\n";
        if (!output.empty()) {
            std::ofstream f(output);
            if (!f) throw InvalidArgument("cannot write " + output);
            f << doc;
        }
        out << (as_json ? doc : detail::text(o.doc));
        return o.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        if (as_json) {
            json doc = detail::header(command);
            doc["status"] = "error";
            doc["error"] = e.what();
            out << doc.dump(2) << "\n";
        }
        return Error;
    }
}

}  // namespace quatsplit::cli
