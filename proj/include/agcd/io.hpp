#pragma once
// Text formats. Polynomials travel as JSON objects {rows, cols, degree,
// coeffs} with coeffs a degree-ascending list of row-major 2-D arrays;
// systems wrap two of those as {p, q}. Output numbers are printed with 17
// significant digits. Parsing reports the offending field by name.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "agcd/control.hpp"
#include "agcd/errors.hpp"
#include "agcd/matpoly.hpp"
#include "agcd/odegcd.hpp"
#include "agcd/subspace.hpp"

namespace agcd {

inline std::string fmt_g17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Shortest decimal that parses back to exactly x; used for CSV fields.
inline std::string fmt_shortest(double x) {
    if (!std::isfinite(x)) return fmt_g17(x);
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

namespace detail {

// Minimal JSON emitter; keeps full double precision and insertion order.
struct JsonWriter {
    std::ostringstream out;
    std::vector<bool> first_in_scope;

    void comma() {
        if (!first_in_scope.empty()) {
            if (!first_in_scope.back()) out << ",";
            first_in_scope.back() = false;
        }
    }
    void open(char c) {
        comma();
        out << c;
        first_in_scope.push_back(true);
    }
    void close(char c) {
        out << c;
        first_in_scope.pop_back();
    }
    void key(const std::string& k) {
        comma();
        out << '"' << k << "\":";
        if (!first_in_scope.empty()) first_in_scope.back() = true;
    }
    void value_raw(const std::string& v) {
        comma();
        out << v;
    }
    void number(double x) { value_raw(std::isfinite(x) ? fmt_g17(x) : "null"); }
    void integer(long long x) { value_raw(std::to_string(x)); }
    void boolean(bool b) { value_raw(b ? "true" : "false"); }
    void string(const std::string& s) {
        std::string esc;
        for (char ch : s) {
            if (ch == '"' || ch == '\\') esc += '\\';
            if (ch == '\n') {
                esc += "\\n";
                continue;
            }
            esc += ch;
        }
        value_raw('"' + esc + '"');
    }
};

inline void write_matpoly(JsonWriter& w, const MatPoly& p) {
    w.open('{');
    w.key("rows");
    w.integer(p.rows());
    w.key("cols");
    w.integer(p.cols());
    w.key("degree");
    w.integer(p.degree());
    w.key("coeffs");
    w.open('[');
    for (int j = 0; j <= p.degree(); ++j) {
        w.open('[');
        for (int r = 0; r < p.rows(); ++r) {
            w.open('[');
            for (int c = 0; c < p.cols(); ++c) w.number(p.coeff(j)(r, c));
            w.close(']');
        }
        w.close(']');
    }
    w.close(']');
    w.close('}');
}

}  // namespace detail

inline std::string to_json(const MatPoly& p) {
    detail::JsonWriter w;
    detail::write_matpoly(w, p);
    return w.out.str();
}

inline std::string to_json(const IoSystem& sys) {
    detail::JsonWriter w;
    w.open('{');
    w.key("p");
    detail::write_matpoly(w, sys.p_poly);
    w.key("q");
    detail::write_matpoly(w, sys.q_poly);
    w.close('}');
    return w.out.str();
}

// Parsing. All errors are ParameterError with the field path in the message.

inline MatPoly matpoly_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ParameterError(where + ": expected an object");
    for (const char* field : {"rows", "cols", "degree", "coeffs"})
        if (!j.contains(field)) throw ParameterError(where + "." + field + ": missing");
    for (const char* field : {"rows", "cols", "degree"})
        if (!j[field].is_number_integer())
            throw ParameterError(where + "." + field + ": expected an integer");
    const int rows = j["rows"].get<int>();
    const int cols = j["cols"].get<int>();
    const int degree = j["degree"].get<int>();
    if (rows < 1) throw ParameterError(where + ".rows: must be positive");
    if (cols < 1) throw ParameterError(where + ".cols: must be positive");
    if (degree < 0) throw ParameterError(where + ".degree: must be nonnegative");
    const nlohmann::json& cf = j["coeffs"];
    if (!cf.is_array() || static_cast<int>(cf.size()) != degree + 1)
        throw ParameterError(where + ".coeffs: expected " + std::to_string(degree + 1) +
                             " coefficient arrays");
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(cf.size());
    for (int t = 0; t < static_cast<int>(cf.size()); ++t) {
        const std::string at = where + ".coeffs[" + std::to_string(t) + "]";
        const nlohmann::json& mat = cf[t];
        if (!mat.is_array() || static_cast<int>(mat.size()) != rows)
            throw ParameterError(at + ": expected " + std::to_string(rows) + " rows");
        Eigen::MatrixXd block(rows, cols);
        for (int r = 0; r < rows; ++r) {
            const nlohmann::json& row = mat[r];
            if (!row.is_array() || static_cast<int>(row.size()) != cols)
                throw ParameterError(at + "[" + std::to_string(r) + "]: expected " +
                                     std::to_string(cols) + " entries");
            for (int c = 0; c < cols; ++c) {
                const nlohmann::json& v = row[c];
                if (!v.is_number())
                    throw ParameterError(at + "[" + std::to_string(r) + "][" +
                                         std::to_string(c) + "]: expected a number");
                block(r, c) = v.get<double>();
            }
        }
        blocks.push_back(std::move(block));
    }
    return MatPoly(std::move(blocks));
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& where) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParameterError(where + ": malformed JSON");
    return j;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline MatPoly read_matpoly_file(const std::string& path) {
    return matpoly_from_json(parse_json_text(read_text_file(path), path), path);
}

inline IoSystem system_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ParameterError(where + ": expected an object");
    if (!j.contains("p")) throw ParameterError(where + ".p: missing");
    if (!j.contains("q")) throw ParameterError(where + ".q: missing");
    return IoSystem(matpoly_from_json(j["p"], where + ".p"),
                    matpoly_from_json(j["q"], where + ".q"));
}

inline IoSystem read_system_file(const std::string& path) {
    return system_from_json(parse_json_text(read_text_file(path), path), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError(path + ": cannot open for writing");
    out << text;
}

// Result serialization shared by the CLI front ends.

inline void write_triple(detail::JsonWriter& w, const FactorizationTriple& t) {
    w.open('{');
    w.key("degree");
    w.integer(t.d);
    w.key("factor");
    detail::write_matpoly(w, t.c);
    w.key("a_cofactor");
    detail::write_matpoly(w, t.abar);
    w.key("b_cofactor");
    detail::write_matpoly(w, t.bbar);
    w.close('}');
}

inline std::string to_json(const GcdResult& r) {
    detail::JsonWriter w;
    w.open('{');
    w.key("method");
    w.string("ode");
    w.key("converged");
    w.boolean(r.converged);
    w.key("epsilon");
    w.number(r.epsilon);
    w.key("matrix_distance");
    w.number(r.matrix_distance);
    w.key("coeff_distance");
    w.number(r.coeff_distance);
    w.key("sigma_final");
    w.number(r.sigma_final);
    w.key("sigma_max");
    w.number(r.sigma_max);
    w.key("a_hat");
    detail::write_matpoly(w, r.a_hat);
    w.key("b_hat");
    detail::write_matpoly(w, r.b_hat);
    w.key("extraction_ok");
    w.boolean(r.extraction_ok);
    if (!r.extraction_warning.empty()) {
        w.key("extraction_warning");
        w.string(r.extraction_warning);
    }
    if (r.extraction_ok) {
        w.key("factorization");
        write_triple(w, r.triple);
    }
    w.close('}');
    return w.out.str();
}

inline std::string subspace_result_json(const FactorizationTriple& triple,
                                        const SubspaceDiagnostics& diag) {
    detail::JsonWriter w;
    w.open('{');
    w.key("method");
    w.string("subspace");
    w.key("coeff_distance");
    w.number(diag.cofactor_distance);
    w.key("residual");
    w.number(diag.residual);
    w.key("nullspace_gap");
    w.number(diag.nullspace_gap);
    w.key("k_matrix_singulars");
    w.open('[');
    for (Eigen::Index i = 0; i < diag.k_matrix_singulars.size(); ++i)
        w.number(diag.k_matrix_singulars(i));
    w.close(']');
    w.key("factorization");
    write_triple(w, triple);
    w.close('}');
    return w.out.str();
}

inline std::string uncontrollability_result_json(const UncontrollabilityResult& r) {
    detail::JsonWriter w;
    w.open('{');
    w.key("distance");
    w.number(r.distance);
    w.key("monic_witness_distance");
    w.number(r.monic_distance);
    w.key("converged");
    w.boolean(r.converged);
    w.key("witness");
    w.open('{');
    w.key("p");
    detail::write_matpoly(w, r.witness.p_poly);
    w.key("q");
    detail::write_matpoly(w, r.witness.q_poly);
    w.close('}');
    w.key("sigma_final");
    w.number(r.gcd.sigma_final);
    w.key("sigma_max");
    w.number(r.gcd.sigma_max);
    w.close('}');
    return w.out.str();
}

inline const char* phase_name(OdePhase p) {
    switch (p) {
        case OdePhase::Init: return "init";
        case OdePhase::Inner: return "inner";
        case OdePhase::Free: return "free";
    }
    return "inner";
}

inline std::string trace_csv(const OdeTrace& trace) {
    std::ostringstream out;
    out << "phase,eps,sigma_k,norm_e,h,accepted\n";
    for (const OdeTraceRow& row : trace.rows)
        out << phase_name(row.phase) << ',' << fmt_shortest(row.eps) << ','
            << fmt_shortest(row.sigma_k) << ',' << fmt_shortest(row.norm_e) << ','
            << fmt_shortest(row.h) << ',' << (row.accepted ? 1 : 0) << '\n';
    return out.str();
}

}  // namespace agcd
