// JSON (de)serialization for symbols, kernel combinations, reports, and the
// CSV convergence table. Complex scalars travel as two-element [re, im]
// arrays; NaN/Inf are rejected on parse.
#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockna/kernel.hpp"
#include "fockna/symbol.hpp"
#include "fockna/truncation.hpp"
#include "fockna/types.hpp"

namespace fockna::io {

using nlohmann::json;

inline json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidInput("expected a complex scalar as [re, im]");
    }
    const Complex c(j[0].get<double>(), j[1].get<double>());
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw InvalidInput("complex scalar must be finite");
    }
    return c;
}

inline json to_json(const ComplexVector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(to_json(v(i)));
    return arr;
}

inline ComplexVector vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidInput("expected a non-empty vector");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    }
    return v;
}

/// {"n": cols, "m": rows (optional, default n), "A": m rows of n [re,im],
///  "b": m entries of [re,im]}
inline json symbol_to_json(const AffineSymbol& sym) {
    json j;
    j["n"] = sym.domain_dim();
    j["m"] = sym.codomain_dim();
    json rows = json::array();
    for (Eigen::Index r = 0; r < sym.a.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < sym.a.cols(); ++c) row.push_back(to_json(sym.a(r, c)));
        rows.push_back(row);
    }
    j["A"] = rows;
    j["b"] = to_json(sym.b);
    return j;
}

inline AffineSymbol symbol_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("A") || !j.contains("b")) {
        throw InvalidInput("symbol file must contain n, A and b");
    }
    if (!j["n"].is_number_integer()) throw InvalidInput("n must be an integer");
    const auto n = j["n"].get<Eigen::Index>();
    const auto m = j.contains("m") ? j["m"].get<Eigen::Index>() : n;
    if (n < 1 || m < 1) throw InvalidInput("n and m must be >= 1");
    const json& rows = j["A"];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != m) {
        throw InvalidInput("A must have m rows");
    }
    ComplexMatrix a(m, n);
    for (Eigen::Index r = 0; r < m; ++r) {
        const json& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw InvalidInput("each row of A must have n entries");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            a(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
        }
    }
    ComplexVector b = vector_from_json(j["b"]);
    if (b.size() != m) throw InvalidInput("b must have m entries");
    return AffineSymbol(std::move(a), std::move(b));
}

/// {"dim": n, "terms": [{"coeff": [re,im], "point": [[re,im],...]}]}
inline json combination_to_json(const KernelCombination& f) {
    json j;
    j["dim"] = f.dim();
    json terms = json::array();
    for (const auto& t : f.terms()) {
        terms.push_back(json{{"coeff", to_json(t.coeff)}, {"point", to_json(t.point)}});
    }
    j["terms"] = terms;
    return j;
}

inline KernelCombination combination_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("terms")) {
        throw InvalidInput("combination file must contain dim and terms");
    }
    const auto dim = j["dim"].get<Eigen::Index>();
    std::vector<KernelTerm> terms;
    for (const json& t : j["terms"]) {
        if (!t.is_object() || !t.contains("coeff") || !t.contains("point")) {
            throw InvalidInput("each term must contain coeff and point");
        }
        terms.push_back({complex_from_json(t["coeff"]), vector_from_json(t["point"])});
    }
    return KernelCombination(dim, std::move(terms));
}

inline json report_to_json(const SymbolReport& report) {
    json j;
    j["norm_A"] = report.norm_a;
    j["bounded"] = report.bounded;
    j["criteria"] = {{"primal", report.criteria.primal},
                     {"dual", report.criteria.dual},
                     {"carswell", report.criteria.carswell}};
    j["compact"] = report.compact;
    if (report.bounded) {
        j["v"] = to_json(*report.v);
        j["u"] = to_json(*report.u);
        j["w0"] = to_json(*report.w0);
        j["log_norm"] = *report.log_norm;
        j["norm"] = report.norm();
        j["extremal_kernel_witness"] = to_json(*report.extremal_kernel_witness);
    }
    return j;
}

inline json convergence_to_json(const std::vector<ConvergenceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json row;
        row["d"] = r.degree;
        row["truncated_norm"] = r.truncated_norm;
        if (r.exact_norm) row["exact_norm"] = *r.exact_norm;
        if (r.relative_gap) row["relative_gap"] = *r.relative_gap;
        arr.push_back(row);
    }
    return arr;
}

inline std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream out;
    out << "d,truncated_norm,exact_norm,relative_gap\n";
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.degree << ',' << r.truncated_norm << ',';
        if (r.exact_norm) out << *r.exact_norm;
        out << ',';
        if (r.relative_gap) out << *r.relative_gap;
        out << '\n';
    }
    return out.str();
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInput("JSON parse error in " + path + ": " + e.what());
    }
    return j;
}

inline void save_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write file: " + path);
    out << contents;
}

}  // namespace fockna::io
