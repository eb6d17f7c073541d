// fockna: classify affine symbols phi(z) = Az + b on the Fock space, compute
// exact operator norms and extremal functions, and cross-check them against
// the Galerkin truncation.
//
// Exit codes: 0 success / bounded / extremal, 2 usage or parse error,
// 3 unbounded symbol, 4 not extremal, 5 verification invariant violated.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fockna/fockna.hpp"

namespace {

using namespace fockna;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnbounded = 3;
constexpr int kExitNotExtremal = 4;
constexpr int kExitInvariant = 5;

struct GlobalOptions {
    Tolerances tol;
    bool json_output = false;
};

std::string fmt_complex(Complex c) {
    std::ostringstream out;
    out.precision(12);
    if (std::abs(c.imag()) < 1e-14) {
        out << c.real();
    } else {
        out << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << "i";
    }
    return out.str();
}

std::string fmt_vector(const ComplexVector& v) {
    std::ostringstream out;
    out << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << fmt_complex(v(i));
    }
    out << "]";
    return out.str();
}

json run_report_skeleton(const std::string& command, const GlobalOptions& opts) {
    json j;
    j["command"] = command;
    j["tolerances"] = {{"rank_cutoff_rel", opts.tol.rank_cutoff_rel},
                       {"residual_rel", opts.tol.residual_rel},
                       {"compare_rel", opts.tol.compare_rel}};
    return j;
}

void emit(const json& report, const GlobalOptions& opts) {
    if (opts.json_output) std::cout << report.dump(2) << "\n";
}

int classify_like(const std::string& command, const std::string& symbol_path,
                  const GlobalOptions& opts, bool norm_only) {
    const AffineSymbol sym = io::symbol_from_json(io::load_json_file(symbol_path));
    const SymbolReport report = analyze(sym, opts.tol);
    json out = run_report_skeleton(command, opts);
    out["report"] = io::report_to_json(report);
    out["exit_status"] = report.bounded ? kExitOk : kExitUnbounded;

    if (!opts.json_output) {
        if (!norm_only) {
            std::cout << "symbol: C^" << sym.domain_dim() << " -> C^" << sym.codomain_dim()
                      << ", ||A|| = " << report.norm_a << "\n";
            std::cout << "criteria: primal=" << (report.criteria.primal ? "yes" : "no")
                      << " dual=" << (report.criteria.dual ? "yes" : "no")
                      << " carswell=" << (report.criteria.carswell ? "yes" : "no") << "\n";
            std::cout << "compact: " << (report.compact ? "yes" : "no") << "\n";
        }
        if (report.bounded) {
            std::cout << "bounded: yes\n";
            std::cout << "log ||C_phi|| = " << *report.log_norm << "\n";
            std::cout << "||C_phi|| = " << report.norm() << "\n";
            if (!norm_only) {
                std::cout << "v  = " << fmt_vector(*report.v) << "\n";
                std::cout << "u  = " << fmt_vector(*report.u) << "\n";
                std::cout << "w0 = " << fmt_vector(*report.w0) << "\n";
                std::cout << "extremal kernel witness: K_w0 with w0 as above\n";
            }
        } else {
            std::cout << "bounded: no -- UNBOUNDED";
            if (report.norm_a <= 1.0 + opts.tol.compare_rel) {
                std::cout << " (||A|| <= 1 but the translation is inadmissible)";
            } else {
                std::cout << " (||A|| > 1)";
            }
            std::cout << "\n";
        }
    }
    emit(out, opts);
    return report.bounded ? kExitOk : kExitUnbounded;
}

int cmd_check_extremal(const std::string& symbol_path, const std::string& combination_path,
                       const std::string& side_name, const GlobalOptions& opts) {
    const AffineSymbol sym = io::symbol_from_json(io::load_json_file(symbol_path));
    const KernelCombination f =
        io::combination_from_json(io::load_json_file(combination_path));
    const Side side = side_name == "composition" ? Side::composition : Side::adjoint;
    const ExtremalityReport report =
        extremality_report(sym, f, side, 1e-9, opts.tol);

    json out = run_report_skeleton("check-extremal", opts);
    out["side"] = side_name;
    out["extremality"] = {{"log_ratio", report.log_ratio},
                          {"eigen_residual_rel", report.eigen_residual_rel},
                          {"is_extremal", report.is_extremal}};

    if (!opts.json_output) {
        std::cout << "side: " << side_name << "\n";
        std::cout << "eigen residual (relative): " << report.eigen_residual_rel << "\n";
        std::cout << "log ||op f|| / ||f|| - log ||C_phi|| = " << report.log_ratio << "\n";
        std::cout << (report.is_extremal ? "EXTREMAL\n" : "not extremal\n");
    }

    // two-term unit-kernel combinations get the necessary-condition check
    if (f.terms().size() == 2) {
        const auto& t = f.terms();
        const bool unit_points = std::abs(t[0].point.norm() - 1.0) <= 1e-12 &&
                                 std::abs(t[1].point.norm() - 1.0) <= 1e-12;
        const bool equal_coeffs = std::abs(t[0].coeff - t[1].coeff) <=
                                  1e-12 * std::max(std::abs(t[0].coeff), std::abs(t[1].coeff));
        if (unit_points && equal_coeffs) {
            const SumKernelCheck check =
                sum_kernel_necessary_check(sym, t[0].point, t[1].point);
            out["sum_kernel_check"] = {{"extremal", check.extremal},
                                       {"norm_phi_x1", check.norm_phi_x1},
                                       {"norm_phi_x2", check.norm_phi_x2},
                                       {"implication_holds", check.implication_holds}};
            if (!opts.json_output) {
                std::cout << "necessary condition: ||phi(x1)|| = " << check.norm_phi_x1
                          << ", ||phi(x2)|| = " << check.norm_phi_x2
                          << (check.implication_holds ? " (consistent)\n" : " (VIOLATED)\n");
            }
        }
    }
    const int code = report.is_extremal ? kExitOk : kExitNotExtremal;
    out["exit_status"] = code;
    emit(out, opts);
    return code;
}

int cmd_verify(const std::string& symbol_path, int max_degree,
               const std::string& report_path, const GlobalOptions& opts) {
    const AffineSymbol sym = io::symbol_from_json(io::load_json_file(symbol_path));
    const std::vector<ConvergenceRow> rows = convergence_report(sym, max_degree, opts.tol);
    const bool bounded = rows.back().exact_norm.has_value();

    if (!report_path.empty()) io::save_text_file(report_path, io::convergence_to_csv(rows));

    json out = run_report_skeleton("verify", opts);
    out["convergence"] = io::convergence_to_json(rows);

    bool monotone = true;
    bool below_exact = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].truncated_norm < rows[i - 1].truncated_norm * (1.0 - 1e-12)) {
            monotone = false;
        }
        if (rows[i].exact_norm &&
            rows[i].truncated_norm > *rows[i].exact_norm * (1.0 + 1e-9)) {
            below_exact = false;
        }
    }

    if (!opts.json_output) {
        std::cout << io::convergence_to_csv(rows);
        if (bounded) {
            std::cout << "final relative gap: " << *rows.back().relative_gap << "\n";
        } else {
            std::cout << "symbol is UNBOUNDED: truncated norms grow without bound\n";
        }
    }

    int code = kExitOk;
    if (!bounded) {
        code = kExitUnbounded;
    } else if (!monotone || !below_exact) {
        code = kExitInvariant;
        if (!opts.json_output) {
            std::cout << "INVARIANT VIOLATION: "
                      << (!monotone ? "truncated norms are not monotone" : "bound exceeded")
                      << "\n";
        }
    }
    out["exit_status"] = code;
    emit(out, opts);
    return code;
}

int cmd_example(const std::string& name, double mu, int dim, int n_param,
                Complex scalar_a, Complex scalar_b, const std::string& out_dir,
                const GlobalOptions& opts) {
    namespace fs = std::filesystem;
    std::optional<AffineSymbol> sym;
    std::vector<std::pair<std::string, KernelCombination>> companions;
    std::ostringstream note;

    const auto basis_vec = [](Eigen::Index d, Eigen::Index i) {
        ComplexVector v = ComplexVector::Zero(d);
        v(i) = 1.0;
        return v;
    };

    if (name == "nilpotent-shift") {
        sym = gallery::nilpotent_shift(dim);
        if (dim >= 3) {
            companions.emplace_back("extremal-pair",
                                    KernelCombination::kernel(basis_vec(dim, 0)) +
                                        KernelCombination::kernel(basis_vec(dim, 1)));
        }
        note << "Right shift e_k -> e_{k+1} on C^" << dim << " with b = e_1. The classical\n"
             << "version lives on l^2(N); this truncation keeps A*b = 0 and the extremal\n"
             << "structure exactly, so ||C_phi|| = e^{1/2} and K_{e1} + K_{e2} is an\n"
             << "extremal function for the adjoint.\n";
    } else if (name == "weighted-shift") {
        sym = gallery::weighted_shift(mu, dim);
        if (dim >= 4) {
            companions.emplace_back("nonextremal-pair",
                                    KernelCombination::kernel(basis_vec(dim, 1)) +
                                        KernelCombination::kernel(basis_vec(dim, 2)));
        }
        note << "Weighted shift (S e_1 = mu e_2, S e_k = e_{k+1}) on C^" << dim
             << " with mu = " << mu << " and\n"
             << "b = (1, sqrt(1 - mu^2)/mu, 0, ...). The classical version lives on l^2(N);\n"
             << "the truncation keeps (I - S*S)^{1/2} e_1 = S*b exactly, so ||C_phi||^2 =\n"
             << "e^{1 + 1/mu^2}. The adjoint does not attain its norm at K_{e2} + K_{e3}\n"
             << "even though ||phi(e2)|| = ||phi(e3)||.\n";
    } else if (name == "isometry-embedding") {
        sym = gallery::isometry_embedding(n_param);
        note << "Non-unitary isometry [I_" << n_param << "; 0] : C^" << n_param << " -> C^"
             << n_param + 1 << " with b = e_" << n_param + 1 << ".\n"
             << "A*b = 0 and A*A = I, so the adjoint attains its norm at every kernel.\n";
    } else if (name == "scalar") {
        sym = gallery::scalar_symbol(scalar_a, scalar_b);
        note << "Scalar symbol phi(z) = a z + b with a = " << fmt_complex(scalar_a)
             << ", b = " << fmt_complex(scalar_b) << ".\n";
    } else if (name == "identity") {
        sym = gallery::identity_symbol(n_param);
        note << "Identity symbol on C^" << n_param << "; ||C_phi|| = 1.\n";
    } else {
        std::cerr << "unknown example name: " << name << "\n";
        return kExitUsage;
    }

    fs::create_directories(out_dir);
    const fs::path base = fs::path(out_dir) / name;
    const std::string symbol_path = base.string() + ".symbol.json";
    io::save_text_file(symbol_path, io::symbol_to_json(*sym).dump(2) + "\n");
    std::cout << "wrote " << symbol_path << "\n";

    const SymbolReport report = analyze(*sym, opts.tol);
    if (report.bounded) {
        const std::string witness_path = base.string() + ".witness.json";
        io::save_text_file(
            witness_path,
            io::combination_to_json(KernelCombination::kernel(*report.w0)).dump(2) + "\n");
        std::cout << "wrote " << witness_path << "\n";
    }
    for (const auto& [label, combo] : companions) {
        const std::string path = base.string() + "." + label + ".json";
        io::save_text_file(path, io::combination_to_json(combo).dump(2) + "\n");
        std::cout << "wrote " << path << "\n";
    }
    const std::string note_path = base.string() + ".NOTES.txt";
    io::save_text_file(note_path, note.str());
    std::cout << "wrote " << note_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"composition operators C_phi, phi(z) = Az + b, on Fock spaces: "
                 "classification, exact norms, extremal functions, Galerkin verification"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--tol-rank", opts.tol.rank_cutoff_rel, "relative rank cutoff");
    app.add_option("--tol-residual", opts.tol.residual_rel, "relative residual tolerance");
    app.add_option("--tol-compare", opts.tol.compare_rel, "relative comparison tolerance");
    app.add_flag("--json", opts.json_output, "machine-readable JSON on stdout");

    std::string symbol_path, combination_path, side = "adjoint", report_path, out_dir = ".";
    std::string example_name;
    int max_degree = 12, dim = 4, n_param = 2;
    double mu = 0.5;
    std::pair<double, double> a_parts{0.5, 0.0}, b_parts{1.0, 0.0};

    auto* classify = app.add_subcommand("classify", "boundedness/compactness verdicts and norm");
    classify->add_option("symbol", symbol_path, "symbol JSON file")->required();

    auto* norm_cmd = app.add_subcommand("norm", "print ||C_phi|| for a bounded symbol");
    norm_cmd->add_option("symbol", symbol_path, "symbol JSON file")->required();

    auto* extremal = app.add_subcommand("check-extremal",
                                        "test whether a kernel combination is extremal");
    extremal->add_option("symbol", symbol_path, "symbol JSON file")->required();
    extremal->add_option("combination", combination_path, "kernel combination JSON file")
        ->required();
    extremal->add_option("--side", side, "composition | adjoint (default adjoint)")
        ->check(CLI::IsMember({"composition", "adjoint"}));

    auto* verify = app.add_subcommand("verify",
                                      "Galerkin convergence table against the exact norm");
    verify->add_option("symbol", symbol_path, "symbol JSON file")->required();
    verify->add_option("--max-degree", max_degree, "truncation degree sweep upper end");
    verify->add_option("--report", report_path, "write the table as CSV to this path");

    auto* example = app.add_subcommand("example", "emit a built-in example symbol");
    example
        ->add_option("name", example_name,
                     "nilpotent-shift | weighted-shift | isometry-embedding | scalar | identity")
        ->required();
    example->add_option("--mu", mu, "weighted-shift weight in (0, 1]");
    example->add_option("--dim", dim, "ambient dimension for the shift examples");
    example->add_option("--n", n_param, "dimension for isometry-embedding / identity");
    example->add_option("--a", a_parts, "scalar a as re [im]");
    example->add_option("--b", b_parts, "scalar b as re [im]");
    example->add_option("--out", out_dir, "output directory (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (classify->parsed()) return classify_like("classify", symbol_path, opts, false);
        if (norm_cmd->parsed()) return classify_like("norm", symbol_path, opts, true);
        if (extremal->parsed()) {
            return cmd_check_extremal(symbol_path, combination_path, side, opts);
        }
        if (verify->parsed()) return cmd_verify(symbol_path, max_degree, report_path, opts);
        if (example->parsed()) {
            return cmd_example(example_name, mu, dim, n_param,
                               Complex(a_parts.first, a_parts.second),
                               Complex(b_parts.first, b_parts.second), out_dir, opts);
        }
    } catch (const UnboundedSymbol& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnbounded;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
