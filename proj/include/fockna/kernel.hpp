// Exact algebra on finite combinations of Fock-space reproducing kernels
// K_w(z) = exp<z, w>, with the closed-form actions
//
//   C*_phi K_w = K_{phi(w)}            (w in C^n, result in H(C^m))
//   C_phi  K_w = e^{<b,w>} K_{A* w}    (w in C^m, result in H(C^n))
//
// Inner products are linear in the first slot and conjugate-linear in the
// second; all Gram computations use <K_u, K_w> = K_u(w) = exp<w, u>. Norms
// and differences of combinations always go through the joint Gram matrix
// (distinct point lists can represent equal functions after cancellation).
#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "fockna/symbol.hpp"
#include "fockna/types.hpp"

namespace fockna {

struct KernelTerm {
    Complex coeff;
    ComplexVector point;
};

/// sum_i coeff_i * K_{point_i}; may be empty (the zero function). Stored in
/// normalized form: coinciding points merged, negligible coefficients
/// dropped. Points are capped at ||w||^2 <= 500 so Gram entries exp<.,.>
/// stay inside double range.
class KernelCombination {
  public:
    explicit KernelCombination(Eigen::Index dim, std::vector<KernelTerm> terms = {})
        : dim_(dim), terms_(std::move(terms)) {
        if (dim_ < 1) throw InvalidInput("KernelCombination: dim must be >= 1");
        normalize();
    }

    /// c * K_w
    static KernelCombination kernel(const ComplexVector& w, Complex c = Complex(1.0, 0.0)) {
        return KernelCombination(w.size(), {{c, w}});
    }

    /// k_w = K_w / ||K_w|| = exp(-||w||^2 / 2) K_w
    static KernelCombination normalized_kernel(const ComplexVector& w) {
        return kernel(w, Complex(std::exp(-w.squaredNorm() / 2.0), 0.0));
    }

    Eigen::Index dim() const { return dim_; }
    const std::vector<KernelTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    KernelCombination& operator*=(Complex c) {
        for (auto& t : terms_) t.coeff *= c;
        normalize();
        return *this;
    }
    friend KernelCombination operator*(Complex c, KernelCombination f) {
        f *= c;
        return f;
    }
    friend KernelCombination operator+(const KernelCombination& f, const KernelCombination& g) {
        if (f.dim_ != g.dim_) throw InvalidInput("KernelCombination: dimension mismatch");
        std::vector<KernelTerm> terms = f.terms_;
        terms.insert(terms.end(), g.terms_.begin(), g.terms_.end());
        return KernelCombination(f.dim_, std::move(terms));
    }
    friend KernelCombination operator-(const KernelCombination& f, const KernelCombination& g) {
        return f + (Complex(-1.0, 0.0) * g);
    }

  private:
    void normalize() {
        std::vector<KernelTerm> merged;
        for (auto& t : terms_) {
            if (t.point.size() != dim_) {
                throw InvalidInput("KernelCombination: point dimension mismatch");
            }
            if (!all_finite(t.point) || !std::isfinite(t.coeff.real()) ||
                !std::isfinite(t.coeff.imag())) {
                throw InvalidInput("KernelCombination: entries must be finite");
            }
            if (t.point.squaredNorm() > 500.0) {
                throw RangeError("KernelCombination: point with ||w||^2 > 500 rejected");
            }
            bool found = false;
            for (auto& mt : merged) {
                if (mt.point == t.point) {
                    mt.coeff += t.coeff;
                    found = true;
                    break;
                }
            }
            if (!found) merged.push_back(std::move(t));
        }
        double max_abs = 0.0;
        for (const auto& t : merged) max_abs = std::max(max_abs, std::abs(t.coeff));
        terms_.clear();
        for (auto& t : merged) {
            if (std::abs(t.coeff) > 1e-15 * max_abs && std::abs(t.coeff) > 0.0) {
                terms_.push_back(std::move(t));
            }
        }
    }

    Eigen::Index dim_;
    std::vector<KernelTerm> terms_;
};

/// f(z) = sum_i c_i exp<z, w_i>
inline Complex evaluate(const KernelCombination& f, const ComplexVector& z) {
    if (z.size() != f.dim()) throw InvalidInput("evaluate: dimension mismatch");
    Complex acc(0.0, 0.0);
    for (const auto& t : f.terms()) acc += t.coeff * std::exp(dot_zw(z, t.point));
    return acc;
}

/// <f, g> = sum_{i,j} c_i conj(d_j) exp<w_j^(g), w_i^(f)>
inline Complex inner_product(const KernelCombination& f, const KernelCombination& g) {
    if (f.dim() != g.dim()) throw InvalidInput("inner_product: dimension mismatch");
    Complex acc(0.0, 0.0);
    for (const auto& tf : f.terms()) {
        for (const auto& tg : g.terms()) {
            acc += tf.coeff * std::conj(tg.coeff) * std::exp(dot_zw(tg.point, tf.point));
        }
    }
    return acc;
}

inline double norm_sq(const KernelCombination& f) {
    const Complex s = inner_product(f, f);
    return std::max(s.real(), 0.0);
}

inline double norm(const KernelCombination& f) { return std::sqrt(norm_sq(f)); }

/// C*_phi f: each term (c, w) -> (c, A w + b).
inline KernelCombination apply_adjoint(const AffineSymbol& sym, const KernelCombination& f) {
    if (f.dim() != sym.domain_dim()) {
        throw InvalidInput("apply_adjoint: combination must live on the domain side C^n");
    }
    std::vector<KernelTerm> terms;
    terms.reserve(f.terms().size());
    for (const auto& t : f.terms()) terms.push_back({t.coeff, sym(t.point)});
    return KernelCombination(sym.codomain_dim(), std::move(terms));
}

/// C_phi f: each term (c, w) -> (c e^{<b,w>}, A* w), since
/// (C_phi K_w)(z) = exp<Az + b, w> = e^{<b,w>} exp<z, A* w>.
inline KernelCombination apply_composition(const AffineSymbol& sym, const KernelCombination& f) {
    if (f.dim() != sym.codomain_dim()) {
        throw InvalidInput("apply_composition: combination must live on the codomain side C^m");
    }
    std::vector<KernelTerm> terms;
    terms.reserve(f.terms().size());
    for (const auto& t : f.terms()) {
        terms.push_back({t.coeff * std::exp(dot_zw(sym.b, t.point)),
                         (sym.a.adjoint() * t.point).eval()});
    }
    return KernelCombination(sym.domain_dim(), std::move(terms));
}

/// ||f - g||^2 <= tol^2 * max(||f||^2, ||g||^2, 1), via the joint Gram matrix.
inline bool combinations_equal(const KernelCombination& f, const KernelCombination& g,
                               double tol = 1e-10) {
    if (f.dim() != g.dim()) throw InvalidInput("combinations_equal: dimension mismatch");
    const double diff_sq = norm_sq(f - g);
    return diff_sq <= tol * tol * std::max({norm_sq(f), norm_sq(g), 1.0});
}

/// ln ||C*_phi k_w|| = (||phi(w)||^2 - ||w||^2) / 2. Never exceeds the
/// symbol's log-norm (completing the square in ||Az + b||^2).
inline double adjoint_norm_at_kernel(const AffineSymbol& sym, const ComplexVector& w,
                                     const Tolerances& tol = {}) {
    if (w.size() != sym.domain_dim()) {
        throw InvalidInput("adjoint_norm_at_kernel: dimension mismatch");
    }
    if (!check_bounded(sym, tol).bounded()) {
        throw UnboundedSymbol("adjoint_norm_at_kernel: symbol induces an unbounded operator");
    }
    return (sym(w).squaredNorm() - w.squaredNorm()) / 2.0;
}

enum class Side {
    composition,  // test C*_phi C_phi f = ||C_phi||^2 f  (f on C^m)
    adjoint       // test C_phi C*_phi f = ||C_phi||^2 f  (f on C^n)
};

/// Norm attainment happens exactly when ||C_phi||^2 sits in the point
/// spectrum of the relevant product, so the residual of the eigen-equation
/// is the whole story. log_ratio = ln(||op f|| / ||f||) - ln ||C_phi||.
struct ExtremalityReport {
    double log_ratio = 0.0;
    double eigen_residual_rel = 0.0;
    bool is_extremal = false;
};

inline ExtremalityReport extremality_report(const AffineSymbol& sym, const KernelCombination& f,
                                            Side side, double residual_tol = 1e-9,
                                            const Tolerances& tol = {}) {
    if (f.is_zero()) throw InvalidInput("extremality_report: f must be nonzero");
    const SymbolReport report = analyze(sym, tol);
    if (!report.bounded) {
        throw UnboundedSymbol("extremality_report: symbol induces an unbounded operator");
    }
    const double log_norm = *report.log_norm;
    const double norm_sq_op = std::exp(2.0 * log_norm);  // ||C_phi||^2

    KernelCombination mapped = (side == Side::composition) ? apply_composition(sym, f)
                                                           : apply_adjoint(sym, f);
    KernelCombination round_trip = (side == Side::composition) ? apply_adjoint(sym, mapped)
                                                               : apply_composition(sym, mapped);
    const double f_norm_sq = norm_sq(f);
    if (f_norm_sq <= 0.0) throw InvalidInput("extremality_report: f must be nonzero");

    const KernelCombination residual = round_trip - (Complex(norm_sq_op, 0.0) * f);
    ExtremalityReport out;
    out.eigen_residual_rel = norm(residual) / (norm_sq_op * std::sqrt(f_norm_sq));
    out.log_ratio = 0.5 * (std::log(norm_sq(mapped)) - std::log(f_norm_sq)) - log_norm;
    out.is_extremal = out.eigen_residual_rel <= residual_tol;
    return out;
}

/// Necessary condition for K_{x1} + K_{x2} (unit x_i) to be extremal for
/// C*_phi: extremality forces ||phi(x1)|| = ||phi(x2)||.
struct SumKernelCheck {
    bool extremal = false;
    double norm_phi_x1 = 0.0;
    double norm_phi_x2 = 0.0;
    bool implication_holds = false;
};

inline SumKernelCheck sum_kernel_necessary_check(const AffineSymbol& sym, const ComplexVector& x1,
                                                 const ComplexVector& x2, double tol = 1e-8) {
    if (std::abs(x1.norm() - 1.0) > 1e-12 || std::abs(x2.norm() - 1.0) > 1e-12) {
        throw InvalidInput("sum_kernel_necessary_check: x1, x2 must be unit vectors");
    }
    const KernelCombination f =
        KernelCombination::kernel(x1) + KernelCombination::kernel(x2);
    SumKernelCheck out;
    out.extremal = extremality_report(sym, f, Side::adjoint).is_extremal;
    out.norm_phi_x1 = sym(x1).norm();
    out.norm_phi_x2 = sym(x2).norm();
    out.implication_holds =
        !out.extremal || std::abs(out.norm_phi_x1 - out.norm_phi_x2) <= tol;
    return out;
}

/// Positivity of eigenfunction value ratios at the distinguished points:
/// if C_phi C*_phi f = ||C_phi||^2 f and f(0) != 0 then
/// f(A*b)/f(0) = exp(||v||^2) >= 0; if C*_phi C_phi f = ||C_phi||^2 f then
/// f(b) = ||C_phi||^2 f(0), so f(b)/f(0) >= 0. Fields are absent when the
/// corresponding eigen-equation does not typecheck for f's ambient space or
/// when f(0) vanishes.
struct PositivityChecks {
    std::optional<bool> cc_star_eigen;
    std::optional<double> ratio_astar_b;
    std::optional<bool> c_star_c_eigen;
    std::optional<double> ratio_b;
};

inline PositivityChecks positivity_checks(const AffineSymbol& sym, const KernelCombination& f,
                                          double tol = 1e-9, const Tolerances& tols = {}) {
    const SymbolReport report = analyze(sym, tols);
    if (!report.bounded) {
        throw UnboundedSymbol("positivity_checks: symbol induces an unbounded operator");
    }
    const double norm_sq_op = std::exp(2.0 * *report.log_norm);
    PositivityChecks out;
    if (f.is_zero()) return out;

    double coeff_scale = 0.0;
    for (const auto& t : f.terms()) coeff_scale += std::abs(t.coeff);
    const Complex f0 = evaluate(f, ComplexVector::Zero(f.dim()));
    const bool f0_ok = std::abs(f0) > 1e-13 * coeff_scale;

    const auto eigen_holds = [&](const KernelCombination& round_trip) {
        const KernelCombination residual = round_trip - (Complex(norm_sq_op, 0.0) * f);
        return norm(residual) <= tol * norm_sq_op * norm(f);
    };

    if (f.dim() == sym.domain_dim()) {  // C_phi C*_phi side
        const bool holds = eigen_holds(apply_composition(sym, apply_adjoint(sym, f)));
        out.cc_star_eigen = holds;
        if (holds && f0_ok) {
            const ComplexVector astar_b = sym.a.adjoint() * sym.b;
            const Complex ratio = evaluate(f, astar_b) / f0;
            const double expected = std::exp(report.v->squaredNorm());
            if (ratio.real() < -tol || std::abs(ratio - Complex(expected, 0.0)) >
                                           tol * std::max(1.0, expected)) {
                throw std::logic_error("positivity_checks: f(A*b)/f(0) deviates from exp(||v||^2)");
            }
            out.ratio_astar_b = ratio.real();
        }
    }
    if (f.dim() == sym.codomain_dim()) {  // C*_phi C_phi side
        const bool holds = eigen_holds(apply_adjoint(sym, apply_composition(sym, f)));
        out.c_star_c_eigen = holds;
        if (holds && f0_ok) {
            const Complex fb = evaluate(f, sym.b);
            const Complex ratio = fb / f0;
            if (ratio.real() < -tol ||
                std::abs(fb - Complex(norm_sq_op, 0.0) * f0) >
                    tol * std::max(1.0, std::abs(norm_sq_op * f0))) {
                throw std::logic_error("positivity_checks: f(b) deviates from ||C_phi||^2 f(0)");
            }
            out.ratio_b = ratio.real();
        }
    }
    return out;
}

}  // namespace fockna
