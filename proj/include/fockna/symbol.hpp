// Affine symbols phi(z) = Az + b between C^n and C^m, classification of the
// induced composition operator C_phi on the Fock space, and its exact norm.
//
// The three boundedness criteria and the three norm formulas are evaluated
// off one shared singular value decomposition of A so that their rank
// decisions cannot drift apart:
//   primal:   ||A|| <= 1 and A*b in ran (I - A*A)^{1/2}
//   dual:     ||A|| <= 1 and b   in ran (I - AA*)^{1/2}
//   carswell: ||A|| <= 1 and <A zeta, b> = 0 on the sigma = 1 subspace
// For a bounded symbol,
//   log ||C_phi|| = (||v||^2 + ||b||^2)/2 = ||u||^2/2
//                 = (||w0||^2 - ||A w0||^2 + ||b||^2)/2
// with v, u, w0 the minimal-norm solutions of
//   (I - A*A)^{1/2} v = A*b,   (I - AA*)^{1/2} u = b,   (I - A*A) w0 = A*b.
#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include "fockna/linalg.hpp"
#include "fockna/types.hpp"

namespace fockna {

struct AffineSymbol {
    ComplexMatrix a;  // m x n, maps C^n -> C^m
    ComplexVector b;  // dim m

    AffineSymbol(ComplexMatrix a_in, ComplexVector b_in)
        : a(std::move(a_in)), b(std::move(b_in)) {
        if (a.rows() < 1 || a.cols() < 1) {
            throw InvalidInput("AffineSymbol: matrix must be at least 1x1");
        }
        if (b.size() != a.rows()) {
            throw InvalidInput("AffineSymbol: b must have dim equal to the row count of A");
        }
        if (!all_finite(a) || !all_finite(b)) {
            throw InvalidInput("AffineSymbol: entries must be finite");
        }
    }

    Eigen::Index domain_dim() const { return a.cols(); }    // n
    Eigen::Index codomain_dim() const { return a.rows(); }  // m

    /// phi(z) = Az + b
    ComplexVector operator()(const ComplexVector& z) const {
        if (z.size() != domain_dim()) {
            throw InvalidInput("AffineSymbol: argument dimension mismatch");
        }
        return a * z + b;
    }
};

struct BoundednessVerdicts {
    bool primal = false;
    bool dual = false;
    bool carswell = false;
    bool bounded() const { return primal; }
};

struct SymbolReport {
    double norm_a = 0.0;
    BoundednessVerdicts criteria;
    bool bounded = false;
    bool compact = false;
    std::optional<ComplexVector> v;   // dim n
    std::optional<ComplexVector> u;   // dim m
    std::optional<ComplexVector> w0;  // dim n
    std::optional<double> log_norm;   // ln ||C_phi||
    std::optional<ComplexVector> extremal_kernel_witness;  // = w0

    double norm() const {
        if (!log_norm) throw UnboundedSymbol("norm: symbol is unbounded");
        return std::exp(*log_norm);
    }
};

namespace detail {

// Shared SVD of A with boundary singular values snapped to exactly 1.
// Snapping is two-sided: sigma within compare_rel of 1 becomes 1, so the
// sigma = 1 subspace, the rank cut of (I - A*A)^{1/2} and the rank cut of
// I - A*A all select the same directions.
struct SymbolDecomposition {
    ComplexMatrix u;           // m x m
    ComplexMatrix v;           // n x n
    Eigen::VectorXd sigma;     // raw, length min(m, n)
    Eigen::VectorXd sigma_hat; // snapped
    double norm_a = 0.0;
    bool norm_ok = false;

    Eigen::Index n() const { return v.rows(); }
    Eigen::Index m() const { return u.rows(); }

    // Extends sigma_hat by zeros to length k (directions beyond min(m, n)).
    Eigen::VectorXd sigma_ext(Eigen::Index k) const {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(k);
        s.head(sigma_hat.size()) = sigma_hat;
        return s;
    }

    ComplexMatrix sqrt_one_minus_ata() const {  // (I - A*A)^{1/2}, n x n
        const Eigen::VectorXd s = sigma_ext(n());
        const Eigen::VectorXd d = (1.0 - s.array().square()).max(0.0).sqrt();
        return v * d.asDiagonal() * v.adjoint();
    }
    ComplexMatrix sqrt_one_minus_aat() const {  // (I - AA*)^{1/2}, m x m
        const Eigen::VectorXd s = sigma_ext(m());
        const Eigen::VectorXd d = (1.0 - s.array().square()).max(0.0).sqrt();
        return u * d.asDiagonal() * u.adjoint();
    }
    ComplexMatrix one_minus_ata() const {  // I - A*A, n x n
        const Eigen::VectorXd s = sigma_ext(n());
        const Eigen::VectorXd d = (1.0 - s.array().square()).max(0.0);
        return v * d.asDiagonal() * v.adjoint();
    }
    ComplexVector a_hat_adjoint(const ComplexVector& y) const {  // snapped A* y
        ComplexVector c = u.adjoint() * y;
        ComplexVector d = ComplexVector::Zero(n());
        for (Eigen::Index i = 0; i < sigma_hat.size(); ++i) d(i) = sigma_hat(i) * c(i);
        return v * d;
    }
    ComplexVector a_hat(const ComplexVector& x) const {  // snapped A x
        ComplexVector c = v.adjoint() * x;
        ComplexVector d = ComplexVector::Zero(m());
        for (Eigen::Index i = 0; i < sigma_hat.size(); ++i) d(i) = sigma_hat(i) * c(i);
        return u * d;
    }
};

inline SymbolDecomposition decompose(const AffineSymbol& sym, const Tolerances& tol) {
    tol.validate();
    SymbolDecomposition dec;
    SvdResult f = svd(sym.a, /*full=*/true);
    dec.u = std::move(f.u);
    dec.v = std::move(f.v);
    dec.sigma = f.sigma;
    dec.norm_a = dec.sigma.size() > 0 ? dec.sigma(0) : 0.0;
    dec.norm_ok = dec.norm_a <= 1.0 + tol.compare_rel;
    dec.sigma_hat = dec.sigma;
    for (Eigen::Index i = 0; i < dec.sigma_hat.size(); ++i) {
        if (std::abs(dec.sigma_hat(i) - 1.0) <= tol.compare_rel) dec.sigma_hat(i) = 1.0;
    }
    return dec;
}

}  // namespace detail

/// Per-criterion boundedness verdicts. The three criteria are equivalent;
/// a disagreement can only come from a numerical inconsistency and throws.
inline BoundednessVerdicts check_bounded(const AffineSymbol& sym, const Tolerances& tol = {}) {
    const detail::SymbolDecomposition dec = detail::decompose(sym, tol);
    BoundednessVerdicts verdicts;
    if (dec.norm_ok) {
        const ComplexVector astar_b = dec.a_hat_adjoint(sym.b);
        verdicts.primal = min_norm_solve(dec.sqrt_one_minus_ata(), astar_b, tol).consistent;
        verdicts.dual = min_norm_solve(dec.sqrt_one_minus_aat(), sym.b, tol).consistent;
        const ComplexVector c = dec.u.adjoint() * sym.b;
        double leak_sq = 0.0;
        for (Eigen::Index i = 0; i < dec.sigma_hat.size(); ++i) {
            if (dec.sigma_hat(i) == 1.0) leak_sq += std::norm(c(i));
        }
        const double nb = sym.b.norm();
        verdicts.carswell = nb > 0.0 ? std::sqrt(leak_sq) <= tol.residual_rel * nb : true;
    }
    if (verdicts.primal != verdicts.dual || verdicts.primal != verdicts.carswell) {
        std::ostringstream msg;
        msg << "check_bounded: criteria disagree (primal=" << verdicts.primal
            << " dual=" << verdicts.dual << " carswell=" << verdicts.carswell << ")";
        throw std::logic_error(msg.str());
    }
    return verdicts;
}

/// Compact iff ||A|| < 1 (strictly, up to compare_rel); the translation part
/// is irrelevant and every A is compact in finite dimension.
inline bool check_compact(const AffineSymbol& sym, const Tolerances& tol = {}) {
    tol.validate();
    return operator_norm(sym.a) < 1.0 - tol.compare_rel;
}

/// Full classification: verdicts, v / u / w0, log-norm and the extremal
/// kernel witness. The three log-norm routes are cross-checked internally.
inline SymbolReport analyze(const AffineSymbol& sym, const Tolerances& tol = {}) {
    const detail::SymbolDecomposition dec = detail::decompose(sym, tol);
    SymbolReport report;
    report.norm_a = dec.norm_a;
    report.compact = dec.norm_a < 1.0 - tol.compare_rel;

    LeastSquares primal_solve, dual_solve;
    ComplexVector astar_b;
    if (dec.norm_ok) {
        astar_b = dec.a_hat_adjoint(sym.b);
        primal_solve = min_norm_solve(dec.sqrt_one_minus_ata(), astar_b, tol);
        dual_solve = min_norm_solve(dec.sqrt_one_minus_aat(), sym.b, tol);
        report.criteria.primal = primal_solve.consistent;
        report.criteria.dual = dual_solve.consistent;
        const ComplexVector c = dec.u.adjoint() * sym.b;
        double leak_sq = 0.0;
        for (Eigen::Index i = 0; i < dec.sigma_hat.size(); ++i) {
            if (dec.sigma_hat(i) == 1.0) leak_sq += std::norm(c(i));
        }
        const double nb = sym.b.norm();
        report.criteria.carswell = nb > 0.0 ? std::sqrt(leak_sq) <= tol.residual_rel * nb : true;
    }
    if (report.criteria.primal != report.criteria.dual ||
        report.criteria.primal != report.criteria.carswell) {
        throw std::logic_error("analyze: boundedness criteria disagree");
    }
    report.bounded = report.criteria.bounded();
    if (!report.bounded) return report;

    const LeastSquares w0_solve = min_norm_solve(dec.one_minus_ata(), astar_b, tol);
    report.v = primal_solve.x;
    report.u = dual_solve.x;
    report.w0 = w0_solve.x;
    report.extremal_kernel_witness = w0_solve.x;

    const double nb_sq = sym.b.squaredNorm();
    const double via_v = (report.v->squaredNorm() + nb_sq) / 2.0;
    const double via_u = report.u->squaredNorm() / 2.0;
    const double via_w0 =
        (report.w0->squaredNorm() - dec.a_hat(*report.w0).squaredNorm() + nb_sq) / 2.0;
    const double slack = tol.compare_rel * std::max(1.0, std::abs(via_v));
    if (std::abs(via_u - via_v) > slack || std::abs(via_w0 - via_v) > slack) {
        std::ostringstream msg;
        msg << "analyze: norm routes disagree (v-route " << via_v << ", u-route " << via_u
            << ", w0-route " << via_w0 << ")";
        throw std::logic_error(msg.str());
    }
    report.log_norm = via_v;
    return report;
}

/// (outer . inner)(z) = outer(inner(z)).
inline AffineSymbol compose_symbols(const AffineSymbol& outer, const AffineSymbol& inner) {
    if (outer.domain_dim() != inner.codomain_dim()) {
        throw InvalidInput("compose_symbols: inner output dim must match outer input dim");
    }
    return AffineSymbol(outer.a * inner.a, outer.a * inner.b + outer.b);
}

}  // namespace fockna
