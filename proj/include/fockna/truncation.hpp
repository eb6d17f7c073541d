// Independent numerical oracle: the exact matrix of C_phi on the degree <= d
// orthonormal monomial basis of the Fock space.
//
// Monomials are orthogonal with ||z^alpha||^2 = alpha! (multi-index
// factorial), so {z^alpha / sqrt(alpha!)} is an orthonormal basis of the
// polynomials. Affine composition preserves degree, hence the compression
// onto degree <= d equals the restriction there: its spectral norm is a
// monotone non-decreasing lower bound converging to ||C_phi||.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fockna/linalg.hpp"
#include "fockna/symbol.hpp"
#include "fockna/types.hpp"

namespace fockna {

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& alpha) {
    int d = 0;
    for (int e : alpha) d += e;
    return d;
}

/// ln(alpha!) = sum_i ln(alpha_i!)
inline double log_multi_factorial(const MultiIndex& alpha) {
    double s = 0.0;
    for (int e : alpha) s += std::lgamma(static_cast<double>(e) + 1.0);
    return s;
}

/// alpha! in extended precision; per-component factorials are exact up to
/// 20! (64-bit table), larger ones go through tgammal.
inline long double multi_factorial(const MultiIndex& alpha) {
    static const std::uint64_t table[21] = {1ull,
                                            1ull,
                                            2ull,
                                            6ull,
                                            24ull,
                                            120ull,
                                            720ull,
                                            5040ull,
                                            40320ull,
                                            362880ull,
                                            3628800ull,
                                            39916800ull,
                                            479001600ull,
                                            6227020800ull,
                                            87178291200ull,
                                            1307674368000ull,
                                            20922789888000ull,
                                            355687428096000ull,
                                            6402373705728000ull,
                                            121645100408832000ull,
                                            2432902008176640000ull};
    long double p = 1.0L;
    for (int e : alpha) {
        p *= (e <= 20) ? static_cast<long double>(table[e])
                       : std::tgammal(static_cast<long double>(e) + 1.0L);
    }
    return p;
}

/// Graded lexicographic order: total degree first, then lexicographically
/// with larger leading exponents earlier ((1,0) precedes (0,1)).
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const int da = degree(a), db = degree(b);
        if (da != db) return da < db;
        for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
            if (a[i] != b[i]) return a[i] > b[i];
        }
        return a.size() < b.size();
    }
};

/// All multi-indices of dimension `dim` and degree <= max_degree in graded
/// lexicographic order; C(dim + d, d) entries.
inline std::vector<MultiIndex> monomial_basis(Eigen::Index dim, int max_degree) {
    if (dim < 1 || max_degree < 0) throw InvalidInput("monomial_basis: bad arguments");
    std::vector<MultiIndex> out;
    MultiIndex scratch(static_cast<std::size_t>(dim), 0);
    const auto emit = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == dim - 1) {
            scratch[static_cast<std::size_t>(slot)] = remaining;
            out.push_back(scratch);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            scratch[static_cast<std::size_t>(slot)] = e;
            self(self, slot + 1, remaining - e);
        }
    };
    for (int d = 0; d <= max_degree; ++d) emit(emit, 0, d);
    return out;
}

/// Multivariate complex polynomial keyed by multi-index, coefficients kept
/// in graded lexicographic order.
class Polynomial {
  public:
    using CoeffMap = std::map<MultiIndex, Complex, GradedLexLess>;

    explicit Polynomial(Eigen::Index dim) : dim_(dim) {
        if (dim_ < 1) throw InvalidInput("Polynomial: dim must be >= 1");
    }

    static Polynomial constant(Eigen::Index dim, Complex c) {
        Polynomial p(dim);
        p.add_coeff(MultiIndex(static_cast<std::size_t>(dim), 0), c);
        return p;
    }
    static Polynomial monomial(const MultiIndex& alpha, Complex c = Complex(1.0, 0.0)) {
        Polynomial p(static_cast<Eigen::Index>(alpha.size()));
        p.add_coeff(alpha, c);
        return p;
    }

    Eigen::Index dim() const { return dim_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    int total_degree() const {
        int d = 0;
        for (const auto& [alpha, c] : coeffs_) d = std::max(d, degree(alpha));
        return d;
    }

    Complex coeff(const MultiIndex& alpha) const {
        const auto it = coeffs_.find(alpha);
        return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
    }

    void add_coeff(const MultiIndex& alpha, Complex c) {
        if (static_cast<Eigen::Index>(alpha.size()) != dim_) {
            throw InvalidInput("Polynomial: multi-index dimension mismatch");
        }
        auto [it, inserted] = coeffs_.try_emplace(alpha, c);
        if (!inserted) it->second += c;
        if (it->second == Complex(0.0, 0.0)) coeffs_.erase(it);
    }

    Complex evaluate(const ComplexVector& z) const {
        if (z.size() != dim_) throw InvalidInput("Polynomial: evaluation dimension mismatch");
        Complex acc(0.0, 0.0);
        for (const auto& [alpha, c] : coeffs_) {
            Complex term = c;
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                for (int k = 0; k < alpha[i]; ++k) term *= z(static_cast<Eigen::Index>(i));
            }
            acc += term;
        }
        return acc;
    }

    Polynomial& operator+=(const Polynomial& rhs) {
        if (rhs.dim_ != dim_) throw InvalidInput("Polynomial: dimension mismatch");
        for (const auto& [alpha, c] : rhs.coeffs_) add_coeff(alpha, c);
        return *this;
    }
    Polynomial& operator*=(Complex c) {
        if (c == Complex(0.0, 0.0)) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [alpha, v] : coeffs_) v *= c;
        return *this;
    }
    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        if (p.dim_ != q.dim_) throw InvalidInput("Polynomial: dimension mismatch");
        Polynomial out(p.dim_);
        MultiIndex gamma(static_cast<std::size_t>(p.dim_), 0);
        for (const auto& [a, ca] : p.coeffs_) {
            for (const auto& [b, cb] : q.coeffs_) {
                for (std::size_t i = 0; i < gamma.size(); ++i) gamma[i] = a[i] + b[i];
                out.add_coeff(gamma, ca * cb);
            }
        }
        return out;
    }

  private:
    Eigen::Index dim_;
    CoeffMap coeffs_;
};

/// Fock inner product of polynomials: <p, q> = sum_alpha alpha! p_a conj(q_a).
inline Complex fock_inner(const Polynomial& p, const Polynomial& q) {
    if (p.dim() != q.dim()) throw InvalidInput("fock_inner: dimension mismatch");
    Complex acc(0.0, 0.0);
    for (const auto& [alpha, c] : p.coeffs()) {
        const Complex qc = q.coeff(alpha);
        if (qc != Complex(0.0, 0.0)) {
            acc += static_cast<double>(multi_factorial(alpha)) * c * std::conj(qc);
        }
    }
    return acc;
}

inline double fock_norm(const Polynomial& p) {
    return std::sqrt(std::max(fock_inner(p, p).real(), 0.0));
}

namespace detail {

/// Degree-one polynomials l_j(z) = (Az + b)_j in the symbol's input
/// variables; building blocks for composing monomials with phi.
inline std::vector<Polynomial> affine_coordinate_forms(const AffineSymbol& sym) {
    const Eigen::Index n = sym.domain_dim();
    std::vector<Polynomial> forms;
    forms.reserve(static_cast<std::size_t>(sym.codomain_dim()));
    for (Eigen::Index j = 0; j < sym.codomain_dim(); ++j) {
        Polynomial l(n);
        if (sym.b(j) != Complex(0.0, 0.0)) {
            l.add_coeff(MultiIndex(static_cast<std::size_t>(n), 0), sym.b(j));
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            if (sym.a(j, k) != Complex(0.0, 0.0)) {
                MultiIndex e(static_cast<std::size_t>(n), 0);
                e[static_cast<std::size_t>(k)] = 1;
                l.add_coeff(e, sym.a(j, k));
            }
        }
        forms.push_back(std::move(l));
    }
    return forms;
}

inline std::size_t basis_count_checked(Eigen::Index dim, int max_degree, std::size_t cap) {
    // C(dim + d, d) with overflow-safe incremental products
    long double count = 1.0L;
    for (int i = 1; i <= max_degree; ++i) {
        count *= static_cast<long double>(dim + i) / static_cast<long double>(i);
        if (count > 2.0L * static_cast<long double>(cap)) break;
    }
    const auto rounded = static_cast<std::size_t>(count + 0.5L);
    if (rounded > cap) throw TooLarge("truncation basis exceeds the size cap");
    return rounded;
}

}  // namespace detail

/// p(Az + b): multinomial expansion by repeated multiplication with the
/// coordinate forms, memoized over monomial predecessors.
inline Polynomial poly_compose_affine(const Polynomial& p, const AffineSymbol& sym) {
    if (p.dim() != sym.codomain_dim()) {
        throw InvalidInput("poly_compose_affine: polynomial must be in the symbol output variables");
    }
    const Eigen::Index n = sym.domain_dim();
    const std::vector<Polynomial> forms = detail::affine_coordinate_forms(sym);
    std::map<MultiIndex, Polynomial, GradedLexLess> memo;
    const auto composed_monomial = [&](auto&& self, const MultiIndex& beta) -> const Polynomial& {
        auto it = memo.find(beta);
        if (it != memo.end()) return it->second;
        if (degree(beta) == 0) {
            return memo.emplace(beta, Polynomial::constant(n, Complex(1.0, 0.0))).first->second;
        }
        std::size_t j = 0;
        while (beta[j] == 0) ++j;
        MultiIndex pred = beta;
        --pred[j];
        const Polynomial& prev = self(self, pred);
        return memo.emplace(beta, prev * forms[j]).first->second;
    };
    Polynomial out(n);
    for (const auto& [beta, c] : p.coeffs()) {
        Polynomial term = composed_monomial(composed_monomial, beta);
        term *= c;
        out += term;
    }
    return out;
}

/// Matrix of C_phi in the orthonormal bases {z^beta / sqrt(beta!)} (columns,
/// input side, m variables) -> {z^alpha / sqrt(alpha!)} (rows, output side,
/// n variables): entry [alpha, beta] = sqrt(alpha!/beta!) [z^alpha](z^beta o phi).
/// Graded-triangular: zero whenever |alpha| > |beta|.
struct GalerkinMatrix {
    int max_degree = 0;
    Eigen::Index input_vars = 0;   // m, variables of the domain space H(C^m)
    Eigen::Index output_vars = 0;  // n
    std::vector<MultiIndex> row_basis;  // B_d(n)
    std::vector<MultiIndex> col_basis;  // B_d(m)
    ComplexMatrix matrix;
};

inline GalerkinMatrix galerkin_matrix(const AffineSymbol& sym, int max_degree,
                                      std::size_t basis_cap = 5000) {
    if (max_degree < 0) throw InvalidInput("galerkin_matrix: degree must be >= 0");
    detail::basis_count_checked(sym.domain_dim(), max_degree, basis_cap);
    detail::basis_count_checked(sym.codomain_dim(), max_degree, basis_cap);

    GalerkinMatrix g;
    g.max_degree = max_degree;
    g.input_vars = sym.codomain_dim();
    g.output_vars = sym.domain_dim();
    g.row_basis = monomial_basis(g.output_vars, max_degree);
    g.col_basis = monomial_basis(g.input_vars, max_degree);

    std::map<MultiIndex, Eigen::Index, GradedLexLess> row_index, col_index;
    for (std::size_t i = 0; i < g.row_basis.size(); ++i) {
        row_index.emplace(g.row_basis[i], static_cast<Eigen::Index>(i));
    }
    for (std::size_t i = 0; i < g.col_basis.size(); ++i) {
        col_index.emplace(g.col_basis[i], static_cast<Eigen::Index>(i));
    }

    const std::vector<Polynomial> forms = detail::affine_coordinate_forms(sym);
    std::vector<Polynomial> composed;
    composed.reserve(g.col_basis.size());
    composed.push_back(Polynomial::constant(g.output_vars, Complex(1.0, 0.0)));

    g.matrix = ComplexMatrix::Zero(static_cast<Eigen::Index>(g.row_basis.size()),
                                   static_cast<Eigen::Index>(g.col_basis.size()));
    g.matrix(0, 0) = Complex(1.0, 0.0);
    for (std::size_t t = 1; t < g.col_basis.size(); ++t) {
        const MultiIndex& beta = g.col_basis[t];
        std::size_t j = 0;
        while (beta[j] == 0) ++j;
        MultiIndex pred = beta;
        --pred[j];
        composed.push_back(composed[static_cast<std::size_t>(col_index.at(pred))] * forms[j]);
        const double lf_beta = log_multi_factorial(beta);
        for (const auto& [alpha, c] : composed.back().coeffs()) {
            g.matrix(row_index.at(alpha), static_cast<Eigen::Index>(t)) =
                c * std::exp(0.5 * (log_multi_factorial(alpha) - lf_beta));
        }
    }
    return g;
}

/// sigma_max of the compression; a lower bound for ||C_phi|| when bounded.
/// The matrix exists for unbounded symbols too, but then grows without
/// bound as the degree increases.
inline double truncated_norm(const AffineSymbol& sym, int max_degree) {
    return operator_norm(galerkin_matrix(sym, max_degree).matrix);
}

/// Top singular direction of the compression on the output side H(C^n) (the
/// side where a bounded C_phi attains its norm at a kernel), rendered as a
/// unit-Fock-norm polynomial. Converges to the extremal kernel k_{w0}. The
/// leading coefficient (first graded index with |coeff| > 1e-8) is rotated
/// to be real positive.
inline Polynomial truncated_top_vector(const AffineSymbol& sym, int max_degree) {
    const GalerkinMatrix g = galerkin_matrix(sym, max_degree);
    const SvdResult dec = svd(g.matrix);
    const ComplexVector top = dec.u.col(0);
    Polynomial p(g.output_vars);
    for (std::size_t i = 0; i < g.row_basis.size(); ++i) {
        const Complex c = top(static_cast<Eigen::Index>(i));
        if (c != Complex(0.0, 0.0)) {
            p.add_coeff(g.row_basis[i],
                        c * std::exp(-0.5 * log_multi_factorial(g.row_basis[i])));
        }
    }
    for (const auto& [alpha, c] : p.coeffs()) {
        const double weighted = std::abs(c) * std::exp(0.5 * log_multi_factorial(alpha));
        if (weighted > 1e-8) {
            p *= std::conj(c) / std::abs(c);
            break;
        }
    }
    return p;
}

/// Degree-d projection of the kernel: P_d K_w = sum_{|alpha| <= d}
/// conj(w)^alpha z^alpha / alpha!; reproduces p(w) for deg p <= d.
inline Polynomial kernel_projection(const ComplexVector& w, int max_degree) {
    if (w.size() < 1) throw InvalidInput("kernel_projection: empty point");
    if (max_degree < 0) throw InvalidInput("kernel_projection: degree must be >= 0");
    Polynomial p(w.size());
    for (const MultiIndex& alpha : monomial_basis(w.size(), max_degree)) {
        Complex c(1.0, 0.0);
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            for (int k = 0; k < alpha[i]; ++k) c *= std::conj(w(static_cast<Eigen::Index>(i)));
        }
        p.add_coeff(alpha, c * std::exp(-log_multi_factorial(alpha)));
    }
    return p;
}

struct ConvergenceRow {
    int degree = 0;
    double truncated_norm = 0.0;
    std::optional<double> exact_norm;    // absent for unbounded symbols
    std::optional<double> relative_gap;  // (exact - truncated) / exact
};

/// Truncated norms for d = 0..max_degree against the closed-form norm. The
/// full matrix is assembled once; each degree is its leading graded block.
inline std::vector<ConvergenceRow> convergence_report(const AffineSymbol& sym, int max_degree,
                                                      const Tolerances& tol = {}) {
    const SymbolReport report = analyze(sym, tol);
    const GalerkinMatrix g = galerkin_matrix(sym, max_degree);

    std::vector<Eigen::Index> rows_at(static_cast<std::size_t>(max_degree) + 1, 0);
    std::vector<Eigen::Index> cols_at(static_cast<std::size_t>(max_degree) + 1, 0);
    for (const auto& alpha : g.row_basis) {
        for (int d = degree(alpha); d <= max_degree; ++d) ++rows_at[static_cast<std::size_t>(d)];
    }
    for (const auto& beta : g.col_basis) {
        for (int d = degree(beta); d <= max_degree; ++d) ++cols_at[static_cast<std::size_t>(d)];
    }

    std::vector<ConvergenceRow> out;
    out.reserve(static_cast<std::size_t>(max_degree) + 1);
    ComplexVector warm;  // top vector of the previous block, zero-padded
    for (int d = 0; d <= max_degree; ++d) {
        const Eigen::Index r = rows_at[static_cast<std::size_t>(d)];
        const Eigen::Index c = cols_at[static_cast<std::size_t>(d)];
        const ComplexMatrix block = g.matrix.topLeftCorner(r, c);
        double sigma;
        if (std::max(r, c) > 1024) {
            ComplexVector seed = ComplexVector::Zero(c);
            if (warm.size() > 0) seed.head(warm.size()) = warm;
            sigma = detail::power_sigma_max(block, &seed);
            warm = seed;
        } else {
            const SvdResult dec = svd(block);
            sigma = dec.sigma(0);
            warm = dec.v.col(0);
        }
        ConvergenceRow row;
        row.degree = d;
        row.truncated_norm = sigma;
        if (report.bounded) {
            const double exact = std::exp(*report.log_norm);
            row.exact_norm = exact;
            row.relative_gap = (exact - sigma) / exact;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace fockna
