#include <catch2/catch_amalgamated.hpp>

#include "fockna/gallery.hpp"
#include "fockna/truncation.hpp"
#include "support/generators.hpp"

using namespace fockna;
using fockna::testing::Rng;

namespace {

AffineSymbol scalar(double a, double b) {
    return gallery::scalar_symbol(Complex(a, 0.0), Complex(b, 0.0));
}

}  // namespace

TEST_CASE("monomial_basis: order and counts") {
    const auto b1 = monomial_basis(1, 2);
    REQUIRE(b1 == std::vector<MultiIndex>{{0}, {1}, {2}});

    const auto b2 = monomial_basis(2, 1);
    REQUIRE(b2 == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}});

    const auto b2d2 = monomial_basis(2, 2);
    REQUIRE(b2d2 == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});

    REQUIRE(monomial_basis(3, 4).size() == 35);  // C(7, 4)
}

TEST_CASE("multi-index factorials") {
    REQUIRE(static_cast<double>(multi_factorial({3, 4, 5})) == 6.0 * 24.0 * 120.0);
    REQUIRE(degree(MultiIndex{3, 4, 5}) == 12);
    // log route agrees with the extended-precision route
    const MultiIndex big{20, 20, 20};
    REQUIRE(log_multi_factorial(big) ==
            Catch::Approx(std::log(static_cast<double>(multi_factorial(big)))).epsilon(1e-13));
    REQUIRE(std::isfinite(log_multi_factorial(MultiIndex{60})));
}

TEST_CASE("poly_compose_affine: scalar and swap examples") {
    // z^2 composed with 0.5 z + 1 -> 0.25 z^2 + z + 1
    const Polynomial p = Polynomial::monomial({2});
    const Polynomial q = poly_compose_affine(p, scalar(0.5, 1.0));
    REQUIRE(std::abs(q.coeff({0}) - Complex(1.0, 0.0)) < 1e-14);
    REQUIRE(std::abs(q.coeff({1}) - Complex(1.0, 0.0)) < 1e-14);
    REQUIRE(std::abs(q.coeff({2}) - Complex(0.25, 0.0)) < 1e-14);

    // z1 z2 through the swap is itself
    ComplexMatrix swap = ComplexMatrix::Zero(2, 2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    const AffineSymbol swap_sym(swap, ComplexVector::Zero(2));
    const Polynomial prod = Polynomial::monomial({1, 1});
    const Polynomial swapped = poly_compose_affine(prod, swap_sym);
    REQUIRE(std::abs(swapped.coeff({1, 1}) - Complex(1.0, 0.0)) < 1e-14);
    REQUIRE(swapped.coeffs().size() == 1);
}

TEST_CASE("poly_compose_affine: pointwise agreement with p o phi") {
    Rng rng;
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = fockna::testing::random_symbol(rng, true, 3);
        const AffineSymbol& sym = spec.symbol;
        Polynomial p(sym.codomain_dim());
        for (const auto& beta : monomial_basis(sym.codomain_dim(), 3)) {
            if (rng.uniform(0.0, 1.0) < 0.5) p.add_coeff(beta, rng.complex_gaussian());
        }
        const Polynomial q = poly_compose_affine(p, sym);
        const ComplexVector z = rng.vector(sym.domain_dim());
        const Complex lhs = q.evaluate(z);
        const Complex rhs = p.evaluate(sym(z));
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("galerkin_matrix: diagonal for linear scalar symbols") {
    const AffineSymbol sym = scalar(0.7, 0.0);
    const GalerkinMatrix g = galerkin_matrix(sym, 6);
    for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) {
            const Complex expect =
                r == c ? Complex(std::pow(0.7, static_cast<double>(r)), 0.0) : Complex(0.0, 0.0);
            REQUIRE(std::abs(g.matrix(r, c) - expect) < 1e-13);
        }
    }

    const GalerkinMatrix id = galerkin_matrix(gallery::identity_symbol(2), 3);
    REQUIRE((id.matrix - ComplexMatrix::Identity(id.matrix.rows(), id.matrix.cols())).norm() <
            1e-13);
}

TEST_CASE("galerkin_matrix: orthonormal scaling of the beta = (1) column") {
    const GalerkinMatrix g = galerkin_matrix(scalar(0.5, 1.0), 1);
    REQUIRE(std::abs(g.matrix(0, 1) - Complex(1.0, 0.0)) < 1e-14);  // sqrt(0!/1!) * 1
    REQUIRE(std::abs(g.matrix(1, 1) - Complex(0.5, 0.0)) < 1e-14);  // sqrt(1!/1!) * 0.5
}

TEST_CASE("galerkin_matrix: graded triangularity is exact") {
    Rng rng;
    const auto spec = fockna::testing::random_symbol(rng, true, 3);
    const GalerkinMatrix g = galerkin_matrix(spec.symbol, 4);
    for (std::size_t r = 0; r < g.row_basis.size(); ++r) {
        for (std::size_t c = 0; c < g.col_basis.size(); ++c) {
            if (degree(g.row_basis[r]) > degree(g.col_basis[c])) {
                REQUIRE(g.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) ==
                        Complex(0.0, 0.0));
            }
        }
    }
}

TEST_CASE("galerkin_matrix: size cap") {
    REQUIRE_THROWS_AS(galerkin_matrix(gallery::identity_symbol(8), 10), TooLarge);
}

TEST_CASE("truncated_norm: constants are fixed when b = 0") {
    Rng rng;
    ComplexMatrix a = rng.matrix(2, 2);
    a *= 0.9 / operator_norm(a);
    const AffineSymbol sym(a, ComplexVector::Zero(2));
    for (int d = 0; d <= 5; ++d) {
        REQUIRE(truncated_norm(sym, d) == Catch::Approx(1.0).margin(1e-11));
    }
}

TEST_CASE("truncated_norm: scalar symbol converges to e^{2/3}") {
    const AffineSymbol sym = scalar(0.5, 1.0);
    const double exact = std::exp(2.0 / 3.0);
    double prev = 0.0;
    for (int d = 0; d <= 25; ++d) {
        const double t = truncated_norm(sym, d);
        REQUIRE(t >= prev * (1.0 - 1e-12));            // monotone
        REQUIRE(t <= exact * (1.0 + 1e-9));            // never exceeds the norm
        prev = t;
    }
    REQUIRE(std::abs(prev - exact) <= 1e-6 * exact);
}

TEST_CASE("truncated_norm: nilpotent shift converges to e^{1/2}") {
    const double t = truncated_norm(gallery::nilpotent_shift(3), 12);
    const double exact = std::exp(0.5);
    REQUIRE(std::abs(t - exact) <= 1e-4 * exact);
    REQUIRE(t <= exact * (1.0 + 1e-9));
}

TEST_CASE("truncated_top_vector: constant for b = 0 contractions") {
    Rng rng;
    ComplexMatrix a = rng.matrix(2, 2);
    a *= 0.6 / operator_norm(a);
    const Polynomial p = truncated_top_vector(AffineSymbol(a, ComplexVector::Zero(2)), 4);
    REQUIRE(std::abs(p.coeff({0, 0}) - Complex(1.0, 0.0)) < 1e-9);
    REQUIRE(fock_norm(p) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("truncated_top_vector: approximates the extremal kernel k_{w0}") {
    const Polynomial p = truncated_top_vector(scalar(0.5, 1.0), 20);
    // overlap <p, k_{w0}> = p(w0) e^{-|w0|^2/2} with w0 = 2/3
    ComplexVector w0(1);
    w0(0) = 2.0 / 3.0;
    const Complex overlap = p.evaluate(w0) * std::exp(-w0.squaredNorm() / 2.0);
    REQUIRE(std::abs(overlap) >= 1.0 - 1e-6);
    REQUIRE(fock_norm(p) == Catch::Approx(1.0).margin(1e-10));

    // phase convention: leading coefficient real positive
    const auto& first = *p.coeffs().begin();
    REQUIRE(first.second.imag() == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(first.second.real() > 0.0);
}

TEST_CASE("kernel_projection: truncated exponential series") {
    const Polynomial one = kernel_projection(ComplexVector::Zero(2), 3);
    REQUIRE(std::abs(one.coeff({0, 0}) - Complex(1.0, 0.0)) < 1e-14);
    REQUIRE(one.coeffs().size() == 1);

    ComplexVector w(1);
    w(0) = 1.0;
    const Polynomial p = kernel_projection(w, 2);  // 1 + z + z^2/2
    REQUIRE(std::abs(p.coeff({0}) - Complex(1.0, 0.0)) < 1e-14);
    REQUIRE(std::abs(p.coeff({1}) - Complex(1.0, 0.0)) < 1e-14);
    REQUIRE(std::abs(p.coeff({2}) - Complex(0.5, 0.0)) < 1e-14);

    // ||P_d K_w||^2 climbs to exp(||w||^2)
    ComplexVector e1 = ComplexVector::Zero(2);
    e1(0) = 1.0;
    const Polynomial proj = kernel_projection(e1, 10);
    const double partial = fock_inner(proj, proj).real();
    REQUIRE(std::abs(partial - std::exp(1.0)) <= 1e-7);
    REQUIRE(partial <= std::exp(1.0));
}

TEST_CASE("kernel_projection: reproduces p(w) for deg p <= d") {
    Rng rng;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = rng.uniform_int(1, 3);
        const int d = rng.uniform_int(0, 4);
        Polynomial p(n);
        for (const auto& alpha : monomial_basis(n, d)) {
            p.add_coeff(alpha, rng.complex_gaussian());
        }
        const ComplexVector w = rng.vector(n);
        const Complex via_inner = fock_inner(p, kernel_projection(w, d));
        const Complex direct = p.evaluate(w);
        REQUIRE(std::abs(via_inner - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("semigroup: compressions multiply exactly") {
    Rng rng;
    const auto random_2x2 = [&rng]() {
        ComplexMatrix a = rng.matrix(2, 2);
        a *= rng.uniform(0.1, 0.95) / operator_norm(a);
        return AffineSymbol(a, 0.4 * rng.vector(2));
    };
    for (int trial = 0; trial < 20; ++trial) {
        const AffineSymbol inner = random_2x2();
        const AffineSymbol outer = random_2x2();
        const AffineSymbol composed = compose_symbols(outer, inner);
        const int d = 4;
        const ComplexMatrix lhs = galerkin_matrix(composed, d).matrix;
        const ComplexMatrix rhs =
            galerkin_matrix(inner, d).matrix * galerkin_matrix(outer, d).matrix;
        const double scale = std::max(lhs.cwiseAbs().maxCoeff(), 1.0);
        REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("adjoint compression maps kernel coefficients to kernel coefficients") {
    // M* applied to coefficients of P_d K_w approximates P_d K_{phi(w)}
    const AffineSymbol sym = scalar(0.5, 1.0);
    const int d = 20;
    const GalerkinMatrix g = galerkin_matrix(sym, d);
    const auto coeffs_of = [&](const ComplexVector& w) {
        // orthonormal-basis coefficients: conj(w)^alpha / sqrt(alpha!)
        ComplexVector kappa(static_cast<Eigen::Index>(g.row_basis.size()));
        for (std::size_t i = 0; i < g.row_basis.size(); ++i) {
            Complex c(1.0, 0.0);
            for (int k = 0; k < g.row_basis[i][0]; ++k) c *= std::conj(w(0));
            kappa(static_cast<Eigen::Index>(i)) =
                c * std::exp(-0.5 * log_multi_factorial(g.row_basis[i]));
        }
        return kappa;
    };
    ComplexVector w(1);
    w(0) = 0.6;
    const ComplexVector image = g.matrix.adjoint() * coeffs_of(w);
    const ComplexVector expect = coeffs_of(sym(w));
    REQUIRE((image - expect).norm() <= 1e-6);
}

TEST_CASE("convergence_report: gaps vanish for b = 0") {
    Rng rng;
    ComplexMatrix a = rng.matrix(2, 2);
    a *= 0.8 / operator_norm(a);
    const auto rows = convergence_report(AffineSymbol(a, ComplexVector::Zero(2)), 5);
    REQUIRE(rows.size() == 6);
    for (const auto& row : rows) {
        REQUIRE(std::abs(*row.relative_gap) <= 1e-10);
    }
}

TEST_CASE("convergence_report: scalar symbol reaches 1e-6 by degree 25") {
    const auto rows = convergence_report(scalar(0.5, 1.0), 25);
    REQUIRE(rows.back().degree == 25);
    REQUIRE(std::abs(*rows.back().relative_gap) <= 1e-6);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].truncated_norm >= rows[i - 1].truncated_norm * (1.0 - 1e-12));
    }
}

TEST_CASE("convergence_report: weighted shift stays below e^{5/2}", "[slow]") {
    const auto rows = convergence_report(gallery::weighted_shift(0.5, 4), 14);
    const double exact = std::exp(2.5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i].truncated_norm <= exact * (1.0 + 1e-9));
        if (i > 0) {
            REQUIRE(rows[i].truncated_norm >= rows[i - 1].truncated_norm * (1.0 - 1e-9));
        }
    }
    REQUIRE(*rows.back().exact_norm == Catch::Approx(exact).epsilon(1e-12));
    REQUIRE(*rows.back().relative_gap >= 0.0);
}
