// Built-in example symbols: finite-dimensional analogs of the classical
// shift constructions on l^2(N). The truncations preserve the defining
// identities exactly (A*b, the sigma = 1 subspace and the minimal-norm
// solutions are unchanged by cutting at a zero tail).
#pragma once

#include <cmath>

#include "fockna/symbol.hpp"
#include "fockna/types.hpp"

namespace fockna::gallery {

/// Right shift e_k -> e_{k+1} (e_dim -> 0) with b = e_1. A*b = 0, so
/// ||C_phi|| = e^{1/2}; K_{e_i} + K_{e_j} is extremal for the adjoint for
/// i, j < dim.
inline AffineSymbol nilpotent_shift(int dim) {
    if (dim < 2) throw InvalidInput("nilpotent_shift: dim must be >= 2");
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) a(k + 1, k) = Complex(1.0, 0.0);
    ComplexVector b = ComplexVector::Zero(dim);
    b(0) = Complex(1.0, 0.0);
    return AffineSymbol(std::move(a), std::move(b));
}

/// Weighted shift S e_1 = mu e_2, S e_k = e_{k+1} otherwise (e_dim -> 0),
/// with b = (1, sqrt(1 - mu^2)/mu, 0, ...). Then (I - S*S)^{1/2} e_1 = S*b,
/// so v = e_1 and ||C_phi||^2 = e^{1 + 1/mu^2}; the operator is bounded but
/// its adjoint does not attain its norm at K_{e_2} + K_{e_3}.
inline AffineSymbol weighted_shift(double mu, int dim) {
    if (!(mu > 0.0) || mu > 1.0) throw InvalidInput("weighted_shift: mu must lie in (0, 1]");
    if (dim < 2) throw InvalidInput("weighted_shift: dim must be >= 2");
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    a(1, 0) = Complex(mu, 0.0);
    for (int k = 1; k + 1 < dim; ++k) a(k + 1, k) = Complex(1.0, 0.0);
    ComplexVector b = ComplexVector::Zero(dim);
    b(0) = Complex(1.0, 0.0);
    b(1) = Complex(std::sqrt(1.0 - mu * mu) / mu, 0.0);
    return AffineSymbol(std::move(a), std::move(b));
}

/// A = [I_n; 0] : C^n -> C^{n+1} with b = e_{n+1}: a genuine non-unitary
/// isometry with A*b = 0. The adjoint attains its norm at every kernel.
inline AffineSymbol isometry_embedding(int n) {
    if (n < 1) throw InvalidInput("isometry_embedding: n must be >= 1");
    ComplexMatrix a = ComplexMatrix::Zero(n + 1, n);
    a.topLeftCorner(n, n).setIdentity();
    ComplexVector b = ComplexVector::Zero(n + 1);
    b(n) = Complex(1.0, 0.0);
    return AffineSymbol(std::move(a), std::move(b));
}

/// phi(z) = a z + b on C.
inline AffineSymbol scalar_symbol(Complex a, Complex b) {
    ComplexMatrix mat(1, 1);
    mat(0, 0) = a;
    ComplexVector vec(1);
    vec(0) = b;
    return AffineSymbol(std::move(mat), std::move(vec));
}

/// phi(z) = z on C^n; ||C_phi|| = 1.
inline AffineSymbol identity_symbol(int n) {
    if (n < 1) throw InvalidInput("identity_symbol: n must be >= 1");
    return AffineSymbol(ComplexMatrix::Identity(n, n), ComplexVector::Zero(n));
}

}  // namespace fockna::gallery
