// Shared scalar/matrix aliases, tolerance knobs and error types used across
// the library. Everything is dense complex double precision via Eigen.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace fockna {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Hermitian inner product of C^k, linear in the FIRST slot:
/// dot_zw(z, w) = sum_i z_i * conj(w_i). Eigen's .dot() conjugates the first
/// argument, hence the swap.
inline Complex dot_zw(const ComplexVector& z, const ComplexVector& w) {
    return w.dot(z);
}

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Hermitian input to psd_sqrt has an eigenvalue below the clamp band.
struct NotPsd : std::domain_error {
    using std::domain_error::domain_error;
};

/// Kernel point too far from the origin for exp<.,.> in double precision.
struct RangeError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Requested truncation basis exceeds the size cap.
struct TooLarge : std::length_error {
    using std::length_error::length_error;
};

/// Operation requires a bounded composition operator.
struct UnboundedSymbol : std::domain_error {
    using std::domain_error::domain_error;
};

struct Tolerances {
    double rank_cutoff_rel = 1e-12;  // singular values below this (rel) are rank-cut
    double residual_rel = 1e-8;      // least-squares consistency threshold
    double compare_rel = 1e-10;      // agreement checks, boundary snapping

    void validate() const {
        auto ok = [](double t) { return t > 0.0 && t < 1.0; };
        if (!ok(rank_cutoff_rel) || !ok(residual_rel) || !ok(compare_rel)) {
            throw InvalidInput("tolerances must lie strictly in (0, 1)");
        }
    }
};

inline bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }
inline bool all_finite(const ComplexVector& v) { return v.allFinite(); }

}  // namespace fockna
