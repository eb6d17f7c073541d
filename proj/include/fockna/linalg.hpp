// Dense complex linear algebra: SVD, spectral norm, Hermitian PSD square
// root, minimal-norm least squares and range membership. These are the
// primitives the symbol classification and the truncation oracle sit on.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "fockna/types.hpp"

namespace fockna {

/// m = u * sigma.asDiagonal() * v.adjoint(); sigma non-negative, descending.
struct SvdResult {
    ComplexMatrix u;
    Eigen::VectorXd sigma;
    ComplexMatrix v;
};

inline SvdResult svd(const ComplexMatrix& m, bool full = false) {
    if (m.rows() < 1 || m.cols() < 1 || !all_finite(m)) {
        throw InvalidInput("svd: input must be non-empty and finite");
    }
    const unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                               : (Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (!full && std::max(m.rows(), m.cols()) > 256) {
        Eigen::BDCSVD<ComplexMatrix> dec(m, opts);
        return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
    }
    Eigen::JacobiSVD<ComplexMatrix> dec(m, opts);
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

namespace detail {

/// Largest singular value by iterating x <- M*M x. Used for matrices too
/// large to factor outright; `warm` (if given) seeds the iteration and is
/// overwritten with the best converged iterate.
inline double power_sigma_max(const ComplexMatrix& m, ComplexVector* warm = nullptr) {
    const Eigen::Index n = m.cols();
    double best = 0.0;
    ComplexVector best_x;
    for (int attempt = 0; attempt < 3; ++attempt) {
        ComplexVector x;
        if (attempt == 0 && warm != nullptr && warm->size() == n && warm->norm() > 0) {
            x = *warm;
        } else if (attempt == 0) {
            x = ComplexVector::Constant(n, Complex(1.0, 0.0));
        } else {
            // deterministic pseudo-random restart
            x = ComplexVector(n);
            std::uint64_t s = 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(attempt + 1);
            for (Eigen::Index i = 0; i < n; ++i) {
                s = s * 6364136223846793005ull + 1442695040888963407ull;
                const double re = static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
                s = s * 6364136223846793005ull + 1442695040888963407ull;
                const double im = static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
                x(i) = Complex(re, im);
            }
        }
        double nx = x.norm();
        if (nx == 0.0) continue;
        x /= nx;
        double prev = -1.0;
        int stable = 0;
        for (int it = 0; it < 20000; ++it) {
            ComplexVector y = m * x;
            ComplexVector z = m.adjoint() * y;
            const double nz = z.norm();
            if (nz == 0.0) break;  // x in the kernel; restart
            const double est = std::sqrt(std::max(std::real(x.dot(z)), 0.0));
            x = z / nz;
            if (prev >= 0.0 && std::abs(est - prev) <= 1e-13 * std::max(est, 1e-300)) {
                if (++stable >= 3) {
                    prev = est;
                    break;
                }
            } else {
                stable = 0;
            }
            prev = est;
        }
        if (prev > best) {
            best = prev;
            best_x = x;
        }
        if (warm != nullptr && attempt == 0 && best > 0) break;
    }
    if (warm != nullptr && best_x.size() == n) *warm = best_x;
    return best;
}

}  // namespace detail

/// Spectral norm sigma_max(M).
inline double operator_norm(const ComplexMatrix& m) {
    if (m.rows() < 1 || m.cols() < 1 || !all_finite(m)) {
        throw InvalidInput("operator_norm: input must be non-empty and finite");
    }
    if (std::max(m.rows(), m.cols()) > 1024) {
        // TODO: replace with a Lanczos bidiagonalization if clustered spectra
        // ever make the power iteration too slow on big compressions.
        return detail::power_sigma_max(m);
    }
    if (std::max(m.rows(), m.cols()) > 64) {
        Eigen::BDCSVD<ComplexMatrix> dec(m);
        return dec.singularValues()(0);
    }
    Eigen::JacobiSVD<ComplexMatrix> dec(m);
    return dec.singularValues()(0);
}

/// Hermitian PSD square root. Eigenvalues in [-1e-12*||H||, 0) are clamped
/// to zero (rounding from forming I - A*A at ||A|| = 1); anything lower is
/// a genuine violation and raises NotPsd.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
    if (h.rows() != h.cols() || h.rows() < 1) {
        throw InvalidInput("psd_sqrt: input must be square");
    }
    if (!all_finite(h)) throw InvalidInput("psd_sqrt: input must be finite");
    const double scale_f = h.norm();
    if ((h - h.adjoint()).norm() > 1e-12 * std::max(scale_f, 1e-300)) {
        throw InvalidInput("psd_sqrt: input is not Hermitian");
    }
    ComplexMatrix sym = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    Eigen::VectorXd lam = es.eigenvalues();
    const double scale = lam.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -1e-12 * scale) {
            std::ostringstream msg;
            msg << "psd_sqrt: eigenvalue " << lam(i) << " below clamp band";
            throw NotPsd(msg.str());
        }
        lam(i) = std::max(lam(i), 0.0);
    }
    const ComplexMatrix r =
        es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    return (r + r.adjoint()) / 2.0;
}

/// Least-squares solve with the minimal-norm solution (orthogonal to ker M).
/// `consistent` reports whether the residual clears the relative threshold;
/// the solution field is always populated with the least-squares minimizer.
struct LeastSquares {
    bool consistent = false;
    ComplexVector x;
    double relative_residual = 0.0;
};

inline LeastSquares min_norm_solve(const ComplexMatrix& m, const ComplexVector& y,
                                   const Tolerances& tol = {}) {
    tol.validate();
    if (y.size() != m.rows()) {
        throw InvalidInput("min_norm_solve: dimension mismatch");
    }
    if (!all_finite(m) || !all_finite(y)) {
        throw InvalidInput("min_norm_solve: inputs must be finite");
    }
    const SvdResult dec = svd(m);
    const double sigma_max = dec.sigma.size() > 0 ? dec.sigma(0) : 0.0;
    const double cutoff = tol.rank_cutoff_rel * sigma_max;
    ComplexVector x = ComplexVector::Zero(m.cols());
    for (Eigen::Index i = 0; i < dec.sigma.size(); ++i) {
        if (dec.sigma(i) > cutoff && dec.sigma(i) > 0.0) {
            x += (dec.u.col(i).dot(y) / dec.sigma(i)) * dec.v.col(i);
        }
    }
    const double ny = y.norm();
    const double residual = (m * x - y).norm();
    LeastSquares out;
    out.x = std::move(x);
    if (ny > 0.0) {
        out.relative_residual = residual / ny;
        out.consistent = residual <= tol.residual_rel * ny;
    } else {
        out.relative_residual = residual;  // absolute fallback for y = 0
        out.consistent = residual <= 1e-12;
    }
    return out;
}

/// True iff y lies in ran(M) up to the consistency tolerance.
inline bool range_membership(const ComplexMatrix& m, const ComplexVector& y,
                             const Tolerances& tol = {}) {
    return min_norm_solve(m, y, tol).consistent;
}

}  // namespace fockna
