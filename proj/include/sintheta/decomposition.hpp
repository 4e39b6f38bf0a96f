#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sintheta/matrix.hpp"

namespace sintheta {

/// Eigendecomposition of a symmetric matrix: Sigma = Q diag(lambda) Q^T with
/// eigenvalues descending and orthonormal columns in Q.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // descending
    DenseMatrix eigenvectors;         // p x p, column j pairs with eigenvalues[j]
};

/// Thin SVD A = U diag(sigma) V^T with m = min(p, q) columns in U and V and
/// nonincreasing, nonnegative singular values.
struct SvdFactorization {
    DenseMatrix left;                    // p x m
    std::vector<double> singular_values;  // descending, >= 0
    DenseMatrix right;                   // q x m
};

namespace detail {

constexpr double kOffDiagTol = 1e-14;  // times ||input||_F
constexpr int kMaxSweeps = 60;

// Fix the sign of column j of m: entry of largest magnitude positive, ties
// broken by lowest row index.  Returns true if the column was flipped.
inline bool fix_column_sign(DenseMatrix& m, std::size_t j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double a = std::abs(m(i, j));
        if (a > best) { best = a; arg = i; }
    }
    if (m(arg, j) < 0.0) {
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = -m(i, j);
        return true;
    }
    return false;
}

// Descending sort permutation, stable in the original index for ties.
inline std::vector<std::size_t> descending_order(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
}

inline double off_diagonal_mass(const DenseMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver.  Deterministic: fixed sweep order (row-cyclic),
/// descending eigenvalues with ties kept in pre-sort order, and in each
/// eigenvector the entry of largest magnitude is made positive.
inline SpectralDecomposition sym_eig(const SymmetricMatrix& m) {
    const std::size_t p = m.dim();
    DenseMatrix a = m.dense();
    DenseMatrix q = DenseMatrix::identity(p);
    const double target = detail::kOffDiagTol * frobenius_norm(a);

    int sweep = 0;
    for (; sweep < detail::kMaxSweeps; ++sweep) {
        if (detail::off_diagonal_mass(a) <= target) break;
        for (std::size_t r = 0; r + 1 < p; ++r) {
            for (std::size_t c = r + 1; c < p; ++c) {
                const double arc = a(r, c);
                if (arc == 0.0) continue;
                const double theta = (a(c, c) - a(r, r)) / (2.0 * arc);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                const double tau = sn / (1.0 + cs);

                const double arr = a(r, r), acc = a(c, c);
                a(r, r) = arr - t * arc;
                a(c, c) = acc + t * arc;
                a(r, c) = 0.0;
                a(c, r) = 0.0;
                for (std::size_t k = 0; k < p; ++k) {
                    if (k != r && k != c) {
                        const double akr = a(k, r), akc = a(k, c);
                        a(k, r) = a(r, k) = akr - sn * (akc + tau * akr);
                        a(k, c) = a(c, k) = akc + sn * (akr - tau * akc);
                    }
                    const double qkr = q(k, r), qkc = q(k, c);
                    q(k, r) = qkr - sn * (qkc + tau * qkr);
                    q(k, c) = qkc + sn * (qkr - tau * qkc);
                }
            }
        }
    }
    const double residual = detail::off_diagonal_mass(a);
    if (residual > target)
        throw ConvergenceError("sym_eig: off-diagonal residual " + std::to_string(residual) +
                               " above target " + std::to_string(target) + " after " +
                               std::to_string(detail::kMaxSweeps) + " sweeps");

    std::vector<double> diag(p);
    for (std::size_t i = 0; i < p; ++i) diag[i] = a(i, i);
    const auto order = detail::descending_order(diag);

    SpectralDecomposition out;
    out.eigenvalues.resize(p);
    out.eigenvectors = DenseMatrix(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        out.eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < p; ++i) out.eigenvectors(i, j) = q(i, order[j]);
        detail::fix_column_sign(out.eigenvectors, j);
    }
    return out;
}

namespace detail {

// One-sided Jacobi on the columns of a (rows >= cols assumed by the caller).
// Rotations are accumulated into v.  Converges when every column pair is
// numerically orthogonal relative to the column norms.
inline void one_sided_jacobi(DenseMatrix& a, DenseMatrix& v) {
    const std::size_t n = a.cols();
    const std::size_t p = a.rows();
    const double scale = frobenius_norm(a);
    if (scale == 0.0) return;
    const double target = kOffDiagTol * scale * scale;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                for (std::size_t k = 0; k < p; ++k) {
                    aii += a(k, i) * a(k, i);
                    ajj += a(k, j) * a(k, j);
                    aij += a(k, i) * a(k, j);
                }
                off += aij * aij;
                if (std::abs(aij) <= 1e-15 * std::sqrt(aii) * std::sqrt(ajj)) continue;
                const double theta = (ajj - aii) / (2.0 * aij);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (std::size_t k = 0; k < p; ++k) {
                    const double aki = a(k, i), akj = a(k, j);
                    a(k, i) = cs * aki - sn * akj;
                    a(k, j) = sn * aki + cs * akj;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vki = v(k, i), vkj = v(k, j);
                    v(k, i) = cs * vki - sn * vkj;
                    v(k, j) = sn * vki + cs * vkj;
                }
            }
        }
        if (std::sqrt(2.0 * off) <= target) return;
    }
    throw ConvergenceError("svd: one-sided Jacobi did not converge within " +
                           std::to_string(kMaxSweeps) + " sweeps");
}

// Deterministic extension of the orthonormal columns of u (first `have` of
// them) to `want` columns, by pivoted orthogonalization of identity columns:
// each new column is the identity column with the largest residual after
// projecting out what is already there (ties to the lowest index).
inline void complete_orthonormal_columns(DenseMatrix& u, std::size_t have, std::size_t want) {
    const std::size_t p = u.rows();
    for (std::size_t slot = have; slot < want; ++slot) {
        std::size_t best_k = p;
        double best_norm = -1.0;
        std::vector<double> best_r;
        for (std::size_t k = 0; k < p; ++k) {
            std::vector<double> r(p, 0.0);
            r[k] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {  // reorthogonalize once
                for (std::size_t j = 0; j < slot; ++j) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < p; ++i) dot += r[i] * u(i, j);
                    for (std::size_t i = 0; i < p; ++i) r[i] -= dot * u(i, j);
                }
            }
            const double nrm = euclidean_norm(r);
            if (nrm > best_norm + 1e-14) {
                best_norm = nrm;
                best_k = k;
                best_r = std::move(r);
            }
        }
        if (best_k == p || best_norm <= 1e-8)
            throw std::runtime_error("orthonormal completion: no candidate column left");
        for (std::size_t i = 0; i < p; ++i) u(i, slot) = best_r[i] / best_norm;
    }
}

}  // namespace detail

/// One-sided Jacobi SVD (wide inputs are handled by factoring the transpose).
/// Sign convention matches sym_eig, applied to the left vectors with the
/// matching right vector flipped alongside.
inline SvdFactorization svd(const DenseMatrix& input) {
    const bool flipped = input.rows() < input.cols();
    DenseMatrix a = flipped ? input.transpose() : input;
    const std::size_t p = a.rows(), n = a.cols();

    DenseMatrix v = DenseMatrix::identity(n);
    detail::one_sided_jacobi(a, v);

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < p; ++i) s += a(i, j) * a(i, j);
        norms[j] = std::sqrt(s);
    }
    const auto order = detail::descending_order(norms);
    const double sigma1 = norms.empty() ? 0.0 : norms[order[0]];
    const double zero_tol = 1e-15 * sigma1;

    DenseMatrix u(p, n);
    DenseMatrix vr(n, n);
    std::vector<double> sig(n);
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        sig[j] = norms[src];
        for (std::size_t i = 0; i < n; ++i) vr(i, j) = v(i, src);
        if (sig[j] > zero_tol) {
            for (std::size_t i = 0; i < p; ++i) u(i, j) = a(i, src) / sig[j];
            nonzero = j + 1;
        } else {
            sig[j] = 0.0;
        }
    }
    detail::complete_orthonormal_columns(u, nonzero, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (detail::fix_column_sign(u, j))
            for (std::size_t i = 0; i < n; ++i) vr(i, j) = -vr(i, j);
    }

    SvdFactorization out;
    out.singular_values = std::move(sig);
    if (flipped) {
        out.left = std::move(vr);
        out.right = std::move(u);
    } else {
        out.left = std::move(u);
        out.right = std::move(vr);
    }
    return out;
}

/// Largest singular value; for symmetric input this equals max_j |lambda_j|.
inline double operator_norm(const DenseMatrix& a) {
    const auto f = svd(a);
    return f.singular_values.empty() ? 0.0 : f.singular_values.front();
}

inline double operator_norm(const SymmetricMatrix& a) { return operator_norm(a.dense()); }

/// Weyl's inequality check: max_j |lhat_j - l_j| <= ||diff||_op.
struct SpectrumCheck {
    double lhs;
    double rhs;
    bool holds;
};

inline SpectrumCheck weyl_check(const SpectralDecomposition& pop,
                                const SpectralDecomposition& samp,
                                double diff_op_norm) {
    if (pop.eigenvalues.size() != samp.eigenvalues.size())
        throw std::invalid_argument("weyl_check: dimension mismatch");
    double lhs = 0.0;
    for (std::size_t j = 0; j < pop.eigenvalues.size(); ++j)
        lhs = std::max(lhs, std::abs(samp.eigenvalues[j] - pop.eigenvalues[j]));
    return {lhs, diff_op_norm, lhs <= diff_op_norm + 1e-10};
}

/// Wielandt-Hoffman check: sqrt(sum_j (lhat_j - l_j)^2) <= ||diff||_F.
inline SpectrumCheck wielandt_hoffman_check(const SpectralDecomposition& pop,
                                            const SpectralDecomposition& samp,
                                            double diff_frob_norm) {
    if (pop.eigenvalues.size() != samp.eigenvalues.size())
        throw std::invalid_argument("wielandt_hoffman_check: dimension mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < pop.eigenvalues.size(); ++j) {
        const double d = samp.eigenvalues[j] - pop.eigenvalues[j];
        sum += d * d;
    }
    const double lhs = std::sqrt(sum);
    return {lhs, diff_frob_norm, lhs <= diff_frob_norm + 1e-10};
}

}  // namespace sintheta
