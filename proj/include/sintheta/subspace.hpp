#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sintheta/decomposition.hpp"
#include "sintheta/matrix.hpp"

namespace sintheta {

/// p x d block with orthonormal columns.
class SubspaceFrame {
public:
    static constexpr double kOrthoTol = 1e-10;

    explicit SubspaceFrame(DenseMatrix entries) : m_(std::move(entries)) {
        if (m_.cols() > m_.rows())
            throw std::invalid_argument("SubspaceFrame: more columns than ambient dimension");
        double worst = 0.0;
        for (std::size_t i = 0; i < m_.cols(); ++i)
            for (std::size_t j = i; j < m_.cols(); ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < m_.rows(); ++k) dot += m_(k, i) * m_(k, j);
                worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
            }
        if (worst > kOrthoTol)
            throw std::invalid_argument("SubspaceFrame: columns not orthonormal (residual " +
                                        std::to_string(worst) + ")");
    }

    std::size_t ambient_dim() const { return m_.rows(); }
    std::size_t block_dim() const { return m_.cols(); }
    const DenseMatrix& entries() const { return m_; }

private:
    DenseMatrix m_;
};

/// Principal angles theta_1 <= ... <= theta_d in [0, pi/2] together with the
/// descending singular values of Vhat^T V they came from.
struct PrincipalAngleSet {
    std::vector<double> angles;   // ascending
    std::vector<double> cosines;  // descending, in [0, 1]
};

/// Orthogonal d x d rotation minimizing ||Vhat O - V||_F, with the minimum.
struct Alignment {
    DenseMatrix rotation;
    double distance;
};

namespace detail {

inline void require_same_shape(const SubspaceFrame& a, const SubspaceFrame& b,
                               const char* who) {
    if (a.ambient_dim() != b.ambient_dim() || a.block_dim() != b.block_dim())
        throw std::invalid_argument(std::string(who) + ": frame shape mismatch");
}

}  // namespace detail

inline PrincipalAngleSet principal_angles(const SubspaceFrame& vhat, const SubspaceFrame& v) {
    detail::require_same_shape(vhat, v, "principal_angles");
    const auto f = svd(vhat.entries().transpose() * v.entries());
    PrincipalAngleSet out;
    out.cosines.reserve(f.singular_values.size());
    for (double s : f.singular_values) {
        if (s > 1.0 + 1e-8)
            throw std::invalid_argument("principal_angles: cosine " + std::to_string(s) +
                                        " exceeds 1; frames are invalid");
        out.cosines.push_back(std::clamp(s, 0.0, 1.0));
    }
    out.angles.resize(out.cosines.size());
    for (std::size_t j = 0; j < out.cosines.size(); ++j)
        out.angles[j] = std::acos(out.cosines[j]);
    return out;
}

namespace detail {

// (I - V V^T) Vhat: its singular values are exactly sin theta_1..sin theta_d,
// and the entries stay cancellation-free when the subspaces nearly coincide
// (unlike sqrt(d - ||Vhat^T V||_F^2), which loses half the digits near zero).
inline DenseMatrix projection_residual(const SubspaceFrame& vhat, const SubspaceFrame& v) {
    return vhat.entries() - v.entries() * (v.entries().transpose() * vhat.entries());
}

}  // namespace detail

/// ||sin Theta(Vhat, V)||_F, via the identity
/// d - ||Vhat^T V||_F^2 = ||(I - V V^T) Vhat||_F^2.
inline double sin_theta_frobenius(const SubspaceFrame& vhat, const SubspaceFrame& v) {
    detail::require_same_shape(vhat, v, "sin_theta_frobenius");
    return frobenius_norm(detail::projection_residual(vhat, v));
}

/// sin of the largest principal angle.
inline double sin_theta_operator(const SubspaceFrame& vhat, const SubspaceFrame& v) {
    detail::require_same_shape(vhat, v, "sin_theta_operator");
    return std::min(1.0, operator_norm(detail::projection_residual(vhat, v)));
}

/// Orthogonal Procrustes: O = O1 O2^T from the SVD O1 diag(cos) O2^T of
/// Vhat^T V.  Well-defined even when Vhat^T V is singular.
inline Alignment procrustes_align(const SubspaceFrame& vhat, const SubspaceFrame& v) {
    detail::require_same_shape(vhat, v, "procrustes_align");
    const auto f = svd(vhat.entries().transpose() * v.entries());
    Alignment out{f.left * f.right.transpose(), 0.0};
    out.distance = frobenius_norm(vhat.entries() * out.rotation - v.entries());
    return out;
}

/// Returns +-vhat so that the result has nonnegative inner product with v.
inline std::vector<double> orient_sign(const std::vector<double>& vhat,
                                       const std::vector<double>& v) {
    if (vhat.size() != v.size())
        throw std::invalid_argument("orient_sign: dimension mismatch");
    const double nh = euclidean_norm(vhat), nv = euclidean_norm(v);
    if (nh < 1e-14 || nv < 1e-14)
        throw std::invalid_argument("orient_sign: zero vector");
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += vhat[i] * v[i];
    std::vector<double> out = vhat;
    if (dot < 0.0)
        for (double& x : out) x = -x;
    return out;
}

/// Both sides of the d=1 sin(2 theta) identity: the inner-product form on the
/// left, the |vhat - v| form on the right.
struct Sin2ThetaCheck {
    double lhs;
    double rhs;
    bool agree;
};

inline Sin2ThetaCheck sin2theta_identity_check(const std::vector<double>& vhat,
                                               const std::vector<double>& v) {
    if (vhat.size() != v.size())
        throw std::invalid_argument("sin2theta_identity_check: dimension mismatch");
    double dot = 0.0, dist2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        dot += vhat[i] * v[i];
        const double d = vhat[i] - v[i];
        dist2 += d * d;
    }
    const double lhs = (2.0 * dot) * (2.0 * dot) * (1.0 - dot * dot);
    const double rhs = 0.25 * dist2 * (4.0 - dist2) * (2.0 - dist2) * (2.0 - dist2);
    return {lhs, rhs, std::abs(lhs - rhs) <= 1e-10};
}

/// p x (p-d) frame V1 with V1^T V1 = I and V^T V1 = 0, built by pivoted
/// orthogonalization of identity columns (deterministic).
inline SubspaceFrame orthonormal_complement(const SubspaceFrame& v) {
    const std::size_t p = v.ambient_dim(), d = v.block_dim();
    if (d == p)
        throw std::invalid_argument("orthonormal_complement: frame already spans the space");
    DenseMatrix work(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < d; ++j) work(i, j) = v.entries()(i, j);
    detail::complete_orthonormal_columns(work, d, p);
    return SubspaceFrame(work.columns(d, p));
}

}  // namespace sintheta
