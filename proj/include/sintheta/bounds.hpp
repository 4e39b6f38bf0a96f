#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sintheta/decomposition.hpp"
#include "sintheta/matrix.hpp"
#include "sintheta/subspace.hpp"

namespace sintheta {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Slack allowed when asserting a proved inequality on computed quantities.
constexpr double kSpectralSlack = 1e-8;
constexpr double kAlgebraicSlack = 1e-10;

/// Contiguous block of spectral indices, 1-based: r <= s, d = s - r + 1.
struct BlockSelection {
    std::size_t r;
    std::size_t s;

    BlockSelection(std::size_t r_, std::size_t s_) : r(r_), s(s_) {
        if (r < 1 || r > s)
            throw std::invalid_argument("BlockSelection: need 1 <= r <= s");
    }
    std::size_t d() const { return s - r + 1; }
};

/// Population eigen-gaps around the selected block plus the classical
/// sample-dependent delta of the original theorem.
struct GapInfo {
    double upper_gap = kInf;        // lambda_{r-1} - lambda_r, lambda_0 := +inf
    double lower_gap = kInf;        // lambda_s - lambda_{s+1}, lambda_{p+1} := -inf
    double population_gap = kInf;   // min of the two
    double classical_delta = kInf;  // delta of the classical theorem; may be <= 0
};

namespace detail {

inline void require_descending(const std::vector<double>& v, const char* who) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] < v[i + 1])
            throw std::invalid_argument(std::string(who) + ": spectrum not nonincreasing at index " +
                                        std::to_string(i + 1));
}

inline void require_selection(const BlockSelection& sel, std::size_t p, const char* who) {
    if (sel.s > p)
        throw std::invalid_argument(std::string(who) + ": s = " + std::to_string(sel.s) +
                                    " exceeds dimension " + std::to_string(p));
}

}  // namespace detail

inline GapInfo population_gap(const std::vector<double>& eigenvalues, const BlockSelection& sel) {
    detail::require_descending(eigenvalues, "population_gap");
    detail::require_selection(sel, eigenvalues.size(), "population_gap");
    GapInfo g;
    const std::size_t p = eigenvalues.size();
    g.upper_gap = (sel.r == 1) ? kInf : eigenvalues[sel.r - 2] - eigenvalues[sel.r - 1];
    g.lower_gap = (sel.s == p) ? kInf : eigenvalues[sel.s - 1] - eigenvalues[sel.s];
    g.population_gap = std::min(g.upper_gap, g.lower_gap);
    return g;
}

/// Classical delta: the distance from the excluded sample eigenvalues
/// {lhat_j : j < r or j > s} to the population interval [lambda_s, lambda_r].
/// +inf when the block covers the whole spectrum.
inline double classical_delta(const std::vector<double>& pop_eigs,
                              const std::vector<double>& samp_eigs,
                              const BlockSelection& sel) {
    detail::require_descending(pop_eigs, "classical_delta");
    detail::require_descending(samp_eigs, "classical_delta");
    if (pop_eigs.size() != samp_eigs.size())
        throw std::invalid_argument("classical_delta: spectra length mismatch");
    detail::require_selection(sel, pop_eigs.size(), "classical_delta");
    const double hi = pop_eigs[sel.r - 1];
    const double lo = pop_eigs[sel.s - 1];
    double delta = kInf;
    for (std::size_t j = 1; j <= samp_eigs.size(); ++j) {
        if (j >= sel.r && j <= sel.s) continue;
        const double x = samp_eigs[j - 1];
        const double dist = std::max({lo - x, x - hi, 0.0});
        delta = std::min(delta, dist);
    }
    return delta;
}

/// One evaluated bound with its matching observed quantity.  `ratio` is
/// bound / observed, absent when observed is (numerically) zero.
struct BoundLine {
    double observed = 0.0;
    double bound = 0.0;
    bool holds = false;
    std::optional<double> ratio;
};

namespace detail {

inline BoundLine make_line(double observed, double bound, double slack, const char* what) {
    BoundLine l;
    l.observed = observed;
    l.bound = bound;
    l.holds = observed <= bound + slack;
    if (!l.holds)
        throw SoundnessViolation(std::string(what) + ": observed " + std::to_string(observed) +
                                 " exceeds bound " + std::to_string(bound));
    if (observed > 1e-14) l.ratio = bound / observed;
    return l;
}

}  // namespace detail

/// Everything evaluated on one (pop, samp, selection) symmetric instance.
struct BoundReport {
    std::size_t r = 0, s = 0, d = 0;
    GapInfo gaps;
    double diff_op_norm = 0.0;
    double diff_frob_norm = 0.0;

    double observed_sin_theta_frob = 0.0;
    double observed_sin_theta_op = 0.0;
    double observed_alignment_distance = 0.0;

    // Classical theorem, both norms; absent when delta <= 0 (precondition of
    // the classical theorem fails -- "inapplicable", not an error).
    std::optional<BoundLine> classical_frob;
    std::optional<BoundLine> classical_op;

    BoundLine variant_sin;          // Frobenius sin Theta vs population-gap bound
    BoundLine variant_align;        // alignment distance vs sqrt(2) x that
    BoundLine sharp_numerator_sin;  // same denominators, numerator ||Vhat L - S Vhat||_F
    BoundLine sharp_numerator_align;

    // d = 1 only: corollary quantities with the oriented eigenvector.
    std::optional<BoundLine> corollary_sin;
    std::optional<BoundLine> corollary_diff;

    bool numerator_min_is_operator = false;  // which term attained the numerator min
    bool degenerate_full_block = false;      // r=1, s=p: subspaces coincide trivially
};

namespace detail {

struct FramePair {
    SubspaceFrame vhat;
    SubspaceFrame v;
};

inline FramePair select_frames(const SpectralDecomposition& pop,
                               const SpectralDecomposition& samp,
                               const BlockSelection& sel) {
    return {SubspaceFrame(samp.eigenvectors.columns(sel.r - 1, sel.s)),
            SubspaceFrame(pop.eigenvectors.columns(sel.r - 1, sel.s))};
}

// The variant sin/align bounds and the sharp-numerator refinement, shared between the symmetric
// and the Gram-reduced singular-vector paths.  `numerator_scale` is 1 for the
// symmetric case and the (2 sigma_1 + ||diff||_op) factor route supplies its
// own numerators directly.
inline void fill_variant_block(BoundReport& rep, const FramePair& fr, double gap,
                               double min_numerator, bool min_is_op,
                               double sharp_numerator) {
    rep.observed_sin_theta_frob = sin_theta_frobenius(fr.vhat, fr.v);
    rep.observed_sin_theta_op = sin_theta_operator(fr.vhat, fr.v);
    rep.observed_alignment_distance = procrustes_align(fr.vhat, fr.v).distance;
    rep.numerator_min_is_operator = min_is_op;

    const double sin_bound = 2.0 * min_numerator / gap;
    const double align_bound = std::sqrt(2.0) * sin_bound;
    rep.variant_sin = make_line(rep.observed_sin_theta_frob, sin_bound, kSpectralSlack,
                                "variant sin-theta bound");
    rep.variant_align = make_line(rep.observed_alignment_distance, align_bound, kSpectralSlack,
                                  "variant alignment bound");

    const double sharp_sin = sharp_numerator / gap;
    const double sharp_align = std::sqrt(2.0) * sharp_sin;
    if (sharp_sin > sin_bound + kAlgebraicSlack)
        throw SoundnessViolation("sharp-numerator bound exceeds the variant bound");
    rep.sharp_numerator_sin = make_line(rep.observed_sin_theta_frob, sharp_sin, kSpectralSlack,
                                        "sharp-numerator sin-theta bound");
    rep.sharp_numerator_align = make_line(rep.observed_alignment_distance, sharp_align,
                                          kSpectralSlack, "sharp-numerator alignment bound");
}

}  // namespace detail

/// Classical sample-gap bound ||diff||/delta in the requested norm.  Returns
/// the inapplicable marker (nullopt) when delta <= 0.
enum class NormKind { frobenius, op };

inline std::optional<BoundLine> classical_dk_bound(const SymmetricMatrix& pop,
                                                   const SymmetricMatrix& samp,
                                                   const BlockSelection& sel, NormKind norm) {
    const auto pe = sym_eig(pop);
    const auto se = sym_eig(samp);
    const double delta = classical_delta(pe.eigenvalues, se.eigenvalues, sel);
    if (delta <= 0.0) return std::nullopt;
    const auto fr = detail::select_frames(pe, se, sel);
    const DenseMatrix diff = samp.dense() - pop.dense();
    if (norm == NormKind::frobenius)
        return detail::make_line(sin_theta_frobenius(fr.vhat, fr.v), frobenius_norm(diff) / delta,
                                 kSpectralSlack, "classical Frobenius bound");
    return detail::make_line(sin_theta_operator(fr.vhat, fr.v), operator_norm(diff) / delta,
                             kSpectralSlack, "classical operator bound");
}

/// Full evaluation of one symmetric instance: classical (both norms), the
/// population-gap variant, the sharp-numerator refinement, and for d=1 the
/// corollary.  Throws PreconditionError when the population gap vanishes and
/// SoundnessViolation if any proved inequality fails numerically.
inline BoundReport variant_bounds(const SymmetricMatrix& pop, const SymmetricMatrix& samp,
                                  const BlockSelection& sel) {
    if (pop.dim() != samp.dim())
        throw std::invalid_argument("variant_bounds: dimension mismatch");
    detail::require_selection(sel, pop.dim(), "variant_bounds");
    const auto pe = sym_eig(pop);
    const auto se = sym_eig(samp);

    BoundReport rep;
    rep.r = sel.r;
    rep.s = sel.s;
    rep.d = sel.d();
    rep.gaps = population_gap(pe.eigenvalues, sel);
    rep.gaps.classical_delta = classical_delta(pe.eigenvalues, se.eigenvalues, sel);
    if (rep.gaps.population_gap <= 0.0)
        throw PreconditionError("variant_bounds: population gap " +
                                std::to_string(rep.gaps.population_gap) +
                                " is not positive (upper " + std::to_string(rep.gaps.upper_gap) +
                                ", lower " + std::to_string(rep.gaps.lower_gap) + ")");
    rep.degenerate_full_block = (sel.r == 1 && sel.s == pop.dim());

    const DenseMatrix diff = samp.dense() - pop.dense();
    rep.diff_op_norm = operator_norm(diff);
    rep.diff_frob_norm = frobenius_norm(diff);

    const auto fr = detail::select_frames(pe, se, sel);
    const double sqrt_d = std::sqrt(static_cast<double>(sel.d()));
    const double op_term = sqrt_d * rep.diff_op_norm;
    const bool min_is_op = op_term <= rep.diff_frob_norm;
    const double min_num = std::min(op_term, rep.diff_frob_norm);

    // Sharp numerator ||Vhat Lambda - Sigma Vhat||_F with population Lambda.
    DenseMatrix vhat_lambda = fr.vhat.entries();
    for (std::size_t i = 0; i < vhat_lambda.rows(); ++i)
        for (std::size_t j = 0; j < vhat_lambda.cols(); ++j)
            vhat_lambda(i, j) *= pe.eigenvalues[sel.r - 1 + j];
    const double sharp_num = frobenius_norm(vhat_lambda - pop.dense() * fr.vhat.entries());

    detail::fill_variant_block(rep, fr, rep.gaps.population_gap, min_num, min_is_op, sharp_num);

    if (rep.gaps.classical_delta > 0.0) {
        rep.classical_frob =
            detail::make_line(rep.observed_sin_theta_frob,
                              rep.diff_frob_norm / rep.gaps.classical_delta, kSpectralSlack,
                              "classical Frobenius bound");
        rep.classical_op =
            detail::make_line(rep.observed_sin_theta_op,
                              rep.diff_op_norm / rep.gaps.classical_delta, kSpectralSlack,
                              "classical operator bound");
    }

    if (sel.d() == 1) {
        std::vector<double> v(pop.dim()), vhat(pop.dim());
        for (std::size_t i = 0; i < pop.dim(); ++i) {
            v[i] = fr.v.entries()(i, 0);
            vhat[i] = fr.vhat.entries()(i, 0);
        }
        const auto oriented = orient_sign(vhat, v);
        double dist2 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double dd = oriented[i] - v[i];
            dist2 += dd * dd;
        }
        const double cor_bound = 2.0 * rep.diff_op_norm / rep.gaps.population_gap;
        rep.corollary_sin = detail::make_line(rep.observed_sin_theta_op, cor_bound,
                                              kSpectralSlack, "corollary sin-theta bound");
        rep.corollary_diff = detail::make_line(std::sqrt(dist2), std::sqrt(2.0) * cor_bound,
                                               kSpectralSlack, "corollary vector-difference bound");
    }
    return rep;
}

/// d = 1 corollary on index j.
inline BoundReport corollary_bounds(const SymmetricMatrix& pop, const SymmetricMatrix& samp,
                                    std::size_t j) {
    return variant_bounds(pop, samp, BlockSelection(j, j));
}

/// Sharp-numerator fragment alone (the full report carries it too).
inline std::pair<BoundLine, BoundLine> sharp_numerator_bounds(const SymmetricMatrix& pop,
                                                              const SymmetricMatrix& samp,
                                                              const BlockSelection& sel) {
    const auto rep = variant_bounds(pop, samp, sel);
    return {rep.sharp_numerator_sin, rep.sharp_numerator_align};
}

enum class SingularSide { right, left };

/// Count of singular values above 1e-10 * sigma_1.
inline std::size_t numerical_rank(const std::vector<double>& sigma) {
    if (sigma.empty()) return 0;
    const double tol = 1e-10 * sigma.front();
    std::size_t rank = 0;
    for (double s : sigma)
        if (s > tol) ++rank;
    return rank;
}

/// Singular-vector bounds (right or left).  The gap lives on the squared
/// singular values, i.e. the eigenvalues of A^T A (right) or A A^T (left),
/// padded with zeros up to the relevant Gram dimension.  The boundary
/// convention sigma_{n+1}^2 := -inf fires only when the block reaches that
/// Gram dimension; a literal reading of the rank-based convention would make
/// the bound vanish for s = rank(A) < min(p,q), which is unsound.
inline BoundReport svd_variant_bounds(const DenseMatrix& pop, const DenseMatrix& samp,
                                      const BlockSelection& sel, SingularSide side) {
    if (pop.rows() != samp.rows() || pop.cols() != samp.cols())
        throw std::invalid_argument("svd_variant_bounds: shape mismatch");
    const auto pf = svd(pop);
    const auto sf = svd(samp);
    const std::size_t rank = numerical_rank(pf.singular_values);
    if (sel.s > rank)
        throw PreconditionError("svd_variant_bounds: s = " + std::to_string(sel.s) +
                                " exceeds rank(A) = " + std::to_string(rank));

    const std::size_t gram_dim = (side == SingularSide::right) ? pop.cols() : pop.rows();
    auto sq = [&](std::size_t j) {  // sigma_j^2 on the zero-padded Gram spectrum, 1-based
        return (j <= pf.singular_values.size())
                   ? pf.singular_values[j - 1] * pf.singular_values[j - 1]
                   : 0.0;
    };
    BoundReport rep;
    rep.r = sel.r;
    rep.s = sel.s;
    rep.d = sel.d();
    rep.gaps.upper_gap = (sel.r == 1) ? kInf : sq(sel.r - 1) - sq(sel.r);
    rep.gaps.lower_gap = (sel.s == gram_dim) ? kInf : sq(sel.s) - sq(sel.s + 1);
    rep.gaps.population_gap = std::min(rep.gaps.upper_gap, rep.gaps.lower_gap);
    if (rep.gaps.population_gap <= 0.0)
        throw PreconditionError("svd_variant_bounds: singular-value-squared gap " +
                                std::to_string(rep.gaps.population_gap) + " is not positive");
    rep.degenerate_full_block = (sel.r == 1 && sel.s == gram_dim);

    const DenseMatrix diff = samp - pop;
    rep.diff_op_norm = operator_norm(diff);
    rep.diff_frob_norm = frobenius_norm(diff);

    const DenseMatrix& pop_block = (side == SingularSide::right) ? pf.right : pf.left;
    const DenseMatrix& samp_block = (side == SingularSide::right) ? sf.right : sf.left;
    detail::FramePair fr{SubspaceFrame(samp_block.columns(sel.r - 1, sel.s)),
                         SubspaceFrame(pop_block.columns(sel.r - 1, sel.s))};

    const double sigma1 = pf.singular_values.empty() ? 0.0 : pf.singular_values.front();
    const double factor = 2.0 * sigma1 + rep.diff_op_norm;
    const double sqrt_d = std::sqrt(static_cast<double>(sel.d()));
    const double op_term = sqrt_d * rep.diff_op_norm;
    const bool min_is_op = op_term <= rep.diff_frob_norm;
    const double min_num = factor * std::min(op_term, rep.diff_frob_norm);

    // Sharp numerator through the Gram reduction: ||Vhat L - G Vhat||_F with
    // G the population Gram matrix and L its selected eigenvalues.
    const DenseMatrix gram = (side == SingularSide::right)
                                 ? pop.transpose() * pop
                                 : pop * pop.transpose();
    DenseMatrix vhat_lambda = fr.vhat.entries();
    for (std::size_t i = 0; i < vhat_lambda.rows(); ++i)
        for (std::size_t j = 0; j < vhat_lambda.cols(); ++j)
            vhat_lambda(i, j) *= sq(sel.r + j);
    const double sharp_num = frobenius_norm(vhat_lambda - gram * fr.vhat.entries());

    detail::fill_variant_block(rep, fr, rep.gaps.population_gap, min_num, min_is_op, sharp_num);
    return rep;
}

/// Proof-route comparison for the singular-vector theorem: the Gram-reduction
/// bound (the population-gap variant applied to A^T A / A A^T directly) never
/// exceeds the factored (2 sigma_1 + ||diff||_op) bound.
inline double svd_reduction_bound(const DenseMatrix& pop, const DenseMatrix& samp,
                                  const BlockSelection& sel, SingularSide side) {
    const DenseMatrix gp = (side == SingularSide::right) ? pop.transpose() * pop
                                                         : pop * pop.transpose();
    const DenseMatrix gs = (side == SingularSide::right) ? samp.transpose() * samp
                                                         : samp * samp.transpose();
    const DenseMatrix g = gs - gp;
    const auto pf = svd(pop);
    auto sq = [&](std::size_t j) {
        return (j <= pf.singular_values.size())
                   ? pf.singular_values[j - 1] * pf.singular_values[j - 1]
                   : 0.0;
    };
    const std::size_t gram_dim = gp.rows();
    const double upper = (sel.r == 1) ? kInf : sq(sel.r - 1) - sq(sel.r);
    const double lower = (sel.s == gram_dim) ? kInf : sq(sel.s) - sq(sel.s + 1);
    const double gap = std::min(upper, lower);
    if (gap <= 0.0)
        throw PreconditionError("svd_reduction_bound: gap is not positive");
    const double sqrt_d = std::sqrt(static_cast<double>(sel.d()));
    return 2.0 * std::min(sqrt_d * operator_norm(g), frobenius_norm(g)) / gap;
}

/// Submultiplicativity factor checks used in the singular-vector proof:
/// ||Ahat^T Ahat - A^T A|| <= (2 sigma_1 + ||Ahat - A||_op) ||Ahat - A|| in
/// both the operator and the Frobenius norm.
struct FactorInequalityCheck {
    SpectrumCheck op;
    SpectrumCheck frob;
};

inline FactorInequalityCheck svd_factor_inequality_check(const DenseMatrix& pop,
                                                         const DenseMatrix& samp) {
    const DenseMatrix g = samp.transpose() * samp - pop.transpose() * pop;
    const DenseMatrix diff = samp - pop;
    const double sigma1 = operator_norm(pop);
    const double diff_op = operator_norm(diff);
    const double factor = 2.0 * sigma1 + diff_op;
    FactorInequalityCheck out;
    out.op = {operator_norm(g), factor * diff_op, false};
    out.op.holds = out.op.lhs <= out.op.rhs + kSpectralSlack;
    out.frob = {frobenius_norm(g), factor * frobenius_norm(diff), false};
    out.frob.holds = out.frob.lhs <= out.frob.rhs + kSpectralSlack;
    return out;
}

}  // namespace sintheta
