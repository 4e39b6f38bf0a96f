#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sintheta/bounds.hpp"
#include "sintheta/decomposition.hpp"
#include "sintheta/harness.hpp"
#include "sintheta/matrix.hpp"
#include "sintheta/random.hpp"
#include "sintheta/subspace.hpp"

namespace sintheta::verify {

/// One property: given a per-trial RNG stream, return a failure description
/// or nothing.  Every check draws its own instance sizes from the stream.
struct PropertyCheck {
    std::string name;
    std::function<std::optional<std::string>(TrialRng&)> run;
};

namespace detail {

inline std::size_t draw_dim(TrialRng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1)) %
                    (hi - lo + 1);
}

inline std::optional<std::string> fail(const std::string& what, double lhs, double rhs) {
    return what + ": lhs " + std::to_string(lhs) + " vs rhs " + std::to_string(rhs);
}

inline SymmetricMatrix random_symmetric(TrialRng& rng, std::size_t p) {
    const DenseMatrix g = gaussian_matrix(rng, p, p);
    return SymmetricMatrix(0.5 * (g + g.transpose()));
}

inline SubspaceFrame random_frame(TrialRng& rng, std::size_t p, std::size_t d) {
    return SubspaceFrame(haar_frame(rng, p, d));
}

}  // namespace detail

inline std::vector<PropertyCheck> identity_checks() {
    using detail::draw_dim;
    using detail::fail;
    std::vector<PropertyCheck> checks;

    checks.push_back({"lemma1_orthonormal_columns_contract", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t m = draw_dim(rng, 3, 8), n = draw_dim(rng, 3, 8);
        const std::size_t p = draw_dim(rng, 1, m), q = draw_dim(rng, 1, n);
        const DenseMatrix a = gaussian_matrix(rng, m, n);
        const DenseMatrix u = haar_frame(rng, m, p);
        const DenseMatrix w = haar_frame(rng, n, q);
        const double lhs = frobenius_norm(u.transpose() * a * w);
        const double rhs = frobenius_norm(a);
        if (lhs > rhs + 1e-12) return fail("||U^T A W||_F <= ||A||_F", lhs, rhs);
        return std::nullopt;
    }});

    checks.push_back({"lemma1_orthonormal_rows_equality", [](TrialRng& rng) -> std::optional<std::string> {
        // Orthonormal rows force p >= m, q >= n.
        const std::size_t m = draw_dim(rng, 2, 6), n = draw_dim(rng, 2, 6);
        const std::size_t p = draw_dim(rng, m, 8), q = draw_dim(rng, n, 8);
        const DenseMatrix a = gaussian_matrix(rng, m, n);
        const DenseMatrix u = haar_frame(rng, p, m).transpose();  // m x p, orthonormal rows
        const DenseMatrix w = haar_frame(rng, q, n).transpose();  // n x q
        const double lhs = frobenius_norm(u.transpose() * a * w);
        const double rhs = frobenius_norm(a);
        if (std::abs(lhs - rhs) > 1e-10) return fail("||U^T A W||_F = ||A||_F", lhs, rhs);
        return std::nullopt;
    }});

    checks.push_back({"vec_kron_identity", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t m = draw_dim(rng, 2, 5), n = draw_dim(rng, 2, 5);
        const std::size_t k = draw_dim(rng, 2, 5), l = draw_dim(rng, 2, 5);
        const DenseMatrix a = gaussian_matrix(rng, m, n);
        const DenseMatrix b = gaussian_matrix(rng, n, k);
        const DenseMatrix c = gaussian_matrix(rng, k, l);
        const auto lhs = vec(a * b * c);
        const DenseMatrix kp = kron(c.transpose(), a);
        const auto vb = vec(b);
        std::vector<double> diff(lhs.size());
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < vb.size(); ++j) acc += kp(i, j) * vb[j];
            diff[i] = lhs[i] - acc;
        }
        const double err = euclidean_norm(diff);
        if (err > 1e-12) return fail("vec(ABC) = (C^T kron A) vec(B)", err, 1e-12);
        return std::nullopt;
    }});

    checks.push_back({"sin_theta_gram_identity", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 3, 10);
        const std::size_t d = draw_dim(rng, 1, p - 1);
        const auto v = detail::random_frame(rng, p, d);
        const auto vhat = detail::random_frame(rng, p, d);
        const double direct = sin_theta_frobenius(vhat, v);
        const auto pa = principal_angles(vhat, v);
        double sum = 0.0;
        for (double th : pa.angles) sum += std::sin(th) * std::sin(th);
        if (std::abs(direct - std::sqrt(sum)) > 1e-8)
            return fail("d - ||Vhat^T V||_F^2 vs sum sin^2", direct, std::sqrt(sum));
        return std::nullopt;
    }});

    checks.push_back({"alignment_chain", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 3, 10);
        const std::size_t d = draw_dim(rng, 1, p - 1);
        const auto v = detail::random_frame(rng, p, d);
        const auto vhat = detail::random_frame(rng, p, d);
        const auto al = procrustes_align(vhat, v);
        const auto pa = principal_angles(vhat, v);
        double cos_sum = 0.0;
        for (double c : pa.cosines) cos_sum += c;
        const double dist2 = al.distance * al.distance;
        const double expect = 2.0 * static_cast<double>(d) - 2.0 * cos_sum;
        if (std::abs(dist2 - expect) > 1e-8)
            return fail("distance^2 = 2d - 2 sum cos", dist2, expect);
        const double st = sin_theta_frobenius(vhat, v);
        if (dist2 > 2.0 * st * st + 1e-8)
            return fail("distance^2 <= 2 ||sin Theta||_F^2", dist2, 2.0 * st * st);
        return std::nullopt;
    }});

    checks.push_back({"sin2theta_identity", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 2, 10);
        std::vector<double> v(p), vh(p);
        for (std::size_t i = 0; i < p; ++i) {
            v[i] = rng.gaussian();
            vh[i] = rng.gaussian();
        }
        const double nv = euclidean_norm(v), nh = euclidean_norm(vh);
        for (std::size_t i = 0; i < p; ++i) {
            v[i] /= nv;
            vh[i] /= nh;
        }
        const auto oriented = orient_sign(vh, v);
        const auto chk = sin2theta_identity_check(oriented, v);
        if (!chk.agree) return fail("sin^2 2theta identity", chk.lhs, chk.rhs);
        return std::nullopt;
    }});

    checks.push_back({"d1_difference_vs_sin_theta", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 2, 10);
        const auto v = detail::random_frame(rng, p, 1);
        const auto vhat = detail::random_frame(rng, p, 1);
        std::vector<double> vv(p), vh(p);
        for (std::size_t i = 0; i < p; ++i) {
            vv[i] = v.entries()(i, 0);
            vh[i] = vhat.entries()(i, 0);
        }
        const auto oriented = orient_sign(vh, vv);
        double dist2 = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            const double d = oriented[i] - vv[i];
            dist2 += d * d;
        }
        const double st = sin_theta_operator(vhat, v);
        if (std::sqrt(dist2) > std::sqrt(2.0) * st + 1e-10)
            return fail("||vhat - v|| <= sqrt(2) sin theta", std::sqrt(dist2),
                        std::sqrt(2.0) * st);
        return std::nullopt;
    }});

    checks.push_back({"basis_invariance", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 3, 10);
        const std::size_t d = draw_dim(rng, 1, p - 1);
        const auto v = detail::random_frame(rng, p, d);
        const auto vhat = detail::random_frame(rng, p, d);
        const DenseMatrix rot = haar_orthogonal(rng, d);
        const SubspaceFrame vhat_rot(vhat.entries() * rot);
        const double a = sin_theta_frobenius(vhat, v);
        const double b = sin_theta_frobenius(vhat_rot, v);
        if (std::abs(a - b) > 1e-10) return fail("sin theta basis invariance", a, b);
        const double da = procrustes_align(vhat, v).distance;
        const double db = procrustes_align(vhat_rot, v).distance;
        if (std::abs(da - db) > 1e-10) return fail("alignment basis invariance", da, db);
        const double sa = sin_theta_frobenius(vhat, v);
        const double sb = sin_theta_frobenius(v, vhat);
        if (std::abs(sa - sb) > 1e-10) return fail("sin theta symmetry", sa, sb);
        return std::nullopt;
    }});

    return checks;
}

inline std::vector<PropertyCheck> bound_checks() {
    using detail::draw_dim;
    using detail::fail;
    std::vector<PropertyCheck> checks;

    checks.push_back({"weyl_and_wielandt_hoffman", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 2, 10);
        const auto pop = detail::random_symmetric(rng, p);
        const auto samp = detail::random_symmetric(rng, p);
        const auto pe = sym_eig(pop);
        const auto se = sym_eig(samp);
        const DenseMatrix diff = samp.dense() - pop.dense();
        const auto wy = weyl_check(pe, se, operator_norm(diff));
        if (!wy.holds) return fail("Weyl", wy.lhs, wy.rhs);
        const auto wh = wielandt_hoffman_check(pe, se, frobenius_norm(diff));
        if (!wh.holds) return fail("Wielandt-Hoffman", wh.lhs, wh.rhs);
        if (operator_norm(diff) > frobenius_norm(diff) + 1e-12)
            return fail("op norm <= Frobenius norm", operator_norm(diff), frobenius_norm(diff));
        return std::nullopt;
    }});

    checks.push_back({"symmetric_bound_soundness", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 4, 12);
        std::vector<double> spectrum(p, 1.0);
        spectrum[0] = 5.0;
        const DenseMatrix q = haar_orthogonal(rng, p);
        const SymmetricMatrix pop(q * DenseMatrix::diagonal(spectrum) * q.transpose());
        const SymmetricMatrix samp(pop.dense() + 0.05 * goe_noise(rng, p));
        try {
            (void)variant_bounds(pop, samp, BlockSelection(1, 1));
        } catch (const SoundnessViolation& e) {
            return std::string(e.what());
        }
        return std::nullopt;
    }});

    checks.push_back({"proof_chain_inequality", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 4, 10);
        std::vector<double> spectrum(p);
        for (std::size_t i = 0; i < p; ++i)
            spectrum[i] = static_cast<double>(p - i) + 0.3 * rng.uniform();
        std::sort(spectrum.rbegin(), spectrum.rend());
        const std::size_t r = draw_dim(rng, 1, p - 1);
        const std::size_t s = draw_dim(rng, r, p - 1);
        const BlockSelection sel(r, s);
        const DenseMatrix q = haar_orthogonal(rng, p);
        const SymmetricMatrix pop(q * DenseMatrix::diagonal(spectrum) * q.transpose());
        const SymmetricMatrix samp(pop.dense() + 0.05 * goe_noise(rng, p));
        const auto pe = sym_eig(pop);
        const auto se = sym_eig(samp);

        const SubspaceFrame v(pe.eigenvectors.columns(r - 1, s));
        const SubspaceFrame vhat(se.eigenvectors.columns(r - 1, s));
        // V1: the complementary eigenvector columns, Lambda1 their eigenvalues.
        const std::size_t d = sel.d();
        DenseMatrix v1(p, p - d);
        std::vector<double> lambda1;
        std::size_t col = 0;
        for (std::size_t j = 0; j < p; ++j) {
            if (j + 1 >= r && j + 1 <= s) continue;
            for (std::size_t i = 0; i < p; ++i) v1(i, col) = pe.eigenvectors(i, j);
            lambda1.push_back(pe.eigenvalues[j]);
            ++col;
        }
        const auto gaps = population_gap(pe.eigenvalues, sel);
        const double st = sin_theta_frobenius(vhat, v);

        DenseMatrix m = v1.transpose() * vhat.entries();  // (p-d) x d
        DenseMatrix mid = m;
        for (std::size_t i = 0; i < mid.rows(); ++i)
            for (std::size_t jj = 0; jj < mid.cols(); ++jj)
                mid(i, jj) = m(i, jj) * pe.eigenvalues[r - 1 + jj] - lambda1[i] * m(i, jj);
        const double middle = frobenius_norm(mid);

        DenseMatrix vhat_lambda = vhat.entries();
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t jj = 0; jj < d; ++jj)
                vhat_lambda(i, jj) *= pe.eigenvalues[r - 1 + jj];
        const double outer = frobenius_norm(vhat_lambda - pop.dense() * vhat.entries());

        if (gaps.population_gap * st > middle + 1e-8)
            return fail("gap ||sin Theta|| <= ||V1^T Vhat L - L1 V1^T Vhat||",
                        gaps.population_gap * st, middle);
        if (middle > outer + 1e-8)
            return fail("||V1^T Vhat L - L1 V1^T Vhat|| <= ||Vhat L - Sigma Vhat||", middle,
                        outer);
        if (std::abs(st - frobenius_norm(m)) > 1e-8)
            return fail("||sin Theta||_F = ||V1^T Vhat||_F", st, frobenius_norm(m));
        return std::nullopt;
    }});

    checks.push_back({"svd_bound_soundness", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t pr = draw_dim(rng, 4, 8);
        const std::size_t qc = draw_dim(rng, 3, pr);
        std::vector<double> sigma(qc);
        for (std::size_t i = 0; i < qc; ++i) sigma[i] = static_cast<double>(qc - i) + 0.5;
        const DenseMatrix u = haar_frame(rng, pr, qc);
        const DenseMatrix v = haar_frame(rng, qc, qc);
        const DenseMatrix pop = u * DenseMatrix::diagonal(sigma) * v.transpose();
        const DenseMatrix samp = pop + 0.02 * gaussian_matrix(rng, pr, qc);
        try {
            const auto right = svd_variant_bounds(pop, samp, BlockSelection(1, 1),
                                                  SingularSide::right);
            const auto left = svd_variant_bounds(pop, samp, BlockSelection(1, 1),
                                                 SingularSide::left);
            const auto factor = svd_factor_inequality_check(pop, samp);
            if (!factor.op.holds) return fail("factor inequality (op)", factor.op.lhs, factor.op.rhs);
            if (!factor.frob.holds)
                return fail("factor inequality (Frobenius)", factor.frob.lhs, factor.frob.rhs);
            const double reduction =
                svd_reduction_bound(pop, samp, BlockSelection(1, 1), SingularSide::right);
            if (right.variant_sin.bound < reduction - 1e-8)
                return fail("factored bound >= Gram reduction bound", right.variant_sin.bound,
                            reduction);
            (void)left;
        } catch (const SoundnessViolation& e) {
            return std::string(e.what());
        }
        return std::nullopt;
    }});

    checks.push_back({"scale_invariance", [](TrialRng& rng) -> std::optional<std::string> {
        const std::size_t p = draw_dim(rng, 4, 8);
        std::vector<double> spectrum(p);
        for (std::size_t i = 0; i < p; ++i) spectrum[i] = static_cast<double>(p - i);
        const DenseMatrix q = haar_orthogonal(rng, p);
        const SymmetricMatrix pop(q * DenseMatrix::diagonal(spectrum) * q.transpose());
        const SymmetricMatrix samp(pop.dense() + 0.05 * goe_noise(rng, p));
        const double c = 0.5 + 4.0 * rng.uniform();
        const SymmetricMatrix pop_c(c * pop.dense());
        const SymmetricMatrix samp_c(c * samp.dense());
        const auto a = variant_bounds(pop, samp, BlockSelection(1, 1));
        const auto b = variant_bounds(pop_c, samp_c, BlockSelection(1, 1));
        const double rel = std::abs(a.variant_sin.bound - b.variant_sin.bound) /
                           std::max(1e-30, a.variant_sin.bound);
        if (rel > 1e-10) return fail("variant bound scale invariance", a.variant_sin.bound,
                                     b.variant_sin.bound);
        if (std::abs(a.observed_sin_theta_frob - b.observed_sin_theta_frob) > 1e-8)
            return fail("observed sin theta scale invariance", a.observed_sin_theta_frob,
                        b.observed_sin_theta_frob);
        return std::nullopt;
    }});

    return checks;
}

struct SuiteOptions {
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    bool inject_failure = false;  // test-only hook: corrupts one check
};

/// Runs the requested checks `trials` times each.  On the first failure the
/// reproduction seed and trial index are printed and the suite stops.
inline bool run_suite(const std::vector<PropertyCheck>& checks, const SuiteOptions& opt,
                      std::ostream& out) {
    for (const PropertyCheck& check : checks) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            TrialRng rng(opt.seed ^ std::hash<std::string>{}(check.name), t);
            std::optional<std::string> failure;
            if (opt.inject_failure && &check == &checks.front() && t == 0) {
                failure = "injected failure (forced-failure fixture)";
            } else {
                try {
                    failure = check.run(rng);
                } catch (const std::exception& e) {
                    failure = std::string("exception: ") + e.what();
                }
            }
            if (failure) {
                out << "FAIL " << check.name << " trial " << t << " seed " << opt.seed << ": "
                    << *failure << "\n";
                return false;
            }
        }
        out << "ok   " << check.name << " (" << opt.trials << " trials)\n";
    }
    return true;
}

}  // namespace sintheta::verify
