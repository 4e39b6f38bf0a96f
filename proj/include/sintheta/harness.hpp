#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "sintheta/bounds.hpp"
#include "sintheta/matrix.hpp"
#include "sintheta/random.hpp"

namespace sintheta {

enum class EnsembleKind { spiked_symmetric, rectangular };

/// Description of one Monte Carlo campaign.
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::spiked_symmetric;
    std::size_t p = 0;
    std::size_t q = 0;  // columns; unused for the symmetric ensemble
    std::vector<double> spectrum;  // descending eigenvalues / singular values
    double noise_scale = 0.0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    BlockSelection selection{1, 1};

    void validate() const {
        if (trials < 1) throw std::invalid_argument("EnsembleSpec: trials must be >= 1");
        if (noise_scale < 0.0) throw std::invalid_argument("EnsembleSpec: noise_scale must be >= 0");
        if (spectrum.empty()) throw std::invalid_argument("EnsembleSpec: empty spectrum");
        detail::require_descending(spectrum, "EnsembleSpec");
        if (kind == EnsembleKind::spiked_symmetric) {
            if (p == 0) throw std::invalid_argument("EnsembleSpec: p must be positive");
            if (spectrum.size() != p)
                throw std::invalid_argument("EnsembleSpec: spectrum length " +
                                            std::to_string(spectrum.size()) + " != p = " +
                                            std::to_string(p));
            if (selection.s > p)
                throw std::invalid_argument("EnsembleSpec: selection exceeds p");
        } else {
            if (p == 0 || q == 0)
                throw std::invalid_argument("EnsembleSpec: p and q must be positive");
            if (spectrum.size() > std::min(p, q))
                throw std::invalid_argument("EnsembleSpec: more singular values than min(p, q)");
            for (double s : spectrum)
                if (s < 0.0) throw std::invalid_argument("EnsembleSpec: negative singular value");
            if (selection.s > spectrum.size())
                throw std::invalid_argument("EnsembleSpec: selection exceeds spectrum length");
        }
    }
};

struct TrialRecord {
    std::size_t trial_index = 0;
    BoundReport report;                        // symmetric, or right singular side
    std::optional<BoundReport> left_report;    // rectangular only
    std::optional<FactorInequalityCheck> factor_check;  // rectangular only
    double wall_time_seconds = 0.0;  // in-memory diagnostic; not serialized
};

/// A soundness violation inside a campaign, carrying the counterexample.
class CampaignViolation : public std::runtime_error {
public:
    CampaignViolation(std::size_t trial, std::string msg, DenseMatrix pop_, DenseMatrix samp_)
        : std::runtime_error("trial " + std::to_string(trial) + ": " + std::move(msg)),
          trial_index(trial), pop(std::move(pop_)), samp(std::move(samp_)) {}

    std::size_t trial_index;
    DenseMatrix pop;
    DenseMatrix samp;
};

/// First sharpness example: Sigma = diag(3,...,3,1,...,1) with d threes,
/// Sigmahat = diag(2-eps,...,2-eps,2,...,2) with p-d copies of 2-eps.  The
/// selected top-d subspaces end up orthogonal and the alignment bound is met
/// with ratio exactly 1+eps.
inline std::pair<SymmetricMatrix, SymmetricMatrix> gen_sharpness_diag(std::size_t p,
                                                                      std::size_t d,
                                                                      double eps) {
    if (d < 1 || d > p / 2)
        throw std::invalid_argument("gen_sharpness_diag: need 1 <= d <= floor(p/2)");
    if (eps <= 0.0) throw std::invalid_argument("gen_sharpness_diag: need eps > 0");
    std::vector<double> pop(p, 1.0), samp(p, 2.0);
    for (std::size_t i = 0; i < d; ++i) pop[i] = 3.0;
    for (std::size_t i = 0; i < p - d; ++i) samp[i] = 2.0 - eps;
    return {SymmetricMatrix::diagonal(pop), SymmetricMatrix::diagonal(samp)};
}

/// Second sharpness example: Sigma = diag(3,1) and Sigmahat the same spectrum
/// in an eps-rotated eigenbasis; sin Theta between the top eigenvectors is
/// exactly eps while the corollary bound evaluates to 2 eps.
inline std::pair<SymmetricMatrix, SymmetricMatrix> gen_sharpness_rotation(double eps) {
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("gen_sharpness_rotation: need 0 < eps < 1");
    const double c = std::sqrt(1.0 - eps * eps);
    DenseMatrix vhat(2, 2, {c, -eps, eps, c});
    const DenseMatrix sigmahat = vhat * DenseMatrix::diagonal({3.0, 1.0}) * vhat.transpose();
    return {SymmetricMatrix::diagonal({3.0, 1.0}), SymmetricMatrix(sigmahat)};
}

inline std::pair<SymmetricMatrix, SymmetricMatrix> gen_spiked_symmetric(const EnsembleSpec& spec,
                                                                        std::size_t trial_index) {
    spec.validate();
    if (spec.kind != EnsembleKind::spiked_symmetric)
        throw std::invalid_argument("gen_spiked_symmetric: wrong ensemble kind");
    TrialRng rng(spec.seed, trial_index);
    const DenseMatrix q = haar_orthogonal(rng, spec.p);
    const DenseMatrix pop = q * DenseMatrix::diagonal(spec.spectrum) * q.transpose();
    const SymmetricMatrix pop_sym(pop);
    const DenseMatrix noisy = pop_sym.dense() + spec.noise_scale * goe_noise(rng, spec.p);
    return {pop_sym, SymmetricMatrix(noisy)};
}

inline std::pair<DenseMatrix, DenseMatrix> gen_rectangular(const EnsembleSpec& spec,
                                                           std::size_t trial_index) {
    spec.validate();
    if (spec.kind != EnsembleKind::rectangular)
        throw std::invalid_argument("gen_rectangular: wrong ensemble kind");
    TrialRng rng(spec.seed, trial_index);
    const std::size_t m = spec.spectrum.size();
    const DenseMatrix u = haar_frame(rng, spec.p, m);
    const DenseMatrix v = haar_frame(rng, spec.q, m);
    const DenseMatrix pop = u * DenseMatrix::diagonal(spec.spectrum) * v.transpose();
    const DenseMatrix samp = pop + spec.noise_scale * gaussian_matrix(rng, spec.p, spec.q);
    return {pop, samp};
}

/// Streaming min/mean/max over defined tightness ratios.
struct RatioStats {
    std::size_t count = 0;
    double min = kInf;
    double max = 0.0;
    double sum = 0.0;

    void add(const std::optional<double>& r) {
        if (!r) return;
        ++count;
        min = std::min(min, *r);
        max = std::max(max, *r);
        sum += *r;
    }
    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }
};

struct CampaignSummary {
    std::size_t trials = 0;
    RatioStats variant_sin, variant_align, sharp_sin, sharp_align;
    RatioStats classical_frob, classical_op, corollary_sin, corollary_diff;
    std::size_t classical_inapplicable = 0;
    std::size_t numerator_min_is_operator = 0;
};

struct CampaignResult {
    std::vector<TrialRecord> records;
    CampaignSummary summary;
};

namespace detail {

inline TrialRecord run_one_trial(const EnsembleSpec& spec, std::size_t trial) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.trial_index = trial;
    if (spec.kind == EnsembleKind::spiked_symmetric) {
        const auto [pop, samp] = gen_spiked_symmetric(spec, trial);
        try {
            rec.report = variant_bounds(pop, samp, spec.selection);
        } catch (const SoundnessViolation& e) {
            throw CampaignViolation(trial, e.what(), pop.dense(), samp.dense());
        }
    } else {
        const auto [pop, samp] = gen_rectangular(spec, trial);
        try {
            rec.report = svd_variant_bounds(pop, samp, spec.selection, SingularSide::right);
            rec.left_report = svd_variant_bounds(pop, samp, spec.selection, SingularSide::left);
            rec.factor_check = svd_factor_inequality_check(pop, samp);
            if (!rec.factor_check->op.holds || !rec.factor_check->frob.holds)
                throw SoundnessViolation("Gram-difference factor inequality failed");
            // The factored bound route must dominate the direct Gram reduction.
            for (SingularSide side : {SingularSide::right, SingularSide::left}) {
                const double reduction = svd_reduction_bound(pop, samp, spec.selection, side);
                const BoundReport& rep =
                    (side == SingularSide::right) ? rec.report : *rec.left_report;
                if (rep.variant_sin.bound < reduction - kSpectralSlack)
                    throw SoundnessViolation("factored bound fell below the Gram reduction bound");
            }
        } catch (const SoundnessViolation& e) {
            throw CampaignViolation(trial, e.what(), pop, samp);
        }
    }
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

}  // namespace detail

/// Runs every trial of the campaign.  Trials are independent; with
/// parallel > 1 they are farmed out to threads, and records are merged in
/// trial-index order so the result is schedule-independent.
inline CampaignResult run_campaign(const EnsembleSpec& spec, std::size_t parallel = 1) {
    spec.validate();
    CampaignResult result;
    result.records.resize(spec.trials);

    if (parallel <= 1) {
        for (std::size_t t = 0; t < spec.trials; ++t)
            result.records[t] = detail::run_one_trial(spec, t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(parallel);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < parallel; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = next.fetch_add(1); t < spec.trials;
                         t = next.fetch_add(1))
                        result.records[t] = detail::run_one_trial(spec, t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    CampaignSummary& s = result.summary;
    s.trials = spec.trials;
    for (const TrialRecord& rec : result.records) {
        for (const BoundReport* rep :
             {&rec.report, rec.left_report ? &*rec.left_report : nullptr}) {
            if (!rep) continue;
            s.variant_sin.add(rep->variant_sin.ratio);
            s.variant_align.add(rep->variant_align.ratio);
            s.sharp_sin.add(rep->sharp_numerator_sin.ratio);
            s.sharp_align.add(rep->sharp_numerator_align.ratio);
            if (rep->classical_frob) s.classical_frob.add(rep->classical_frob->ratio);
            if (rep->classical_op)
                s.classical_op.add(rep->classical_op->ratio);
            else if (rep == &rec.report && spec.kind == EnsembleKind::spiked_symmetric)
                ++s.classical_inapplicable;
            if (rep->corollary_sin) s.corollary_sin.add(rep->corollary_sin->ratio);
            if (rep->corollary_diff) s.corollary_diff.add(rep->corollary_diff->ratio);
            if (rep->numerator_min_is_operator) ++s.numerator_min_is_operator;
        }
    }
    return result;
}

}  // namespace sintheta
