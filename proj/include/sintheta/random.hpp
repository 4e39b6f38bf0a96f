#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sintheta/decomposition.hpp"
#include "sintheta/matrix.hpp"

namespace sintheta {

/// SplitMix64 mixing step (Steele, Lea & Flood 2014); used to derive
/// independent per-trial stream seeds from (seed, trial_index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-trial random stream: mt19937_64 seeded with a SplitMix64 hash of
/// (seed, trial_index).  Gaussians come from a hand-rolled Box-Muller so the
/// byte stream is fixed by this header alone, not by the standard library's
/// unspecified normal_distribution algorithm.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial_index)
        : engine_(splitmix64(splitmix64(seed) ^ (trial_index + 1))) {}

    /// Uniform in (0, 1].
    double uniform() {
        const std::uint64_t bits = engine_() >> 11;  // 53 random bits
        return (static_cast<double>(bits) + 1.0) * 0x1p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline DenseMatrix gaussian_matrix(TrialRng& rng, std::size_t rows, std::size_t cols) {
    DenseMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.gaussian();
    return g;
}

/// Haar-distributed n x n orthogonal matrix: QR of a Gaussian matrix in the
/// unique convention with positive diagonal of R (Gram-Schmidt yields exactly
/// that, which is the sign correction that makes the distribution Haar).
inline DenseMatrix haar_orthogonal(TrialRng& rng, std::size_t n) {
    DenseMatrix g = gaussian_matrix(rng, n, n);
    DenseMatrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = g(i, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += col[i] * q(i, k);
                for (std::size_t i = 0; i < n; ++i) col[i] -= dot * q(i, k);
            }
        }
        const double nrm = euclidean_norm(col);
        if (nrm < 1e-12)
            throw std::runtime_error("haar_orthogonal: degenerate Gaussian draw");
        for (std::size_t i = 0; i < n; ++i) q(i, j) = col[i] / nrm;
    }
    return q;
}

/// First d columns of a Haar orthogonal matrix: a uniformly random
/// orthonormal p x d frame.
inline DenseMatrix haar_frame(TrialRng& rng, std::size_t p, std::size_t d) {
    return haar_orthogonal(rng, p).columns(0, d);
}

/// Symmetric Gaussian noise in the GOE convention: W = (G + G^T)/sqrt(2), so
/// off-diagonal variance 1 and diagonal variance 2.
inline DenseMatrix goe_noise(TrialRng& rng, std::size_t p) {
    const DenseMatrix g = gaussian_matrix(rng, p, p);
    return (1.0 / std::sqrt(2.0)) * (g + g.transpose());
}

}  // namespace sintheta
