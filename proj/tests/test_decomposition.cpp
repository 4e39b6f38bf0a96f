#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sintheta/decomposition.hpp"
#include "sintheta/random.hpp"
#include "sintheta/subspace.hpp"

using namespace sintheta;

namespace {

SymmetricMatrix random_symmetric(std::uint64_t seed, std::size_t p) {
    TrialRng rng(seed, 0);
    const DenseMatrix g = gaussian_matrix(rng, p, p);
    return SymmetricMatrix(0.5 * (g + g.transpose()));
}

double reconstruction_residual(const SymmetricMatrix& m, const SpectralDecomposition& e) {
    DenseMatrix ql = e.eigenvectors;
    for (std::size_t i = 0; i < ql.rows(); ++i)
        for (std::size_t j = 0; j < ql.cols(); ++j) ql(i, j) *= e.eigenvalues[j];
    return frobenius_norm(ql * e.eigenvectors.transpose() - m.dense());
}

double svd_residual(const DenseMatrix& a, const SvdFactorization& f) {
    DenseMatrix us = f.left;
    for (std::size_t i = 0; i < us.rows(); ++i)
        for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= f.singular_values[j];
    return frobenius_norm(us * f.right.transpose() - a);
}

double orthogonality_residual(const DenseMatrix& q) {
    return frobenius_norm(q.transpose() * q - DenseMatrix::identity(q.cols()));
}

}  // namespace

TEST_CASE("sym_eig on diagonal and closed-form inputs") {
    const auto e1 = sym_eig(SymmetricMatrix::diagonal({3.0, 1.0}));
    CHECK(e1.eigenvalues == std::vector<double>{3.0, 1.0});
    CHECK(frobenius_norm(e1.eigenvectors - DenseMatrix::identity(2)) == 0.0);

    const auto e2 = sym_eig(SymmetricMatrix(DenseMatrix(2, 2, {2.0, 1.0, 1.0, 2.0})));
    CHECK(e2.eigenvalues[0] == Catch::Approx(3.0).margin(1e-14));
    CHECK(e2.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(e2.eigenvectors(0, 0) == Catch::Approx(inv_sqrt2).margin(1e-14));
    CHECK(e2.eigenvectors(1, 0) == Catch::Approx(inv_sqrt2).margin(1e-14));
    CHECK(e2.eigenvectors(0, 1) == Catch::Approx(inv_sqrt2).margin(1e-14));
    CHECK(e2.eigenvectors(1, 1) == Catch::Approx(-inv_sqrt2).margin(1e-14));
}

TEST_CASE("sym_eig random 6x6, seed 42: invariants and oracle agreement") {
    const auto m = random_symmetric(42, 6);
    const auto e = sym_eig(m);
    CHECK(reconstruction_residual(m, e) <= 1e-10 * std::max(1.0, frobenius_norm(m)));
    CHECK(orthogonality_residual(e.eigenvectors) <= 1e-10 * 6);
    for (std::size_t j = 0; j + 1 < 6; ++j) CHECK(e.eigenvalues[j] >= e.eigenvalues[j + 1]);

    const auto ref = oracle::eigenvalues(m.dense());
    for (std::size_t j = 0; j < 6; ++j)
        CHECK(e.eigenvalues[j] == Catch::Approx(ref[j]).margin(1e-10));
}

TEST_CASE("sym_eig deterministic sign and ordering") {
    const auto m = random_symmetric(5, 8);
    const auto a = sym_eig(m);
    const auto b = sym_eig(m);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors.data() == b.eigenvectors.data());
    for (std::size_t j = 0; j < 8; ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < 8; ++i)
            if (std::abs(a.eigenvectors(i, j)) > std::abs(best)) best = a.eigenvectors(i, j);
        CHECK(best > 0.0);
    }
}

TEST_CASE("svd on diagonal-like inputs") {
    const DenseMatrix a(3, 2, {2.0, 0.0, 0.0, 1.0, 0.0, 0.0});
    const auto f = svd(a);
    CHECK(f.singular_values == std::vector<double>{2.0, 1.0});
    CHECK(std::abs(f.right(0, 0)) == Catch::Approx(1.0).margin(1e-14));
    CHECK(std::abs(f.right(1, 1)) == Catch::Approx(1.0).margin(1e-14));
    CHECK(svd_residual(a, f) <= 1e-12);

    const auto fi = svd(DenseMatrix::identity(3));
    CHECK(fi.singular_values == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("svd random 5x3, seed 7: invariants and oracle agreement") {
    TrialRng rng(7, 0);
    const DenseMatrix a = gaussian_matrix(rng, 5, 3);
    const auto f = svd(a);
    CHECK(svd_residual(a, f) <= 1e-10 * std::max(1.0, frobenius_norm(a)));
    CHECK(orthogonality_residual(f.left) <= 1e-10 * 3);
    CHECK(orthogonality_residual(f.right) <= 1e-10 * 3);
    const auto ref = oracle::singular_values(a);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(f.singular_values[j] == Catch::Approx(ref[j]).margin(1e-10));
}

TEST_CASE("svd handles wide, rank-deficient and zero matrices") {
    TrialRng rng(19, 0);
    SECTION("wide") {
        const DenseMatrix a = gaussian_matrix(rng, 3, 6);
        const auto f = svd(a);
        CHECK(svd_residual(a, f) <= 1e-10 * frobenius_norm(a));
        CHECK(orthogonality_residual(f.left) <= 1e-10 * 3);
        CHECK(orthogonality_residual(f.right) <= 1e-10 * 3);
    }
    SECTION("rank deficient") {
        const DenseMatrix b = haar_frame(rng, 4, 2);
        const DenseMatrix a = b * b.transpose();  // rank 2 in 4x4
        const auto f = svd(a);
        CHECK(svd_residual(a, f) <= 1e-10 * frobenius_norm(a));
        CHECK(orthogonality_residual(f.left) <= 1e-10 * 4);
        CHECK(f.singular_values[2] <= 1e-12);
    }
    SECTION("zero") {
        const auto f = svd(DenseMatrix(3, 2));
        CHECK(f.singular_values == std::vector<double>{0.0, 0.0});
        CHECK(orthogonality_residual(f.left) <= 1e-12);
    }
}

TEST_CASE("operator norm") {
    CHECK(operator_norm(DenseMatrix::diagonal({-1.1, 1.0})) == Catch::Approx(1.1).margin(1e-12));

    // 2x2 rotation-example difference matrix at eps = 0.1 has operator norm 0.2.
    const double eps = 0.1;
    const double c = std::sqrt(1.0 - eps * eps);
    const DenseMatrix vhat(2, 2, {c, -eps, eps, c});
    const DenseMatrix diff =
        vhat * DenseMatrix::diagonal({3.0, 1.0}) * vhat.transpose() -
        DenseMatrix::diagonal({3.0, 1.0});
    CHECK(operator_norm(diff) == Catch::Approx(2.0 * eps).margin(1e-12));

    TrialRng rng(3, 0);
    const DenseMatrix a = gaussian_matrix(rng, 4, 6);
    CHECK(operator_norm(a) == Catch::Approx(oracle::singular_values(a)[0]).margin(1e-12));
    CHECK(operator_norm(a) <= frobenius_norm(a));
}

TEST_CASE("Weyl and Wielandt-Hoffman checks") {
    const auto pop = sym_eig(SymmetricMatrix::diagonal({1.0, 0.0}));
    const auto samp = sym_eig(SymmetricMatrix::diagonal({1.5, 0.2}));
    const auto wy = weyl_check(pop, samp, 0.5);
    CHECK(wy.lhs == Catch::Approx(0.5).margin(1e-15));
    CHECK(wy.holds);

    const auto same = weyl_check(pop, pop, 0.0);
    CHECK(same.lhs == 0.0);
    CHECK(same.holds);

    const auto popd = sym_eig(SymmetricMatrix::diagonal({3.0, 1.0}));
    const auto sampd = sym_eig(SymmetricMatrix::diagonal({2.0, 2.0}));
    const auto wh = wielandt_hoffman_check(popd, sampd, std::sqrt(2.0));
    CHECK(wh.lhs == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
    CHECK(wh.holds);

    // random pairs, several seeds
    for (std::uint64_t t = 0; t < 10; ++t) {
        TrialRng rng(13, t);
        const DenseMatrix g1 = gaussian_matrix(rng, 5, 5);
        const DenseMatrix g2 = gaussian_matrix(rng, 5, 5);
        const SymmetricMatrix m1(0.5 * (g1 + g1.transpose()));
        const SymmetricMatrix m2(0.5 * (g2 + g2.transpose()));
        const DenseMatrix diff = m2.dense() - m1.dense();
        CHECK(weyl_check(sym_eig(m1), sym_eig(m2), operator_norm(diff)).holds);
        CHECK(wielandt_hoffman_check(sym_eig(m1), sym_eig(m2), frobenius_norm(diff)).holds);
    }

    CHECK_THROWS_AS(weyl_check(pop, sym_eig(SymmetricMatrix::diagonal({1.0, 2.0, 3.0})), 0.0),
                    std::invalid_argument);
}
