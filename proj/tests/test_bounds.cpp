#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sintheta/bounds.hpp"
#include "sintheta/harness.hpp"
#include "sintheta/random.hpp"

using namespace sintheta;

TEST_CASE("population gaps with boundary conventions") {
    const auto g1 = population_gap({3.0, 3.0, 1.0, 1.0}, BlockSelection(1, 2));
    CHECK(std::isinf(g1.upper_gap));
    CHECK(g1.lower_gap == 2.0);
    CHECK(g1.population_gap == 2.0);

    const auto g2 = population_gap({3.0, 1.0}, BlockSelection(1, 2));
    CHECK(std::isinf(g2.population_gap));

    const auto g3 = population_gap({5.0, 4.0, 4.0, 2.0}, BlockSelection(2, 3));
    CHECK(g3.upper_gap == 1.0);
    CHECK(g3.lower_gap == 2.0);
    CHECK(g3.population_gap == 1.0);

    CHECK_THROWS_AS(population_gap({1.0, 2.0}, BlockSelection(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(population_gap({2.0, 1.0}, BlockSelection(1, 3)), std::invalid_argument);
}

TEST_CASE("classical delta") {
    CHECK(classical_delta({3.0, 1.0}, {2.9, 1.1}, BlockSelection(1, 1)) ==
          Catch::Approx(1.9).margin(1e-15));
    CHECK(std::isinf(classical_delta({3.0, 1.0}, {2.9, 1.1}, BlockSelection(1, 2))));

    // diag sharpness instance p=4, d=2, eps=0.1: sorted sample spectrum is
    // (2, 2, 1.9, 1.9); the excluded entries are the two 1.9's, and their
    // distance to the population interval [3, 3] is 1.1.
    const auto [pop, samp] = gen_sharpness_diag(4, 2, 0.1);
    const auto pe = sym_eig(pop);
    const auto se = sym_eig(samp);
    CHECK(classical_delta(pe.eigenvalues, se.eigenvalues, BlockSelection(1, 2)) ==
          Catch::Approx(1.1).margin(1e-12));

    // excluded sample eigenvalue lands inside [lambda_s, lambda_r]: delta = 0
    CHECK(classical_delta({3.0, 1.0}, {4.0, 3.0}, BlockSelection(1, 1)) == 0.0);
    CHECK(classical_delta({3.0, 1.0}, {2.0, 0.5}, BlockSelection(1, 1)) ==
          Catch::Approx(2.5).margin(1e-15));
}

TEST_CASE("classical bound: identical matrices and diagonal perturbation") {
    const auto zero = classical_dk_bound(SymmetricMatrix::diagonal({3.0, 1.0}),
                                         SymmetricMatrix::diagonal({3.0, 1.0}),
                                         BlockSelection(1, 1), NormKind::frobenius);
    REQUIRE(zero.has_value());
    CHECK(zero->observed <= 1e-12);
    CHECK(zero->bound == 0.0);

    const SymmetricMatrix pop = SymmetricMatrix::diagonal({3.0, 1.0});
    const SymmetricMatrix samp = SymmetricMatrix::diagonal({2.9, 1.1});
    const auto frag = classical_dk_bound(pop, samp, BlockSelection(1, 1), NormKind::frobenius);
    REQUIRE(frag.has_value());
    const double diff_f = std::sqrt(0.1 * 0.1 + 0.1 * 0.1);
    CHECK(frag->bound == Catch::Approx(diff_f / 1.9).margin(1e-12));
    CHECK(frag->holds);

    // delta <= 0: inapplicable marker, not an exception
    const auto inap = classical_dk_bound(SymmetricMatrix::diagonal({3.0, 1.0}),
                                         SymmetricMatrix::diagonal({4.0, 3.0}),
                                         BlockSelection(1, 1), NormKind::op);
    CHECK(!inap.has_value());
}

TEST_CASE("variant bounds on the diag sharpness example") {
    const auto [pop, samp] = gen_sharpness_diag(4, 2, 0.1);
    const auto rep = variant_bounds(pop, samp, BlockSelection(1, 2));
    CHECK(rep.observed_alignment_distance == Catch::Approx(2.0).margin(1e-12));
    CHECK(rep.variant_align.bound == Catch::Approx(2.2).margin(1e-12));
    REQUIRE(rep.variant_align.ratio.has_value());
    CHECK(*rep.variant_align.ratio == Catch::Approx(1.1).margin(1e-12));
    CHECK(rep.observed_sin_theta_frob == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
    CHECK(rep.numerator_min_is_operator);

    // sharp-numerator ordering: observed <= sharp <= variant
    CHECK(rep.sharp_numerator_sin.bound <= rep.variant_sin.bound + 1e-10);
    CHECK(rep.observed_sin_theta_frob <= rep.sharp_numerator_sin.bound + 1e-8);
    CHECK(rep.sharp_numerator_align.bound <= 2.2 + 1e-10);
    CHECK(rep.observed_alignment_distance <= rep.sharp_numerator_align.bound + 1e-8);
}

TEST_CASE("variant bounds on the rotation example") {
    const double eps = 0.01;
    const auto [pop, samp] = gen_sharpness_rotation(eps);
    const auto rep = variant_bounds(pop, samp, BlockSelection(1, 1));
    CHECK(rep.observed_sin_theta_op == Catch::Approx(eps).margin(1e-12));
    REQUIRE(rep.corollary_sin.has_value());
    CHECK(rep.corollary_sin->bound == Catch::Approx(2.0 * eps).margin(1e-12));
    REQUIRE(rep.corollary_sin->ratio.has_value());
    CHECK(*rep.corollary_sin->ratio == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("variant bounds: identical matrices and degenerate full block") {
    const SymmetricMatrix m = SymmetricMatrix::diagonal({3.0, 2.0, 1.0});
    const auto rep = variant_bounds(m, m, BlockSelection(1, 1));
    CHECK(rep.observed_sin_theta_frob <= 1e-12);
    CHECK(rep.variant_sin.bound == 0.0);

    const auto full = variant_bounds(m, SymmetricMatrix::diagonal({4.0, 2.5, 0.5}),
                                     BlockSelection(1, 3));
    CHECK(full.degenerate_full_block);
    CHECK(full.observed_sin_theta_frob <= 1e-8);
    CHECK(full.variant_sin.bound == 0.0);
}

TEST_CASE("variant bounds: zero population gap is a precondition error") {
    const SymmetricMatrix pop = SymmetricMatrix::diagonal({2.0, 2.0, 1.0});
    const SymmetricMatrix samp = SymmetricMatrix::diagonal({2.1, 1.9, 1.0});
    CHECK_THROWS_AS(variant_bounds(pop, samp, BlockSelection(2, 2)), PreconditionError);
}

TEST_CASE("corollary bounds") {
    const auto [pop, samp] = gen_sharpness_rotation(0.1);
    const auto rep = corollary_bounds(pop, samp, 1);
    REQUIRE(rep.corollary_diff.has_value());
    CHECK(rep.corollary_diff->observed == Catch::Approx(0.10012523486435176).margin(1e-9));
    CHECK(rep.corollary_diff->bound == Catch::Approx(std::pow(2.0, 1.5) * 0.2 / 2.0).margin(1e-12));
    CHECK(rep.corollary_diff->holds);

    // spiked 8x8 trial, seed 23
    EnsembleSpec spec;
    spec.p = 8;
    spec.spectrum = {5.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    spec.noise_scale = 0.05;
    spec.seed = 23;
    const auto [rp, rs] = gen_spiked_symmetric(spec, 0);
    const auto rrep = corollary_bounds(rp, rs, 1);
    CHECK(rrep.corollary_sin->holds);
    CHECK(rrep.corollary_diff->holds);
}

TEST_CASE("sharp numerator ordering on random instances, seed 29") {
    for (std::uint64_t t = 0; t < 15; ++t) {
        TrialRng rng(29, t);
        const std::size_t p = 6;
        std::vector<double> spectrum{7.0, 5.5, 4.0, 3.0, 2.0, 1.0};
        const DenseMatrix q = haar_orthogonal(rng, p);
        const SymmetricMatrix pop(q * DenseMatrix::diagonal(spectrum) * q.transpose());
        const SymmetricMatrix samp(pop.dense() + 0.05 * goe_noise(rng, p));
        const auto rep = variant_bounds(pop, samp, BlockSelection(2, 3));
        CHECK(rep.observed_sin_theta_frob <= rep.sharp_numerator_sin.bound + 1e-8);
        CHECK(rep.sharp_numerator_sin.bound <= rep.variant_sin.bound + 1e-10);
        CHECK(rep.observed_alignment_distance <= rep.sharp_numerator_align.bound + 1e-8);
        CHECK(rep.sharp_numerator_align.bound <= rep.variant_align.bound + 1e-10);
    }
}

TEST_CASE("singular-vector bounds") {
    SECTION("identical matrices") {
        TrialRng rng(30, 0);
        const DenseMatrix a = gaussian_matrix(rng, 5, 3);
        const auto rep = svd_variant_bounds(a, a, BlockSelection(1, 1), SingularSide::right);
        CHECK(rep.observed_sin_theta_frob <= 1e-10);
        CHECK(rep.variant_sin.bound == 0.0);
    }
    SECTION("axis-aligned scaling keeps singular vectors") {
        const DenseMatrix a(3, 2, {2.0, 0.0, 0.0, 1.0, 0.0, 0.0});
        const DenseMatrix ahat(3, 2, {2.1, 0.0, 0.0, 0.9, 0.0, 0.0});
        const auto rep = svd_variant_bounds(a, ahat, BlockSelection(1, 1), SingularSide::right);
        CHECK(rep.observed_sin_theta_frob <= 1e-12);
        CHECK(rep.variant_sin.bound > 0.0);
        CHECK(rep.variant_sin.holds);
    }
    SECTION("random 6x4, seed 31: both routes agree in order") {
        for (std::uint64_t t = 0; t < 10; ++t) {
            TrialRng rng(31, t);
            std::vector<double> sigma{3.0, 2.0, 1.0, 0.5};
            const DenseMatrix u = haar_frame(rng, 6, 4);
            const DenseMatrix v = haar_frame(rng, 4, 4);
            const DenseMatrix pop = u * DenseMatrix::diagonal(sigma) * v.transpose();
            const DenseMatrix samp = pop + 0.02 * gaussian_matrix(rng, 6, 4);
            for (auto side : {SingularSide::right, SingularSide::left}) {
                const auto rep = svd_variant_bounds(pop, samp, BlockSelection(1, 1), side);
                CHECK(rep.variant_sin.holds);
                CHECK(rep.variant_align.holds);
                const double reduction = svd_reduction_bound(pop, samp, BlockSelection(1, 1), side);
                CHECK(rep.variant_sin.bound >= reduction - 1e-10);
                CHECK(rep.observed_sin_theta_frob <= reduction + 1e-8);
            }
            const auto factor = svd_factor_inequality_check(pop, samp);
            CHECK(factor.op.holds);
            CHECK(factor.frob.holds);
        }
    }
    SECTION("s beyond rank rejected") {
        TrialRng rng(32, 0);
        const DenseMatrix b = haar_frame(rng, 5, 2);
        const DenseMatrix a = b * haar_frame(rng, 4, 2).transpose();  // rank 2, 5x4
        CHECK_THROWS_AS(svd_variant_bounds(a, a, BlockSelection(1, 3), SingularSide::right),
                        PreconditionError);
    }
    SECTION("s = rank below min(p,q) keeps the finite zero gap") {
        // rank-1 population: the gap for s = 1 must be sigma_1^2, not infinite.
        const DenseMatrix a(2, 2, {1.0, 0.0, 0.0, 0.0});
        const double phi = 0.3;
        const DenseMatrix rot(2, 2, {std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)});
        const DenseMatrix ahat = rot * a * rot.transpose();
        const auto rep = svd_variant_bounds(a, ahat, BlockSelection(1, 1), SingularSide::right);
        CHECK(rep.gaps.population_gap == Catch::Approx(1.0).margin(1e-12));
        CHECK(rep.observed_sin_theta_frob == Catch::Approx(std::sin(phi)).margin(1e-10));
        CHECK(rep.variant_sin.holds);
    }
}

TEST_CASE("scale invariance of the variant bound") {
    TrialRng rng(35, 0);
    std::vector<double> spectrum{5.0, 3.0, 1.0, 0.5};
    const DenseMatrix q = haar_orthogonal(rng, 4);
    const SymmetricMatrix pop(q * DenseMatrix::diagonal(spectrum) * q.transpose());
    const SymmetricMatrix samp(pop.dense() + 0.05 * goe_noise(rng, 4));
    const auto base = variant_bounds(pop, samp, BlockSelection(1, 1));
    for (double c : {0.1, 3.0, 250.0}) {
        const auto scaled = variant_bounds(SymmetricMatrix(c * pop.dense()),
                                           SymmetricMatrix(c * samp.dense()),
                                           BlockSelection(1, 1));
        CHECK(scaled.variant_sin.bound ==
              Catch::Approx(base.variant_sin.bound).epsilon(1e-10));
        CHECK(std::abs(scaled.observed_sin_theta_frob - base.observed_sin_theta_frob) <= 1e-8);
    }
}
