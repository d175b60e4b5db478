#include "support.hpp"

#include "kmsphase/critical.hpp"
#include "kmsphase/errors.hpp"
#include "kmsphase/linalg.hpp"
#include "kmsphase/partition.hpp"

#include <catch_amalgamated.hpp>

using namespace kmsphase;
using namespace testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("spectral radius closed forms") {
    for (double beta : {0.0, 0.5, 1.0, 2.0, 3.5}) {
        CHECK_THAT(spectral_radius(full(2, 2), beta), WithinRel(std::pow(2.0, 1.0 - beta), 1e-10));
        CHECK_THAT(spectral_radius(two_cycle(), beta), WithinRel(std::pow(2.0, -beta), 1e-10));
        CHECK_THAT(spectral_radius(golden_mean(), beta), WithinRel(std::exp(-beta) * kPhi, 1e-10));
    }
    CHECK(spectral_radius(full(3, 2), std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("spectral radius agrees with a dense eigen solve") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(trial % 8);
        const auto model = build_model(random_matrix(rng, m, 0.2 + 0.1 * (trial % 6)), random_energies(rng, m, 1.1, 5.0));
        const double beta = 0.1 * (trial % 20);
        const double dense = dense_radius(transfer(model, beta));
        CHECK_THAT(spectral_radius(model, beta), WithinAbs(dense, 1e-9 * std::max(1.0, dense)));
        if (beta == 0.0) CHECK(spectral_radius(model, beta) >= 1.0 - 1e-12);
    }
}

TEST_CASE("spectral radius is nonincreasing in beta") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(trial % 5);
        const auto model = build_model(random_matrix(rng, m, 0.5), random_energies(rng, m, 1.1, 5.0));
        double prev = std::numeric_limits<double>::infinity();
        for (double beta = 0.0; beta < 4.0; beta += 0.2) {
            const double r = spectral_radius(model, beta);
            CHECK(r <= prev + 1e-12);
            prev = r;
        }
    }
}

TEST_CASE("beta_c examples") {
    for (std::size_t n : {2u, 3u, 5u}) {
        const auto rep = beta_c(full(n, kE));
        CHECK_THAT(rep.beta_c, WithinAbs(std::log(static_cast<double>(n)), 1e-9));
        CHECK_FALSE(rep.permutation_like);
        CHECK(rep.interval_open_at_left);
        CHECK(rep.coincide);
        REQUIRE(rep.perron_at_critical);
        for (Eigen::Index i = 0; i < rep.perron_at_critical->size(); ++i)
            CHECK_THAT((*rep.perron_at_critical)[i], WithinAbs(1.0, 1e-8));
    }
    CHECK_THAT(beta_c(golden_mean()).beta_c, WithinAbs(std::log(kPhi), 1e-9));
    const auto perm = beta_c(two_cycle());
    CHECK(perm.permutation_like);
    CHECK(perm.beta_c == 0.0);
}

TEST_CASE("beta_c is the root of r = 1 on random irreducible models") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(trial % 5);
        const auto model = build_model(random_irreducible(rng, m, 0.4), random_energies(rng, m, 1.2, 5.0));
        const auto rep = beta_c(model);
        CHECK(rep.bracket_width <= 1e-10);
        CHECK(dense_radius(transfer(model, rep.beta_c - 1e-7)) > 1.0);
        CHECK(dense_radius(transfer(model, rep.beta_c + 1e-7)) < 1.0);
        // Perron vector: positive fixed point, normalized
        REQUIRE(rep.perron_at_critical);
        const Eigen::VectorXd& v = *rep.perron_at_critical;
        CHECK(v.minCoeff() > 0.0);
        const Eigen::MatrixXd M = transfer(model, rep.beta_c);
        CHECK((M * v - rep.radius_at_critical * v).cwiseAbs().maxCoeff() < 1e-10);
        double norm = 0.0;
        for (Generator x = 0; x < m; ++x) norm += model.weight(x, rep.beta_c) * v[static_cast<Eigen::Index>(x)];
        CHECK_THAT(norm, WithinAbs(1.0, 1e-12));
        // Z is finite just above and infinite just below
        CHECK(evaluate(model, rep.beta_c + 1e-3).convergent());
        CHECK_FALSE(evaluate(model, rep.beta_c - 1e-3).convergent());
    }
}

TEST_CASE("perron vector examples") {
    const Eigen::VectorXd v = perron_vector(full(2, 2), 1.0);
    CHECK_THAT(v[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(v[1], WithinAbs(1.0, 1e-12));
    const Eigen::VectorXd g = perron_vector(golden_mean(), std::log(kPhi));
    CHECK_THAT(g[0], WithinAbs(1.0 / kPhi, 1e-10));
    CHECK_THAT(g[1], WithinAbs(1.0, 1e-10));
    CHECK_THROWS_AS(perron_vector(build_model({{1, 1}, {0, 1}}, std::vector<double>{2, 2}), 1.0), Error);
}

TEST_CASE("abscissa estimate") {
    CHECK_THAT(abscissa_estimate(full(2, 2), 10).estimate, WithinAbs(1.0, 1e-9));
    CHECK(abscissa_estimate(two_cycle(), 10).estimate == 0.0);
    CHECK_THAT(abscissa_estimate(golden_mean(), 20).estimate, WithinAbs(std::log(kPhi), 1e-2));
}

TEST_CASE("radius root of a class") {
    // classes {0,1} (full, N=2: root 1) and {2} (self-loop: permutation-like)
    const auto model = build_model({{1, 1, 1}, {1, 1, 0}, {0, 0, 1}}, std::vector<double>{2, 2, 2});
    const std::vector<Generator> c01{0, 1}, c2{2};
    CHECK_THAT(radius_root(model, c01), WithinAbs(1.0, 1e-9));
    CHECK(radius_root(model, c2) == 0.0);
}

TEST_CASE("linalg helpers") {
    Eigen::MatrixXd M(3, 3);
    M << 0, 1, 0, 0, 0, 1, 1, 0, 0;  // cyclic permutation: power iteration would oscillate
    CHECK_THAT(spectral_radius(Eigen::MatrixXd(M * 0.5)).radius, WithinAbs(0.5, 1e-10));
    CHECK(numeric_rank(Eigen::MatrixXd::Ones(3, 3)) == 1);
    CHECK(numeric_rank(Eigen::MatrixXd::Identity(4, 4)) == 4);
}
