#include "support.hpp"

#include "kmsphase/critical.hpp"
#include "kmsphase/errors.hpp"
#include "kmsphase/invariance.hpp"
#include "kmsphase/partition.hpp"
#include "kmsphase/states.hpp"

#include <catch_amalgamated.hpp>

using namespace kmsphase;
using namespace testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Oracle for T_beta(gamma): enumerate stems mu = mu_1 ... mu_n up to length L.
// A point with stem mu and root c sits over c_{mu_1} (or c itself when mu = e),
// and lies in q_y iff y mu is admissible (or y in c when mu = e).
struct StemOracle {
    Eigen::VectorXd atoms;
    Eigen::VectorXd q;
    double z = 0.0;
};

StemOracle stem_oracle(const SystemModel& model, double beta, const RootMeasure& gamma, int L) {
    const auto& space = model.columns();
    const std::size_t m = model.size();
    StemOracle o;
    o.atoms = gamma.weights;
    o.q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (Generator y = 0; y < m; ++y)
        for (std::size_t c = 0; c < space.d(); ++c)
            if (space.points[c][y]) o.q[static_cast<Eigen::Index>(y)] += gamma.weights[static_cast<Eigen::Index>(c)];
    o.z = gamma.total();
    for (Generator first = 0; first < m; ++first) {
        for (Generator last = 0; last < m; ++last) {
            // stems from `first` to `last`; root mass is gamma(Omega_e^last)
            double root = 0.0;
            for (std::size_t c = 0; c < space.d(); ++c)
                if (space.points[c][last]) root += gamma.weights[static_cast<Eigen::Index>(c)];
            const double w = word_sum(model, beta, L, first, last) * root;
            o.z += w;
            o.atoms[static_cast<Eigen::Index>(space.column_of[first])] += w;
            for (Generator y = 0; y < m; ++y)
                if (model.adjacent(y, first)) o.q[static_cast<Eigen::Index>(y)] += w;
        }
    }
    o.atoms /= o.z;
    o.q /= o.z;
    return o;
}

}  // namespace

TEST_CASE("finite-type state of the full 2x2 matrix") {
    const auto m = full(2, 2);
    const QState s = finite_type_state(m, 2.0, RootMeasure::point_mass(m, 0));
    CHECK_THAT(s.atom_masses[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(s.q_values[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(s.q_values[1], WithinAbs(1.0, 1e-12));
    CHECK(s.type == StateType::Finite);
    const QState scaled = finite_type_state(m, 2.0, RootMeasure::point_mass(m, 0, 3.5));
    CHECK((scaled.atom_masses - s.atom_masses).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("finite-type states match the stem oracle") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(trial % 3);
        const auto model = build_model(random_irreducible(rng, m, 0.5), random_energies(rng, m, 2.0, 4.0));
        const double beta = beta_c(model).beta_c + 1.5;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        RootMeasure gamma = RootMeasure::zero(model);
        for (Eigen::Index c = 0; c < gamma.weights.size(); ++c) gamma.weights[c] = u(rng);
        const QState s = finite_type_state(model, beta, gamma);
        const auto oracle = stem_oracle(model, beta, gamma, 14);
        const double r = spectral_radius(model, beta);
        const double tol = 40.0 * std::pow(r, 14) + 1e-12;
        CHECK((s.atom_masses - oracle.atoms).cwiseAbs().maxCoeff() < tol);
        CHECK((s.q_values - oracle.q).cwiseAbs().maxCoeff() < tol);
        CHECK_THAT(s.atom_masses.sum(), WithinAbs(1.0, 1e-12));
        // the bit rule ties q to the atoms
        const QState rebuilt = state_from_atoms(model, beta, s.atom_masses);
        CHECK((rebuilt.q_values - s.q_values).cwiseAbs().maxCoeff() < 1e-12);
        // defect equals gamma / Z(beta, gamma)
        const double z = *z_gamma(model, beta, gamma);
        CHECK((atom_gaps(model, beta, s) - gamma.weights / z).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("golden-mean state from a uniform root") {
    const auto gm = golden_mean();
    RootMeasure gamma{Eigen::VectorXd::Constant(2, 0.5)};
    const QState g = ground_state(gm, gamma);
    CHECK_THAT(g.q_values[0], WithinAbs(0.5, 1e-15));
    CHECK_THAT(g.q_values[1], WithinAbs(1.0, 1e-15));
    CHECK_THAT(g.atom_masses.sum(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("state construction errors") {
    const auto m = full(2, 2);
    CHECK_THROWS_AS(finite_type_state(m, 2.0, RootMeasure::zero(m)), Error);
    CHECK_THROWS_AS(finite_type_state(m, 1.0, RootMeasure::point_mass(m, 0)), Error);
    CHECK_THROWS_AS(finite_type_state(m, 2.0, RootMeasure{Eigen::VectorXd::Ones(3)}), Error);
    const auto zero_col = build_model({{1, 0}, {1, 0}}, std::vector<double>{2, 2});
    CHECK_THROWS_AS(finite_type_state(zero_col, 2.0, RootMeasure::point_mass(zero_col, 0)), Error);
}

TEST_CASE("omega infinity mass") {
    const auto m = full(2, 2);
    const QState crit = invariant_state_from_fixed_point(m, 1.0, Eigen::VectorXd::Ones(2));
    for (double s : omega_infinity_mass(m, 1.0, crit, 10)) CHECK_THAT(s, WithinAbs(1.0, 1e-12));

    const QState ground = ground_state(m, RootMeasure::point_mass(m, 0));
    for (double s : omega_infinity_mass(m, std::numeric_limits<double>::infinity(), ground, 5)) CHECK(s == 0.0);

    const QState fin = finite_type_state(m, 2.0, RootMeasure::point_mass(m, 0));
    const auto s = omega_infinity_mass(m, 2.0, fin, 30);
    for (std::size_t n = 1; n < s.size(); ++n) CHECK(s[n] <= s[n - 1] + 1e-15);
    CHECK(s.back() < 1e-8);
}

TEST_CASE("decompose examples") {
    const auto m = full(2, 2);
    const QState fin = finite_type_state(m, 2.0, RootMeasure::point_mass(m, 0, 0.5));
    const auto d = decompose(m, 2.0, fin);
    CHECK_THAT(d.defects[0], WithinAbs(0.5, 1e-12));
    CHECK_THAT(d.finite_fraction, WithinAbs(1.0, 1e-12));
    CHECK(d.reconstruction_residual < 1e-12);
    CHECK_FALSE(d.infinite_part);

    const QState crit = invariant_state_from_fixed_point(m, 1.0, Eigen::VectorXd::Ones(2));
    const auto c = decompose(m, 1.0, crit);
    CHECK(c.finite_fraction == 0.0);
    REQUIRE(c.infinite_part);
    CHECK(c.reconstruction_residual < 1e-12);

    const QState ground = ground_state(m, RootMeasure::point_mass(m, 0));
    const auto g = decompose(m, std::numeric_limits<double>::infinity(), ground);
    CHECK_THAT(g.finite_fraction, WithinAbs(1.0, 1e-15));
    CHECK((g.defects - ground.atom_masses).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("decompose rejects non-subinvariant states") {
    const auto gm = golden_mean();
    const double beta = std::log(kPhi) + 0.3;
    // all mass on the column (0,1) of generator 0: too little at column (1,1)
    Eigen::VectorXd atoms(2);
    atoms << 1.0, 0.0;
    const QState s = state_from_atoms(gm, beta, atoms);
    CHECK_THROWS_AS(decompose(gm, beta, s), Error);
}

TEST_CASE("cooling") {
    const auto m = full(2, 2);
    const QState crit = invariant_state_from_fixed_point(m, 1.0, Eigen::VectorXd::Ones(2));
    const auto cooled = cooling(m, 1.0, crit, 2.0);
    CHECK_THAT(cooled.finite_fraction, WithinAbs(1.0, 1e-9));
    CHECK(cooled.bound_holds);
    for (std::size_t n = 0; n < cooled.omega_mass.size(); ++n)
        CHECK(cooled.omega_mass[n] <= std::pow(2.0, -static_cast<double>(n + 1)) + 1e-15);

    const auto same = cooling(m, 1.0, crit, 1.0);
    CHECK(same.degenerate);
    CHECK(same.finite_fraction == 0.0);

    const auto gm = golden_mean();
    const double bc = beta_c(gm).beta_c;
    const QState gcrit = invariant_state_from_fixed_point(gm, bc, perron_vector(gm, bc));
    const auto gcool = cooling(gm, bc, gcrit, bc + 0.5);
    CHECK_THAT(gcool.finite_fraction, WithinAbs(1.0, 1e-6));
    CHECK(gcool.bound_holds);
    CHECK(atom_gaps(gm, bc + 0.5, gcrit).maxCoeff() > 0.0);
    CHECK_THROWS_AS(cooling(gm, bc, gcrit, bc - 0.1), Error);
}
