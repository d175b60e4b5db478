#include "support.hpp"

#include "kmsphase/critical.hpp"
#include "kmsphase/kernels.hpp"

#include <catch_amalgamated.hpp>

#include <omp.h>

using namespace kmsphase;
using namespace testing;
using Catch::Matchers::WithinRel;

namespace {

PairScanInput random_scan(std::mt19937_64& rng, int m) {
    const auto model = build_model(random_matrix(rng, static_cast<std::size_t>(m), 0.5),
                                   random_energies(rng, static_cast<std::size_t>(m), 1.5, 4.0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PairScanInput in;
    in.m = m;
    for (Generator z = 0; z < model.size(); ++z) {
        std::uint32_t mask = 0;
        for (Generator x = 0; x < model.size(); ++x)
            if (model.adjacent(x, z)) mask |= 1u << x;
        in.generator_columns.push_back(mask);
        in.generator_lhs.push_back(0.3 * u(rng));
    }
    for (const auto& p : model.columns().points) {
        std::uint32_t mask = 0;
        for (Generator x = 0; x < model.size(); ++x)
            if (p[x]) mask |= 1u << x;
        in.point_masks.push_back(mask);
        in.atom_masses.push_back(u(rng));
    }
    return in;
}

}  // namespace

TEST_CASE("shell sums: parallel matches serial for every thread count") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(trial % 6);
        const auto model = build_model(random_matrix(rng, m, 0.5), random_energies(rng, m, 1.2, 4.0));
        const double beta = 0.2 * trial;
        const Endpoints ends = trial % 3 == 0 ? Endpoints{} : Endpoints{0, static_cast<Generator>(m - 1)};
        const ShellSums ref = reference::shell_sums(model, beta, 8, ends);
        for (int threads : {1, 2, 5}) {
            omp_set_num_threads(threads);
            const ShellSums par = parallel::shell_sums(model, beta, 8, ends);
            CHECK(par.counts == ref.counts);
            for (std::size_t n = 0; n < ref.sums.size(); ++n) CHECK_THAT(par.sums[n], WithinRel(ref.sums[n], 1e-13));
        }
        // deterministic across thread counts
        omp_set_num_threads(1);
        const ShellSums one = parallel::shell_sums(model, beta, 8, ends);
        omp_set_num_threads(4);
        CHECK(parallel::shell_sums(model, beta, 8, ends).sums == one.sums);
    }
}

TEST_CASE("pair scan: parallel matches serial exactly") {
    std::mt19937_64 rng(62);
    for (int m = 1; m <= 9; ++m) {
        const PairScanInput in = random_scan(rng, m);
        const PairScanResult ref = reference::scan_pairs(in);
        std::uint64_t pow3 = 1;
        for (int i = 0; i < m; ++i) pow3 *= 3;
        CHECK(ref.pairs == pow3);
        for (int threads : {1, 3, 4}) {
            omp_set_num_threads(threads);
            const PairScanResult par = parallel::scan_pairs(in);
            CHECK(par.pairs == ref.pairs);
            CHECK(par.worst_gap == ref.worst_gap);
            CHECK(par.worst_x == ref.worst_x);
            CHECK(par.worst_y == ref.worst_y);
            CHECK(par.worst_atomization_error == ref.worst_atomization_error);
        }
    }
}

TEST_CASE("sweep: parallel matches serial and is in grid order") {
    const auto gm = golden_mean();
    const double bc = beta_c(gm).beta_c;
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(-0.5 + 0.05 * i);
    grid.push_back(bc);
    const auto ref = reference::sweep(gm, grid, bc, 1e-9);
    omp_set_num_threads(4);
    const auto par = parallel::sweep(gm, grid, bc, 1e-9);
    REQUIRE(par.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(par[i].beta == grid[i]);
        CHECK(par[i].spectral_radius == ref[i].spectral_radius);
        CHECK(par[i].z_total == ref[i].z_total);
        CHECK(par[i].regime == ref[i].regime);
        if (grid[i] <= 0.0) CHECK_FALSE(par[i].z_total);
    }
    CHECK(par.back().regime == "critical");
    CHECK(par.front().regime == "below");
    CHECK(par[40].regime == "above");
}

TEST_CASE("compensated sum") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000000; ++i) s.add(1e-16);
    CHECK_THAT(s.sum, WithinRel(1.0 + 1e-10, 1e-15));
}
