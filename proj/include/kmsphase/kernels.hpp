#pragma once

// Data-parallel kernels. Each has a serial reference in `reference` and an
// OpenMP version in `parallel`; tests hold the two together and bench/
// compares their speed. Parallel reductions combine per-task partials in a
// fixed order, so results do not depend on the thread count.

#include "kmsphase/model.hpp"
#include "kmsphase/words.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kmsphase {

/// Kahan-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double value) noexcept {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    void add(const CompensatedSum& other) noexcept {
        add(other.sum);
        add(-other.carry);
    }
};

struct ShellSums {
    std::vector<double> sums;            // index n = 0..L
    std::vector<std::uint64_t> counts;
};

/// Inputs of the exhaustive subinvariance scan, with sets as bitmasks
/// (bit x of a mask <=> x in the set), m <= 12.
struct PairScanInput {
    int m = 0;
    std::vector<std::uint32_t> generator_columns;  // mask of c_z per generator z
    std::vector<double> generator_lhs;             // N(z)^{-beta} rho(q_z)
    std::vector<std::uint32_t> point_masks;        // mask of each column-space point
    std::vector<double> atom_masses;               // rho({c})
};

struct PairScanResult {
    double worst_gap = 0.0;              // min over (X,Y) of rho(q(X,Y)) - lhs(X,Y)
    std::uint32_t worst_x = 0;
    std::uint32_t worst_y = 0;
    std::uint64_t pairs = 0;             // disjoint pairs examined
    double worst_atomization_error = 0.0;  // |direct lhs - atom-grouped lhs|
};

struct SweepRow {
    double beta = 0.0;
    double spectral_radius = 0.0;
    std::optional<double> z_total;
    std::string regime;
};

namespace reference {
ShellSums shell_sums(const SystemModel& model, double beta, int L, const Endpoints& ends);
PairScanResult scan_pairs(const PairScanInput& input);
std::vector<SweepRow> sweep(const SystemModel& model, std::span<const double> betas, double beta_c,
                            double margin);
}  // namespace reference

namespace parallel {
ShellSums shell_sums(const SystemModel& model, double beta, int L, const Endpoints& ends);
PairScanResult scan_pairs(const PairScanInput& input);
std::vector<SweepRow> sweep(const SystemModel& model, std::span<const double> betas, double beta_c,
                            double margin);
}  // namespace parallel

}  // namespace kmsphase
