#pragma once

#include "kmsphase/measure.hpp"
#include "kmsphase/model.hpp"

#include <Eigen/Dense>

#include <optional>

namespace kmsphase {

/// M(x,y) = A(x,y) N(y)^{-beta}.
struct TransferMatrix {
    double beta = 0.0;
    Eigen::MatrixXd entries;
};

TransferMatrix transfer_matrix(const SystemModel& model, double beta);

struct PartitionConfig {
    double margin = 1e-9;
};

/// Z_xy, Z_y and Z at one beta. The optionals are empty when the series
/// diverges (spectral radius of the transfer matrix >= 1).
struct PartitionReport {
    double beta = 0.0;
    double spectral_radius = 0.0;
    double margin = 1e-9;
    bool near_critical = false;          // 1 - margin <= r < 1: computed, but ill-conditioned
    double reciprocal_condition = 0.0;   // LU estimate for I - M; 0 when not solved
    std::optional<Eigen::MatrixXd> z_xy;
    std::optional<Eigen::VectorXd> z_y;
    std::optional<double> z_total;

    [[nodiscard]] bool convergent() const noexcept { return z_total.has_value(); }
};

PartitionReport evaluate(const SystemModel& model, double beta, const PartitionConfig& config = {});

/// Column y of the Neumann-series solution, (Z_xy)_x, evaluated on the
/// generators that can reach y. Empty when that restricted series diverges,
/// which can happen for one target while others converge (reducible A).
std::optional<Eigen::VectorXd> target_series(const SystemModel& model, double beta, Generator y);

/// Z(beta, gamma) = gamma(Omega_e) + sum_x Z_x(beta) gamma(Omega_e^x).
/// Empty when some Z_x with positive gamma-mass diverges.
std::optional<double> z_gamma(const SystemModel& model, double beta, const RootMeasure& gamma);

/// 1/(1 - sum_x N(x)^{-beta}) when that sum is below 1.
std::optional<double> geometric_bound(const SystemModel& model, double beta);

}  // namespace kmsphase
