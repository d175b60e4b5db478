#pragma once

#include "kmsphase/invariance.hpp"
#include "kmsphase/measure.hpp"
#include "kmsphase/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace kmsphase {

/// The finite-type state T_beta(gamma), beta in (0, inf).
///
/// A point with finite stem mu != e sits over the column of its first letter,
/// so with S_a = sum_x Z_ax(beta) gamma(Omega_e^x):
///   atoms(c) = (gamma(c) + sum_{a: c_a = c} S_a) / Z(beta, gamma)
///   q(y)     = (gamma(Omega_e^y) + sum_a A(y,a) S_a) / Z(beta, gamma).
/// Throws ZeroMeasure, NegativeEntry, DivergentNormalizer.
QState finite_type_state(const SystemModel& model, double beta, const RootMeasure& gamma);

/// beta = inf: gamma normalized. Throws ZeroMeasure.
QState ground_state(const SystemModel& model, const RootMeasure& gamma);

/// s_n = sum_{mu in P_A^n} N(mu)^{-beta} rho(q_{last(mu)}) for n = 1..L, via
/// s_n = w^T M^{n-1} q with w_x = N(x)^{-beta}. Decreases to the mass of the
/// infinite-stem part.
std::vector<double> omega_infinity_mass(const SystemModel& model, double beta, const QState& state, int L);

struct StatesConfig {
    double clamp = 1e-12;                 // |defect| below this is treated as 0
    InvarianceConfig invariance{};
};

/// Finite/infinite split of a subinvariant state.
struct Decomposition {
    Eigen::VectorXd defects;              // per-point, after clamping
    RootMeasure finite_root;              // gamma_f = defects
    double finite_fraction = 0.0;         // Z(beta, gamma_f)
    std::optional<QState> finite_part;    // T_beta(gamma_f), when finite_fraction > 0
    std::optional<QState> infinite_part;  // remainder, when finite_fraction < 1
    double fixed_point_residual = 0.0;    // sup |A N^{-beta} v - v| of the raw remainder
    double normalization_residual = 0.0;  // |sum_x N(x)^{-beta} v_x - 1| before renormalizing
    double reconstruction_residual = 0.0; // sup over atoms of the rebuilt mixture minus the input
};

/// Throws NegativeDefect(c) when the state is not subinvariant at beta.
Decomposition decompose(const SystemModel& model, double beta, const QState& state, const StatesConfig& config = {});

struct CoolingResult {
    QState state;                          // same restriction to Q, now beta'-scaling
    double finite_fraction = 0.0;
    std::vector<double> omega_mass;        // s_n at beta', n = 1..L
    std::vector<double> bound;             // R^{-n delta}, R = min_x N(x)
    bool bound_holds = false;
    bool degenerate = false;               // beta' == beta
};

/// Reinterprets a beta-subinvariant state at beta' >= beta. For beta' > beta the
/// result is of finite type. Throws NotSubinvariant, InvalidArgument.
CoolingResult cooling(const SystemModel& model, double beta, const QState& state, double beta_prime, int L = 20);

}  // namespace kmsphase
