#pragma once

#include "kmsphase/measure.hpp"
#include "kmsphase/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace kmsphase {

struct InvarianceConfig {
    double tolerance = 1e-10;       // absolute, on gaps of normalized states
    std::size_t exhaustive_cap = 12;
};

struct PairViolation {
    std::vector<Generator> X;
    std::vector<Generator> Y;
    double gap = 0.0;
};

/// Outcome of checking sum_z A(X,Y,z) N(z)^{-beta} rho(q_z) <= rho(q(X,Y)).
///
/// With finitely many generators every V(X,Y) is a finite union of single
/// columns, so it suffices to check one inequality per column-space point;
/// `atom_gaps` holds rho({c}) - sum_{z: c_z = c} N(z)^{-beta} rho(q_z).
struct InvarianceVerdict {
    bool subinvariant = false;
    bool invariant = false;
    std::optional<PairViolation> worst_violation;
    Eigen::VectorXd atom_gaps;
    bool exhaustive = false;
    std::uint64_t pairs_checked = 0;
    double atomization_error = 0.0;  // exhaustive mode only
};

/// Per-point defects rho({c}) - sum_{z: c_z = c} N(z)^{-beta} rho(q_z).
Eigen::VectorXd atom_gaps(const SystemModel& model, double beta, const QState& state);

/// Throws TooLargeForExhaustive when exhaustive and m > cap.
InvarianceVerdict is_subinvariant(const SystemModel& model, double beta, const QState& state,
                                  bool exhaustive = false, const InvarianceConfig& config = {});

/// The invariant state with rho(q_x) = v_x, atoms sum_{z: c_z = c} N(z)^{-beta} v_z.
/// Throws NegativeEntry, NotNormalized, NotFixedPoint (checked in that order).
QState invariant_state_from_fixed_point(const SystemModel& model, double beta, const Eigen::VectorXd& v,
                                        double tolerance = 1e-9);

/// Inverse of the above on invariant states. Throws NotInvariant.
Eigen::VectorXd fixed_point_from_state(const SystemModel& model, double beta, const QState& state,
                                       const InvarianceConfig& config = {});

}  // namespace kmsphase
