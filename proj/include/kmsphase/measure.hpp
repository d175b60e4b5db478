#pragma once

#include "kmsphase/model.hpp"

#include <Eigen/Dense>

#include <limits>

namespace kmsphase {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

/// Nonnegative weights gamma(c), one per column-space point (Omega_e is
/// identified with the distinct columns of A).
struct RootMeasure {
    Eigen::VectorXd weights;

    [[nodiscard]] double total() const { return weights.sum(); }

    static RootMeasure zero(const SystemModel& model) {
        return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.columns().d()))};
    }
    static RootMeasure point_mass(const SystemModel& model, std::size_t point, double mass = 1.0) {
        RootMeasure g = zero(model);
        g.weights[static_cast<Eigen::Index>(point)] = mass;
        return g;
    }
};

/// gamma(Omega_e^x) = sum of gamma(c) over points c with bit x set.
Eigen::VectorXd generator_masses(const SystemModel& model, const Eigen::VectorXd& point_weights);

enum class StateType { Finite, Infinite, Mixed };

/// A state on the diagonal algebra Q: a probability vector over column-space
/// points plus its generator values rho(q_x).
struct QState {
    double beta = 0.0;
    Eigen::VectorXd atom_masses;
    Eigen::VectorXd q_values;
    StateType type = StateType::Finite;
    double finite_fraction = 1.0;  // meaningful for Mixed

    /// psi(p_x) = N(x)^{-beta} rho(q_x) for the induced KMS state.
    [[nodiscard]] Eigen::VectorXd p_values(const SystemModel& model) const;
};

/// Builds a state from atom masses; q_values follow the bit rule.
QState state_from_atoms(const SystemModel& model, double beta, Eigen::VectorXd atoms,
                        StateType type = StateType::Finite);

}  // namespace kmsphase
