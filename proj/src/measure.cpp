#include "kmsphase/measure.hpp"

#include "kmsphase/errors.hpp"

namespace kmsphase {

Eigen::VectorXd generator_masses(const SystemModel& model, const Eigen::VectorXd& point_weights) {
    const auto& space = model.columns();
    if (static_cast<std::size_t>(point_weights.size()) != space.d()) {
        throw Error(ErrorCode::DimensionMismatch, "measure must have one weight per column-space point");
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.size()));
    for (std::size_t c = 0; c < space.d(); ++c) {
        const BitVector& bits = space.points[c];
        for (Generator x = 0; x < model.size(); ++x)
            if (bits[x]) out[static_cast<Eigen::Index>(x)] += point_weights[static_cast<Eigen::Index>(c)];
    }
    return out;
}

Eigen::VectorXd QState::p_values(const SystemModel& model) const {
    Eigen::VectorXd p(q_values.size());
    for (Eigen::Index x = 0; x < q_values.size(); ++x)
        p[x] = model.weight(static_cast<Generator>(x), beta) * q_values[x];
    return p;
}

QState state_from_atoms(const SystemModel& model, double beta, Eigen::VectorXd atoms, StateType type) {
    QState s;
    s.beta = beta;
    s.q_values = generator_masses(model, atoms);
    s.atom_masses = std::move(atoms);
    s.type = type;
    s.finite_fraction = type == StateType::Infinite ? 0.0 : 1.0;
    return s;
}

}  // namespace kmsphase
