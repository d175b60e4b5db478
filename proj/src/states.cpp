#include "kmsphase/states.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kmsphase {

namespace {

void check_root(const SystemModel& model, const RootMeasure& gamma) {
    if (static_cast<std::size_t>(gamma.weights.size()) != model.columns().d()) {
        throw Error(ErrorCode::DimensionMismatch, "root measure needs one weight per column-space point");
    }
    for (Eigen::Index c = 0; c < gamma.weights.size(); ++c) {
        if (gamma.weights[c] < 0.0) throw Error(ErrorCode::NegativeEntry, "root measure is negative", c);
    }
    if (!(gamma.total() > 0.0)) throw Error(ErrorCode::ZeroMeasure, "root measure is zero");
}

void require_columns(const SystemModel& model) {
    if (model.columns().contains_zero) {
        throw Error(ErrorCode::ZeroColumn, "state construction identifies Omega_e with the columns and needs no zero column");
    }
}

// Atoms of the invariant state with generator values v (no checks).
Eigen::VectorXd invariant_atoms(const SystemModel& model, double beta, const Eigen::VectorXd& v) {
    const auto& space = model.columns();
    Eigen::VectorXd atoms = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.d()));
    for (Generator z = 0; z < model.size(); ++z)
        atoms[static_cast<Eigen::Index>(space.column_of[z])] += model.weight(z, beta) * v[static_cast<Eigen::Index>(z)];
    return atoms;
}

}  // namespace

QState finite_type_state(const SystemModel& model, double beta, const RootMeasure& gamma) {
    if (!(beta > 0.0) || std::isinf(beta)) {
        throw Error(ErrorCode::InvalidArgument, "finite_type_state needs beta in (0, inf); use ground_state at inf");
    }
    require_columns(model);
    check_root(model, gamma);
    const std::size_t m = model.size();
    const auto& space = model.columns();
    const Eigen::VectorXd masses = generator_masses(model, gamma.weights);

    // stems[a] = sum_x Z_ax gamma(Omega_e^x)
    Eigen::VectorXd stems = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (Generator x = 0; x < m; ++x) {
        const double mass = masses[static_cast<Eigen::Index>(x)];
        if (mass == 0.0) continue;
        const auto column = target_series(model, beta, x);
        if (!column) {
            throw Error(ErrorCode::DivergentNormalizer,
                        "Z_" + std::to_string(x) + "(beta) diverges at beta = " + std::to_string(beta), x);
        }
        stems += mass * *column;
    }
    const double z = gamma.total() + stems.sum();

    QState s;
    s.beta = beta;
    s.atom_masses = gamma.weights;
    for (Generator a = 0; a < m; ++a) s.atom_masses[static_cast<Eigen::Index>(space.column_of[a])] += stems[static_cast<Eigen::Index>(a)];
    s.atom_masses /= z;
    s.q_values = masses;
    for (Generator y = 0; y < m; ++y)
        for (Generator a : model.successors(y)) s.q_values[static_cast<Eigen::Index>(y)] += stems[static_cast<Eigen::Index>(a)];
    s.q_values /= z;
    s.type = StateType::Finite;
    s.finite_fraction = 1.0;
    return s;
}

QState ground_state(const SystemModel& model, const RootMeasure& gamma) {
    require_columns(model);
    check_root(model, gamma);
    return state_from_atoms(model, kInfiniteBeta, gamma.weights / gamma.total(), StateType::Finite);
}

std::vector<double> omega_infinity_mass(const SystemModel& model, double beta, const QState& state, int L) {
    if (L < 1) throw Error(ErrorCode::InvalidArgument, "omega_infinity_mass needs L >= 1");
    const std::size_t m = model.size();
    Eigen::VectorXd w(static_cast<Eigen::Index>(m));
    for (Generator x = 0; x < m; ++x) w[static_cast<Eigen::Index>(x)] = model.weight(x, beta);
    const Eigen::MatrixXd M = transfer_matrix(model, beta).entries;

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(L));
    Eigen::VectorXd u = state.q_values;
    for (int n = 1; n <= L; ++n) {
        out.push_back(w.dot(u));
        u = M * u;
    }
    return out;
}

Decomposition decompose(const SystemModel& model, double beta, const QState& state, const StatesConfig& config) {
    require_columns(model);
    Decomposition dec;
    dec.defects = atom_gaps(model, beta, state);
    for (Eigen::Index c = 0; c < dec.defects.size(); ++c) {
        double& d = dec.defects[c];
        if (d < -config.invariance.tolerance) {
            throw Error(ErrorCode::NegativeDefect,
                        "point " + std::to_string(c) + " has defect " + std::to_string(d) + "; state is not subinvariant",
                        static_cast<std::size_t>(c));
        }
        if (d < config.clamp) d = 0.0;
    }
    dec.finite_root.weights = dec.defects;

    if (dec.finite_root.total() > 0.0) {
        if (std::isinf(beta)) {
            dec.finite_fraction = dec.finite_root.total();
            dec.finite_part = ground_state(model, dec.finite_root);
        } else {
            const auto zf = z_gamma(model, beta, dec.finite_root);
            if (!zf) throw Error(ErrorCode::DivergentNormalizer, "Z(beta, gamma_f) diverges");
            dec.finite_fraction = *zf;
            dec.finite_part = finite_type_state(model, beta, dec.finite_root);
        }
    }
    dec.finite_fraction = std::clamp(dec.finite_fraction, 0.0, 1.0);

    const double f = dec.finite_fraction;
    Eigen::VectorXd rebuilt = Eigen::VectorXd::Zero(state.atom_masses.size());
    if (dec.finite_part) rebuilt += f * dec.finite_part->atom_masses;

    if (f < 1.0 - config.clamp) {
        Eigen::VectorXd atoms = state.atom_masses;
        Eigen::VectorXd q = state.q_values;
        if (dec.finite_part) {
            atoms -= f * dec.finite_part->atom_masses;
            q -= f * dec.finite_part->q_values;
        }
        atoms /= (1.0 - f);
        q /= (1.0 - f);

        const Eigen::MatrixXd M = transfer_matrix(model, beta).entries;
        dec.fixed_point_residual = (M * q - q).cwiseAbs().maxCoeff();
        double norm = 0.0;
        for (Generator x = 0; x < model.size(); ++x) norm += model.weight(x, beta) * q[static_cast<Eigen::Index>(x)];
        dec.normalization_residual = std::abs(norm - 1.0);
        if (norm > 0.0) q /= norm;

        QState inf;
        inf.beta = beta;
        inf.atom_masses = atoms;
        inf.q_values = q;
        inf.type = StateType::Infinite;
        inf.finite_fraction = 0.0;
        rebuilt += (1.0 - f) * invariant_atoms(model, beta, q);
        dec.infinite_part = std::move(inf);
    }
    dec.reconstruction_residual = (rebuilt - state.atom_masses).cwiseAbs().maxCoeff();
    return dec;
}

CoolingResult cooling(const SystemModel& model, double beta, const QState& state, double beta_prime, int L) {
    if (!(beta_prime >= beta) || std::isinf(beta_prime)) {
        throw Error(ErrorCode::InvalidArgument, "cooling needs a finite beta' >= beta");
    }
    if (!is_subinvariant(model, beta, state).subinvariant) {
        throw Error(ErrorCode::NotSubinvariant, "state is not subinvariant at beta = " + std::to_string(beta));
    }
    CoolingResult out;
    out.degenerate = beta_prime == beta;

    // Subinvariance persists under heating the exponent; the split is taken at beta'.
    const Decomposition dec = decompose(model, beta_prime, state);
    out.finite_fraction = dec.finite_fraction;
    if (dec.finite_part && dec.finite_fraction >= 1.0 - 1e-12) {
        out.state = *dec.finite_part;
    } else {
        out.state = state;
        out.state.beta = beta_prime;
        out.state.type = dec.finite_fraction > 0.0 ? StateType::Mixed : StateType::Infinite;
        out.state.finite_fraction = dec.finite_fraction;
    }

    out.omega_mass = omega_infinity_mass(model, beta_prime, state, L);
    const auto energies = model.energies();
    const double r_min = *std::min_element(energies.begin(), energies.end());
    const double delta = beta_prime - beta;
    out.bound_holds = true;
    for (int n = 1; n <= L; ++n) {
        const double b = std::pow(r_min, -static_cast<double>(n) * delta);
        out.bound.push_back(b);
        if (out.omega_mass[static_cast<std::size_t>(n) - 1] > b * (1.0 + 1e-12) + 1e-15) out.bound_holds = false;
    }
    return out;
}

}  // namespace kmsphase
