#include "kmsphase/invariance.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/kernels.hpp"
#include "kmsphase/partition.hpp"

#include <cmath>
#include <string>

namespace kmsphase {

namespace {

std::vector<Generator> mask_to_set(std::uint32_t mask, int m) {
    std::vector<Generator> out;
    for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) out.push_back(static_cast<Generator>(i));
    return out;
}

void check_state_shape(const SystemModel& model, const QState& state) {
    if (static_cast<std::size_t>(state.atom_masses.size()) != model.columns().d() ||
        static_cast<std::size_t>(state.q_values.size()) != model.size()) {
        throw Error(ErrorCode::DimensionMismatch, "state does not match the model's column space");
    }
}

}  // namespace

Eigen::VectorXd atom_gaps(const SystemModel& model, double beta, const QState& state) {
    check_state_shape(model, state);
    const auto& space = model.columns();
    Eigen::VectorXd gaps = state.atom_masses;
    for (Generator z = 0; z < model.size(); ++z) {
        gaps[static_cast<Eigen::Index>(space.column_of[z])] -=
            model.weight(z, beta) * state.q_values[static_cast<Eigen::Index>(z)];
    }
    return gaps;
}

InvarianceVerdict is_subinvariant(const SystemModel& model, double beta, const QState& state, bool exhaustive,
                                  const InvarianceConfig& config) {
    const std::size_t m = model.size();
    if (exhaustive && m > config.exhaustive_cap) {
        throw Error(ErrorCode::TooLargeForExhaustive,
                    "exhaustive (X,Y) scan is capped at m <= " + std::to_string(config.exhaustive_cap));
    }
    InvarianceVerdict verdict;
    verdict.atom_gaps = atom_gaps(model, beta, state);
    const auto& space = model.columns();

    Eigen::Index worst = 0;
    verdict.atom_gaps.minCoeff(&worst);
    const double min_gap = verdict.atom_gaps[worst];
    const bool atoms_ok = min_gap >= -config.tolerance;
    verdict.invariant = verdict.atom_gaps.cwiseAbs().maxCoeff() <= config.tolerance;
    if (!atoms_ok) {
        PairViolation v;
        const BitVector& bits = space.points[static_cast<std::size_t>(worst)];
        for (Generator x = 0; x < m; ++x) (bits[x] ? v.X : v.Y).push_back(x);
        v.gap = min_gap;
        verdict.worst_violation = std::move(v);
    }
    verdict.subinvariant = atoms_ok;

    if (exhaustive) {
        PairScanInput in;
        in.m = static_cast<int>(m);
        for (Generator z = 0; z < m; ++z) {
            std::uint32_t mask = 0;
            for (Generator x = 0; x < m; ++x)
                if (model.adjacent(x, z)) mask |= 1u << x;
            in.generator_columns.push_back(mask);
            in.generator_lhs.push_back(model.weight(z, beta) * state.q_values[static_cast<Eigen::Index>(z)]);
        }
        for (std::size_t c = 0; c < space.d(); ++c) {
            std::uint32_t mask = 0;
            for (Generator x = 0; x < m; ++x)
                if (space.points[c][x]) mask |= 1u << x;
            in.point_masks.push_back(mask);
            in.atom_masses.push_back(state.atom_masses[static_cast<Eigen::Index>(c)]);
        }
        const PairScanResult scan = parallel::scan_pairs(in);
        verdict.exhaustive = true;
        verdict.pairs_checked = scan.pairs;
        verdict.atomization_error = scan.worst_atomization_error;
        // Sums over V(X,Y) accumulate up to d atom-level tolerances.
        const double pair_tol = config.tolerance * static_cast<double>(space.d());
        if (scan.worst_gap < -pair_tol) {
            verdict.subinvariant = false;
            if (!verdict.worst_violation || scan.worst_gap < verdict.worst_violation->gap) {
                verdict.worst_violation =
                    PairViolation{mask_to_set(scan.worst_x, in.m), mask_to_set(scan.worst_y, in.m), scan.worst_gap};
            }
        }
    }
    return verdict;
}

QState invariant_state_from_fixed_point(const SystemModel& model, double beta, const Eigen::VectorXd& v,
                                        double tolerance) {
    const std::size_t m = model.size();
    if (static_cast<std::size_t>(v.size()) != m) throw Error(ErrorCode::DimensionMismatch, "fixed point has wrong size");
    for (Generator x = 0; x < m; ++x) {
        if (v[static_cast<Eigen::Index>(x)] < 0.0) {
            throw Error(ErrorCode::NegativeEntry, "fixed point has a negative entry", x);
        }
    }
    double norm = 0.0;
    for (Generator x = 0; x < m; ++x) norm += model.weight(x, beta) * v[static_cast<Eigen::Index>(x)];
    if (std::abs(norm - 1.0) > tolerance) {
        throw Error(ErrorCode::NotNormalized, "sum_x N(x)^{-beta} v_x = " + std::to_string(norm) + ", expected 1");
    }
    const Eigen::MatrixXd M = transfer_matrix(model, beta).entries;
    const double residual = (M * v - v).cwiseAbs().maxCoeff();
    if (residual > tolerance * std::max(1.0, v.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::NotFixedPoint, "A N^{-beta} v - v has sup-norm " + std::to_string(residual));
    }
    const auto& space = model.columns();
    Eigen::VectorXd atoms = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.d()));
    for (Generator z = 0; z < m; ++z) {
        atoms[static_cast<Eigen::Index>(space.column_of[z])] += model.weight(z, beta) * v[static_cast<Eigen::Index>(z)];
    }
    QState s;
    s.beta = beta;
    s.atom_masses = std::move(atoms);
    s.q_values = v;
    s.type = StateType::Infinite;
    s.finite_fraction = 0.0;
    return s;
}

Eigen::VectorXd fixed_point_from_state(const SystemModel& model, double beta, const QState& state,
                                       const InvarianceConfig& config) {
    const InvarianceVerdict verdict = is_subinvariant(model, beta, state, false, config);
    if (!verdict.invariant) {
        throw Error(ErrorCode::NotInvariant, "state is not beta-invariant (max atom gap " +
                                                 std::to_string(verdict.atom_gaps.cwiseAbs().maxCoeff()) + ")");
    }
    const Eigen::VectorXd& v = state.q_values;
    const Eigen::MatrixXd M = transfer_matrix(model, beta).entries;
    const double residual = (M * v - v).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * std::max(1.0, v.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::NotFixedPoint, "generator values are not a fixed point");
    }
    return v;
}

}  // namespace kmsphase
