#pragma once

#include "kmsphase/critical.hpp"
#include "kmsphase/measure.hpp"
#include "kmsphase/model.hpp"

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace kmsphase {

struct BelowRegime {};

struct CriticalRegime {
    QState state;            // the unique state; infinite type
    Eigen::VectorXd fixed_point;
};

struct AboveRegime {
    std::vector<QState> extreme_states;  // T_beta(delta_c), one per column-space point
    int simplex_dim = 0;                 // d(A) - 1
};

struct GroundRegime {
    std::vector<QState> extreme_states;
    int simplex_dim = 0;
};

/// KMS_beta states on T_A for a finite irreducible matrix.
struct PhaseRegime {
    double beta = 0.0;
    CriticalReport critical;
    std::variant<BelowRegime, CriticalRegime, AboveRegime, GroundRegime> regime;

    [[nodiscard]] std::string_view name() const;
};

struct ClassifyConfig {
    CriticalConfig critical{};
    double critical_band = 2e-10;  // |beta - beta_c| within this counts as critical
};

/// Throws NotIrreducible.
PhaseRegime classify_ta(const SystemModel& model, double beta, const ClassifyConfig& config = {});

/// Same, reusing an already computed critical report.
PhaseRegime classify_ta(const SystemModel& model, double beta, const CriticalReport& critical,
                        const ClassifyConfig& config = {});

/// Affine rank of the atom-mass vectors of `states` (number of affinely
/// independent points).
int affine_rank(std::span<const QState> states, double rel_tol = 1e-9);

struct OaConfig {
    double eigen_tolerance = 1e-8;   // |lambda - 1| for eigenvalue-1 detection
    double null_tolerance = 1e-9;    // singular values <= this * ||M|| span the null space
    int max_dimension = 4;
    double residual_tolerance = 1e-8;
};

/// Normalized nonnegative fixed points of A N^{-beta}: the KMS_beta simplex of O_A.
struct OaSimplex {
    double beta = 0.0;
    std::vector<Eigen::VectorXd> extreme_vectors;
    int eigenspace_dimension = 0;
    double max_residual = 0.0;

    [[nodiscard]] bool empty() const noexcept { return extreme_vectors.empty(); }
};

/// Throws ZeroColumn, EigenspaceTooLarge.
OaSimplex kms_oa(const SystemModel& model, double beta, const OaConfig& config = {});

struct OaCandidate {
    double beta = 0.0;
    std::vector<Generator> component;
    OaSimplex simplex;
};

/// Betas in (0, inf) carrying KMS states on O_A: the Perron roots r_C(beta) = 1
/// of each strongly connected class C, each confirmed by kms_oa.
std::vector<OaCandidate> oa_beta_scan(const SystemModel& model, const OaConfig& config = {},
                                      const CriticalConfig& critical = {});

/// For finitely many generators, factoring through O_A is exactly invariance.
bool factors_through_oa(const SystemModel& model, double beta, const QState& state);

}  // namespace kmsphase
