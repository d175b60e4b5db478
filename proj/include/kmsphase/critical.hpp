#pragma once

#include "kmsphase/linalg.hpp"
#include "kmsphase/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>

namespace kmsphase {

/// Dominant-eigenvalue modulus of A N^{-beta}; exactly 0 at beta = +inf.
double spectral_radius(const SystemModel& model, double beta, const SpectralConfig& config = {});

struct CriticalConfig {
    double tolerance = 1e-10;          // bisection width on beta
    double permutation_slack = 1e-12;  // r(0) <= 1 + slack counts as permutation-like
};

struct CriticalReport {
    double beta_c = 0.0;
    double bracket_width = 0.0;
    bool interval_open_at_left = true;   // I_c = (beta_c, inf] for finite matrices
    bool coincide = true;                // the three critical temperatures agree for finite matrices
    bool permutation_like = false;       // r(0) = 1: no critical point in (0, inf)
    double radius_at_critical = 0.0;
    std::optional<Eigen::VectorXd> perron_at_critical;
};

/// Root of r(beta) = 1 by bisection on the monotone radius. A bracket always
/// exists since r(0) >= 1 (no zero rows) and r -> 0 as beta grows.
CriticalReport beta_c(const SystemModel& model, const CriticalConfig& config = {});

/// Root of r(beta) = 1 for the principal submatrix of A N^{-beta} on
/// `generators` (one strongly connected component, say); 0 when permutation-like.
double radius_root(const SystemModel& model, std::span<const Generator> generators,
                   const CriticalConfig& config = {});

struct AbscissaEstimate {
    double estimate = 0.0;
    double residual = 0.0;  // shell(L)/shell(L-1) - 1 at the estimate
};

/// Empirical abscissa: the beta where consecutive shells stop growing,
/// shell(beta, L) / shell(beta, L-1) = 1.
AbscissaEstimate abscissa_estimate(const SystemModel& model, int L);

/// Perron vector of A N^{-beta} normalized by sum_x N(x)^{-beta} v_x = 1.
/// Throws NotIrreducible.
Eigen::VectorXd perron_vector(const SystemModel& model, double beta);

}  // namespace kmsphase
