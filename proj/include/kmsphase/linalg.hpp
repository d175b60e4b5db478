#pragma once

#include <Eigen/Dense>

namespace kmsphase {

enum class SpectralMethod { Zero, PowerIteration, ShiftedPowerIteration, DenseEigen };

struct SpectralConfig {
    double tolerance = 1e-12;      // relative width of the Collatz-Wielandt bracket
    int max_iterations = 100000;
    int stagnation_window = 64;
};

struct SpectralResult {
    double radius = 0.0;
    SpectralMethod method = SpectralMethod::Zero;
    int iterations = 0;
};

/// Spectral radius of an entrywise nonnegative square matrix.
///
/// Power iteration from the all-ones vector, stopped when the Collatz-Wielandt
/// bounds min_i (Mx)_i/x_i <= r <= max_i (Mx)_i/x_i agree to `tolerance`.
/// Imprimitive matrices keep those bounds apart forever, so a stagnating run
/// is retried on M + I (same Perron vector, radius r + 1, aperiodic), and if
/// that stalls too (reducible M) the moduli of the Hessenberg-QR eigenvalues
/// are used.
SpectralResult spectral_radius(const Eigen::MatrixXd& M, const SpectralConfig& config = {});

/// Nonnegative eigenvector for the Perron root of an irreducible nonnegative
/// matrix, scaled to unit 1-norm.
Eigen::VectorXd perron_eigenvector(const Eigen::MatrixXd& M);

/// Numeric rank by singular values above `rel_tol * sigma_max`.
int numeric_rank(const Eigen::MatrixXd& M, double rel_tol = 1e-9);

}  // namespace kmsphase
