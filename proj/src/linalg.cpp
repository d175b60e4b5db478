#include "kmsphase/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace kmsphase {

namespace {

struct PowerRun {
    std::optional<double> radius;
    int iterations = 0;
    Eigen::VectorXd vector;
};

// Collatz-Wielandt power iteration on M + shift*I; returns the radius of M.
PowerRun collatz_power(const Eigen::MatrixXd& M, double shift, const SpectralConfig& cfg) {
    const Eigen::Index n = M.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n) / static_cast<double>(n);
    PowerRun run;
    double checkpoint_gap = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        Eigen::VectorXd y = M * x + shift * x;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(y[i] > 0.0)) {
                run.iterations = it;
                return run;  // lost positivity; bounds are no longer valid
            }
            const double ratio = y[i] / x[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        y /= y.sum();
        x = y;
        const double gap = hi - lo;
        if (gap <= cfg.tolerance * hi) {
            run.radius = 0.5 * (lo + hi) - shift;
            run.iterations = it;
            run.vector = x;
            return run;
        }
        if (it % cfg.stagnation_window == 0) {
            if (gap > 0.5 * checkpoint_gap) {
                run.iterations = it;
                return run;
            }
            checkpoint_gap = gap;
        }
    }
    run.iterations = cfg.max_iterations;
    return run;
}

}  // namespace

SpectralResult spectral_radius(const Eigen::MatrixXd& M, const SpectralConfig& config) {
    SpectralResult result;
    if (M.size() == 0 || M.cwiseAbs().maxCoeff() == 0.0) return result;

    const PowerRun plain = collatz_power(M, 0.0, config);
    result.iterations = plain.iterations;
    if (plain.radius) {
        result.radius = std::max(0.0, *plain.radius);
        result.method = SpectralMethod::PowerIteration;
        return result;
    }
    const PowerRun shifted = collatz_power(M, 1.0, config);
    result.iterations += shifted.iterations;
    if (shifted.radius) {
        result.radius = std::max(0.0, *shifted.radius);
        result.method = SpectralMethod::ShiftedPowerIteration;
        return result;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, false);
    result.radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    result.method = SpectralMethod::DenseEigen;
    return result;
}

Eigen::VectorXd perron_eigenvector(const Eigen::MatrixXd& M) {
    const Eigen::Index n = M.rows();
    if (n == 1) return Eigen::VectorXd::Ones(1);

    SpectralConfig tight;
    tight.tolerance = 1e-15;
    tight.max_iterations = 200000;
    const PowerRun run = collatz_power(M, 1.0, tight);
    if (run.radius) {
        Eigen::VectorXd v = run.vector.cwiseMax(0.0);
        return v / v.sum();
    }

    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, true);
    const auto& values = solver.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i) {
        if (values[i].real() > values[best].real()) best = i;
    }
    Eigen::VectorXd v = solver.eigenvectors().col(best).real();
    if (v.sum() < 0.0) v = -v;
    v = v.cwiseMax(0.0);
    return v / v.sum();
}

int numeric_rank(const Eigen::MatrixXd& M, double rel_tol) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > rel_tol * s[0]) ++rank;
    return rank;
}

}  // namespace kmsphase
