#include "kmsphase/critical.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/partition.hpp"
#include "kmsphase/words.hpp"

#include <cmath>
#include <functional>
#include <numeric>

namespace kmsphase {

namespace {

Eigen::MatrixXd principal_transfer(const SystemModel& model, std::span<const Generator> gens, double beta) {
    const auto k = static_cast<Eigen::Index>(gens.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            sub(i, j) = model.adjacent(gens[i], gens[j]) ? model.weight(gens[j], beta) : 0.0;
    return sub;
}

// Root of a decreasing function f on [0, inf) with f(0) >= 0, f(inf) < 0.
double bisect_decreasing(const std::function<double(double)>& f, double tol, double* width) {
    double lo = 0.0;
    double hi = 1.0;
    while (f(hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw Error(ErrorCode::NoConvergence, "no bracket for the critical root");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= 0.0) lo = mid;
        else hi = mid;
    }
    if (width) *width = hi - lo;
    return 0.5 * (lo + hi);
}

}  // namespace

double spectral_radius(const SystemModel& model, double beta, const SpectralConfig& config) {
    if (std::isinf(beta) && beta > 0) return 0.0;
    return spectral_radius(transfer_matrix(model, beta).entries, config).radius;
}

double radius_root(const SystemModel& model, std::span<const Generator> generators, const CriticalConfig& config) {
    const auto r = [&](double beta) { return spectral_radius(principal_transfer(model, generators, beta)).radius; };
    if (r(0.0) <= 1.0 + config.permutation_slack) return 0.0;
    return bisect_decreasing([&](double b) { return r(b) - 1.0; }, config.tolerance, nullptr);
}

CriticalReport beta_c(const SystemModel& model, const CriticalConfig& config) {
    CriticalReport report;
    const auto r = [&](double beta) { return spectral_radius(model, beta); };
    if (r(0.0) <= 1.0 + config.permutation_slack) {
        report.beta_c = 0.0;
        report.permutation_like = true;
        report.radius_at_critical = r(0.0);
        return report;
    }
    report.beta_c = bisect_decreasing([&](double b) { return r(b) - 1.0; }, config.tolerance, &report.bracket_width);
    report.radius_at_critical = r(report.beta_c);
    if (properties(model).irreducible) report.perron_at_critical = perron_vector(model, report.beta_c);
    return report;
}

AbscissaEstimate abscissa_estimate(const SystemModel& model, int L) {
    if (L < 2) throw Error(ErrorCode::LengthTooLarge, "abscissa estimate needs L >= 2");
    const auto log_ratio = [&](double beta) {
        const auto shells = shell_sums_transfer(model, beta, L);
        const double last = shells[static_cast<std::size_t>(L)];
        const double prev = shells[static_cast<std::size_t>(L) - 1];
        if (!(last > 0.0) || !(prev > 0.0)) {
            throw Error(ErrorCode::DegenerateShells, "shell sum vanished at length " + std::to_string(L));
        }
        return std::log(last) - std::log(prev);
    };
    AbscissaEstimate est;
    if (log_ratio(0.0) <= 0.0) {
        est.estimate = 0.0;
    } else {
        est.estimate = bisect_decreasing(log_ratio, 1e-12, nullptr);
    }
    est.residual = std::expm1(log_ratio(est.estimate));
    return est;
}

Eigen::VectorXd perron_vector(const SystemModel& model, double beta) {
    if (!properties(model).irreducible) {
        throw Error(ErrorCode::NotIrreducible, "Perron vector needs an irreducible matrix");
    }
    Eigen::VectorXd v = perron_eigenvector(transfer_matrix(model, beta).entries);
    double norm = 0.0;
    for (Generator x = 0; x < model.size(); ++x) norm += model.weight(x, beta) * v[static_cast<Eigen::Index>(x)];
    return v / norm;
}

}  // namespace kmsphase
