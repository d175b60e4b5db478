#include "kmsphase/partition.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/linalg.hpp"

#include <Eigen/LU>

#include <cmath>

namespace kmsphase {

TransferMatrix transfer_matrix(const SystemModel& model, double beta) {
    const auto m = static_cast<Eigen::Index>(model.size());
    TransferMatrix t{beta, Eigen::MatrixXd::Zero(m, m)};
    for (Generator x = 0; x < model.size(); ++x)
        for (Generator y : model.successors(x))
            t.entries(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = model.weight(y, beta);
    return t;
}

PartitionReport evaluate(const SystemModel& model, double beta, const PartitionConfig& config) {
    if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "partition functions need beta > 0");
    const auto m = static_cast<Eigen::Index>(model.size());
    const Eigen::MatrixXd M = transfer_matrix(model, beta).entries;

    PartitionReport report;
    report.beta = beta;
    report.margin = config.margin;
    report.spectral_radius = spectral_radius(M).radius;
    if (report.spectral_radius >= 1.0) return report;
    report.near_critical = report.spectral_radius >= 1.0 - config.margin;

    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I - M);
    report.reciprocal_condition = lu.rcond();
    const Eigen::MatrixXd resolvent = lu.solve(I);

    Eigen::MatrixXd z_xy(m, m);
    for (Eigen::Index x = 0; x < m; ++x) z_xy.row(x) = model.weight(static_cast<Generator>(x), beta) * resolvent.row(x);
    Eigen::VectorXd z_y = z_xy.colwise().sum().transpose();
    report.z_total = 1.0 + z_y.sum();
    report.z_y = std::move(z_y);
    report.z_xy = std::move(z_xy);
    return report;
}

std::optional<Eigen::VectorXd> target_series(const SystemModel& model, double beta, Generator y) {
    const auto m = static_cast<Eigen::Index>(model.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    if (std::isinf(beta)) return out;

    const std::vector<Generator> anc = ancestors(model, y);
    const auto k = static_cast<Eigen::Index>(anc.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            sub(i, j) = model.adjacent(anc[i], anc[j]) ? model.weight(anc[j], beta) : 0.0;
    if (spectral_radius(sub).radius >= 1.0) return std::nullopt;

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i)
        if (anc[i] == y) rhs[i] = 1.0;
    const Eigen::VectorXd col = (Eigen::MatrixXd::Identity(k, k) - sub).partialPivLu().solve(rhs);
    for (Eigen::Index i = 0; i < k; ++i)
        out[static_cast<Eigen::Index>(anc[i])] = model.weight(anc[i], beta) * col[i];
    return out;
}

std::optional<double> z_gamma(const SystemModel& model, double beta, const RootMeasure& gamma) {
    const Eigen::VectorXd masses = generator_masses(model, gamma.weights);
    double total = gamma.total();
    for (Generator x = 0; x < model.size(); ++x) {
        const double mass = masses[static_cast<Eigen::Index>(x)];
        if (mass == 0.0) continue;
        const auto column = target_series(model, beta, x);
        if (!column) return std::nullopt;
        total += column->sum() * mass;
    }
    return total;
}

std::optional<double> geometric_bound(const SystemModel& model, double beta) {
    double s = 0.0;
    for (Generator x = 0; x < model.size(); ++x) s += model.weight(x, beta);
    if (s < 1.0) return 1.0 / (1.0 - s);
    return std::nullopt;
}

}  // namespace kmsphase
