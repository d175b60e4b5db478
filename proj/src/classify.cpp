#include "kmsphase/classify.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/invariance.hpp"
#include "kmsphase/linalg.hpp"
#include "kmsphase/partition.hpp"
#include "kmsphase/states.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace kmsphase {

namespace {

void require_irreducible(const SystemModel& model) {
    if (!properties(model).irreducible) {
        throw Error(ErrorCode::NotIrreducible, "the T_A phase diagram is only classified for irreducible A");
    }
}

// Calls f(subset) for every k-subset of {0..n-1}, in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& f) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    if (k > n) return;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
    }
}

// Vertices of {alpha : B alpha >= 0, w^T B alpha = 1}. A vertex has k-1
// independent active sign constraints besides the normalization row.
std::vector<Eigen::VectorXd> nonnegative_vertices(const Eigen::MatrixXd& B, const Eigen::VectorXd& w) {
    const auto m = static_cast<int>(B.rows());
    const auto k = static_cast<int>(B.cols());
    std::vector<Eigen::VectorXd> out;
    for_each_subset(m, k - 1, [&](const std::vector<int>& active) {
        Eigen::MatrixXd S(k, k);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
        for (int i = 0; i < k - 1; ++i) S.row(i) = B.row(active[static_cast<std::size_t>(i)]);
        S.row(k - 1) = (w.transpose() * B);
        rhs[k - 1] = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
        if (lu.rank() < k) return;
        Eigen::VectorXd v = B * lu.solve(rhs);
        const double scale = v.cwiseAbs().maxCoeff();
        if (v.minCoeff() < -1e-9 * scale) return;
        v = v.cwiseMax(0.0);
        v /= w.dot(v);
        for (const auto& u : out)
            if ((u - v).cwiseAbs().maxCoeff() <= 1e-7 * scale) return;
        out.push_back(std::move(v));
    });
    return out;
}

}  // namespace

std::string_view PhaseRegime::name() const {
    switch (regime.index()) {
        case 0: return "Below";
        case 1: return "Critical";
        case 2: return "Above";
        default: return "Ground";
    }
}

PhaseRegime classify_ta(const SystemModel& model, double beta, const ClassifyConfig& config) {
    require_irreducible(model);
    return classify_ta(model, beta, beta_c(model, config.critical), config);
}

PhaseRegime classify_ta(const SystemModel& model, double beta, const CriticalReport& critical,
                        const ClassifyConfig& config) {
    require_irreducible(model);
    if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "classify_ta needs beta in (0, inf]");
    PhaseRegime out;
    out.beta = beta;
    out.critical = critical;
    const auto& space = model.columns();
    const int simplex_dim = static_cast<int>(space.d()) - 1;

    if (std::isinf(beta)) {
        GroundRegime g;
        for (std::size_t c = 0; c < space.d(); ++c)
            g.extreme_states.push_back(ground_state(model, RootMeasure::point_mass(model, c)));
        g.simplex_dim = simplex_dim;
        out.regime = std::move(g);
        return out;
    }
    const double bc = critical.beta_c;
    if (!critical.permutation_like && std::abs(beta - bc) <= config.critical_band) {
        CriticalRegime c;
        c.fixed_point = critical.perron_at_critical ? *critical.perron_at_critical : perron_vector(model, bc);
        c.state = invariant_state_from_fixed_point(model, bc, c.fixed_point);
        out.regime = std::move(c);
        return out;
    }
    if (beta < bc) {
        out.regime = BelowRegime{};
        return out;
    }
    AboveRegime a;
    for (std::size_t c = 0; c < space.d(); ++c)
        a.extreme_states.push_back(finite_type_state(model, beta, RootMeasure::point_mass(model, c)));
    a.simplex_dim = simplex_dim;
    out.regime = std::move(a);
    return out;
}

int affine_rank(std::span<const QState> states, double rel_tol) {
    if (states.empty()) return 0;
    const Eigen::Index dim = states.front().atom_masses.size();
    Eigen::MatrixXd P(dim + 1, static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
        P.col(static_cast<Eigen::Index>(i)).head(dim) = states[i].atom_masses;
        P(dim, static_cast<Eigen::Index>(i)) = 1.0;
    }
    return numeric_rank(P, rel_tol);
}

OaSimplex kms_oa(const SystemModel& model, double beta, const OaConfig& config) {
    if (model.columns().contains_zero) {
        throw Error(ErrorCode::ZeroColumn, "KMS states on O_A are classified for matrices without zero columns");
    }
    if (!(beta > 0.0) || std::isinf(beta)) throw Error(ErrorCode::InvalidArgument, "kms_oa needs beta in (0, inf)");

    OaSimplex out;
    out.beta = beta;
    const Eigen::MatrixXd M = transfer_matrix(model, beta).entries;
    const auto m = M.rows();

    Eigen::EigenSolver<Eigen::MatrixXd> eig(M, false);
    const auto& lambdas = eig.eigenvalues();
    bool has_one = false;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        if (std::abs(lambdas[i] - std::complex<double>(1.0, 0.0)) < config.eigen_tolerance) has_one = true;
    if (!has_one) return out;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd_m(M);
    const double norm = svd_m.singularValues()[0];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd::Identity(m, m) - M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] <= config.null_tolerance * norm) ++k;
    k = std::max(k, 1);
    if (k > config.max_dimension) {
        throw Error(ErrorCode::EigenspaceTooLarge,
                    "eigenvalue-1 eigenspace has dimension " + std::to_string(k) + " > " +
                        std::to_string(config.max_dimension));
    }
    out.eigenspace_dimension = k;
    const Eigen::MatrixXd basis = svd.matrixV().rightCols(k);

    Eigen::VectorXd w(m);
    for (Eigen::Index x = 0; x < m; ++x) w[x] = model.weight(static_cast<Generator>(x), beta);

    for (auto& v : nonnegative_vertices(basis, w)) {
        const double residual = (M * v - v).cwiseAbs().maxCoeff() / std::max(1.0, v.cwiseAbs().maxCoeff());
        if (residual > config.residual_tolerance) continue;
        out.max_residual = std::max(out.max_residual, residual);
        out.extreme_vectors.push_back(std::move(v));
    }
    std::sort(out.extreme_vectors.begin(), out.extreme_vectors.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size(),
                                            [](double x, double y) { return x > y; });
    });
    return out;
}

std::vector<OaCandidate> oa_beta_scan(const SystemModel& model, const OaConfig& config,
                                      const CriticalConfig& critical) {
    std::vector<std::vector<Generator>> classes;
    for (auto& comp : strongly_connected_components(model)) {
        const bool has_cycle = comp.size() > 1 || model.adjacent(comp.front(), comp.front());
        if (has_cycle) classes.push_back(std::move(comp));
    }
    std::vector<double> roots(classes.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < classes.size(); ++i) {
        roots[i] = radius_root(model, classes[i], critical);
    }

    std::vector<std::size_t> order(classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return roots[a] < roots[b]; });

    std::vector<OaCandidate> out;
    for (std::size_t i : order) {
        const double beta = roots[i];
        if (!(beta > 0.0)) continue;  // permutation-like class
        const bool duplicate = !out.empty() && std::abs(out.back().beta - beta) <= 1e-8 * std::max(1.0, beta);
        if (duplicate) {
            auto& comp = out.back().component;
            comp.insert(comp.end(), classes[i].begin(), classes[i].end());
            std::sort(comp.begin(), comp.end());
            continue;
        }
        OaSimplex simplex = kms_oa(model, beta, config);
        if (simplex.empty()) continue;
        out.push_back({beta, classes[i], std::move(simplex)});
    }
    return out;
}

bool factors_through_oa(const SystemModel& model, double beta, const QState& state) {
    return is_subinvariant(model, beta, state).invariant;
}

}  // namespace kmsphase
