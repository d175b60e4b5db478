#pragma once

// Shared fixtures and brute-force oracles for the test binaries.

#include "kmsphase/model.hpp"
#include "kmsphase/words.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace testing {

using kmsphase::Generator;
using kmsphase::IntMatrix;
using kmsphase::SystemModel;

inline const double kE = std::numbers::e;
inline const double kPhi = std::numbers::phi;

inline SystemModel full(std::size_t n, double energy) {
    return kmsphase::build_model(IntMatrix(n, std::vector<int>(n, 1)), std::vector<double>(n, energy));
}

// A = [[0,1],[1,1]]
inline SystemModel golden_mean(double energy = kE) {
    return kmsphase::build_model({{0, 1}, {1, 1}}, std::vector<double>{energy, energy});
}

inline SystemModel two_cycle(double energy = 2.0) {
    return kmsphase::build_model({{0, 1}, {1, 0}}, std::vector<double>{energy, energy});
}

inline bool strongly_connected(const IntMatrix& A) {
    const std::size_t m = A.size();
    for (std::size_t s = 0; s < m; ++s) {
        std::vector<bool> seen(m, false);
        std::vector<std::size_t> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            const auto x = stack.back();
            stack.pop_back();
            for (std::size_t y = 0; y < m; ++y)
                if (A[x][y] && !seen[y]) {
                    seen[y] = true;
                    stack.push_back(y);
                }
        }
        for (bool b : seen)
            if (!b) return false;
    }
    return true;
}

inline bool is_permutation(const IntMatrix& A) {
    for (const auto& row : A) {
        int s = 0;
        for (int v : row) s += v;
        if (s != 1) return false;
    }
    return true;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t m, double density) {
    std::bernoulli_distribution bit(density);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    IntMatrix A(m, std::vector<int>(m, 0));
    for (auto& row : A) {
        for (auto& v : row) v = bit(rng) ? 1 : 0;
        row[pick(rng)] = 1;  // no zero rows
    }
    return A;
}

inline IntMatrix random_irreducible(std::mt19937_64& rng, std::size_t m, double density, bool allow_permutation = false) {
    while (true) {
        IntMatrix A = random_matrix(rng, m, density);
        if (strongly_connected(A) && (allow_permutation || !is_permutation(A))) return A;
    }
}

inline std::vector<double> random_energies(std::mt19937_64& rng, std::size_t m, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> N(m);
    for (auto& x : N) x = u(rng);
    return N;
}

inline Eigen::MatrixXd as_real(const IntMatrix& A) {
    const auto m = static_cast<Eigen::Index>(A.size());
    Eigen::MatrixXd R(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) R(i, j) = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return R;
}

// Depth-first sum of N(mu)^{-beta} over admissible words of length 1..L with
// the given endpoints, visiting words one at a time. Independent of the
// library's kernels.
inline double word_sum(const SystemModel& model, double beta, int L, std::optional<Generator> source,
                       std::optional<Generator> target) {
    double total = 0.0;
    std::function<void(Generator, int, double)> go = [&](Generator last, int len, double w) {
        if (!target || *target == last) total += w;
        if (len == L) return;
        for (Generator y = 0; y < model.size(); ++y)
            if (model.adjacent(last, y)) go(y, len + 1, w * std::pow(model.energy(y), -beta));
    };
    for (Generator x = 0; x < model.size(); ++x)
        if (!source || *source == x) go(x, 1, std::pow(model.energy(x), -beta));
    return total;
}

// Dominant eigenvalue modulus by a dense eigen solve.
inline double dense_radius(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline Eigen::MatrixXd transfer(const SystemModel& model, double beta) {
    const auto m = static_cast<Eigen::Index>(model.size());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index x = 0; x < m; ++x)
        for (Eigen::Index y = 0; y < m; ++y)
            if (model.adjacent(static_cast<Generator>(x), static_cast<Generator>(y)))
                M(x, y) = std::pow(model.energy(static_cast<Generator>(y)), -beta);
    return M;
}

}  // namespace testing
