#pragma once

// The infinite "star" matrix: generators 0, 1, 2, ... with A(0,k) = A(k,0) = 1
// for k >= 1 and every other entry 0, N(0) = 2 and N(k) = N_k taken from a
// Dirichlet series zeta(beta) = sum_k N_k^{-beta} that converges at its
// abscissa beta_bar. With zeta(beta_bar) < 2^{beta_bar} the critical point is
// beta_bar itself and Z is finite there, so the critical KMS states form the
// same 1-simplex as above criticality and are all of finite type.

#include "kmsphase/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kmsphase {

enum class StarFamily {
    Default,   // N_k = k ln^2(k+1), abscissa 1
    UserList,  // finite list, abscissa declared by the caller
};

struct StarSpec {
    StarFamily family = StarFamily::Default;
    std::vector<double> terms;           // UserList only, N_1, N_2, ...
    double declared_abscissa = 0.0;      // UserList only
    std::optional<int> drop;             // leading terms to discard; empty = minimal valid
};

/// Certified bracket lower <= zeta(beta) <= upper.
struct ZetaEnclosure {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] double value() const noexcept { return 0.5 * (lower + upper); }
};

class StarSystem {
public:
    [[nodiscard]] StarFamily family() const noexcept { return family_; }
    [[nodiscard]] int drop() const noexcept { return drop_; }
    [[nodiscard]] double beta_bar() const noexcept { return beta_bar_; }
    [[nodiscard]] bool tail_certified() const noexcept { return family_ == StarFamily::Default; }

    /// N'_j after dropping and relabeling, j >= 1.
    [[nodiscard]] double energy(std::size_t j) const;
    /// Number of retained terms, or empty for the infinite default family.
    [[nodiscard]] std::optional<std::size_t> term_count() const;

    /// zeta over the retained terms; throws BelowAbscissa for beta < beta_bar.
    [[nodiscard]] ZetaEnclosure zeta(double beta) const;
    /// Sum of N'_j^{-beta} over j > K, bracketed.
    [[nodiscard]] ZetaEnclosure zeta_tail(double beta, std::size_t K) const;

    friend StarSystem build_star(const StarSpec& spec);

private:
    StarFamily family_ = StarFamily::Default;
    int drop_ = 0;
    double beta_bar_ = 1.0;
    std::vector<double> terms_;
};

/// Validates N_k >= 2 and the condition zeta(beta_bar) < 2^{beta_bar}.
/// Throws EnergyBelowTwo(k) (1-based original index) or
/// ConditionDaggerFails(needed drop, when one exists).
StarSystem build_star(const StarSpec& spec);

/// (1 + 2^{-beta}) / (1 - 2^{-beta} zeta); empty (divergent) when 2^{-beta} zeta >= 1.
std::optional<double> z0_displayed_formula(double zeta, double beta);

/// The closed form for Z_0 exactly as displayed for this family. Its n = 0
/// term of the first sum is the empty word, so it equals 1 + Z_0 where Z_0
/// sums over nonempty words ending in 0. Throws BelowAbscissa.
std::optional<double> star_z0(const StarSystem& sys, double beta);

struct StarPartition {
    double beta = 0.0;
    ZetaEnclosure zeta;
    std::optional<double> z0_displayed;
    std::optional<double> z0_words;  // nonempty words ending in 0 = displayed - 1
    std::optional<double> z_total;   // (1 + z0_words)(1 + zeta)
    std::string convention;

    /// Z_k = N_k^{-beta} (1 + Z_0): the word "k" or w0 followed by k.
    [[nodiscard]] std::optional<double> z_k(const StarSystem& sys, std::size_t k) const;
};

StarPartition star_partition(const StarSystem& sys, double beta);

/// Upper bounds on closed form minus the level-K truncation, from
/// convexity of Z_0 in zeta: Z_0(zeta) - Z_0(zeta_K) <= a(1+a)/(1 - a zeta)^2 (zeta - zeta_K).
struct TruncationBounds {
    double z0 = 0.0;
    double z_total = 0.0;
};

TruncationBounds truncation_bounds(const StarSystem& sys, double beta, std::size_t K);

/// Finite model on generators {0, ..., K}.
SystemModel truncate(const StarSystem& sys, std::size_t K);

/// Generator values of the KMS_beta state from
/// gamma_t = t delta_{c_A}/Z(beta, delta_{c_A}) + (1-t) delta_{c_B}/Z(beta, delta_{c_B}),
/// where c_A = column 0 = the starred generators and c_B = {0} is every other column.
struct StarState {
    double beta = 0.0;
    double t = 0.0;
    double atom_a = 0.0;     // rho({c_A}) = rho(q_k) for every k >= 1
    double atom_b = 0.0;     // rho({c_B}) = rho(q_0)
    double q0 = 0.0;
    double qk = 0.0;
    double z_gamma = 0.0;    // Z(beta, gamma_t); 1 by construction
    double normalization_residual = 0.0;  // |atom_a + atom_b - 1| between independent formulas
};

StarState star_kms(const StarSystem& sys, double beta, double t);

/// star_kms at beta_bar. Throws InvalidArgument unless t in [0, 1].
StarState star_kms_at_critical(const StarSystem& sys, double t);

}  // namespace kmsphase
