#pragma once

#include "kmsphase/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace kmsphase {

/// An admissible word mu with log N(mu) = sum_i log N(mu_i).
struct AdmissibleWord {
    std::vector<Generator> letters;
    double log_weight = 0.0;

    [[nodiscard]] std::size_t length() const noexcept { return letters.size(); }
};

struct WordConfig {
    std::uint64_t max_words = 10'000'000;
};

/// Optional first/last letter constraints of a shell.
struct Endpoints {
    std::optional<Generator> source;
    std::optional<Generator> target;

    [[nodiscard]] bool unconstrained() const noexcept { return !source && !target; }
};

/// P_A^n in lexicographic order; n = 0 yields the empty word.
std::vector<AdmissibleWord> enumerate(const SystemModel& model, int n, const WordConfig& config = {});

/// Number of admissible words of length n matching `ends` (saturates at
/// 2^64 - 1 past that).
std::uint64_t word_count(const SystemModel& model, int n, const Endpoints& ends = {});

/// Brute-force sum of N(mu)^{-beta} over the length-n words matching `ends`.
double shell_sum(const SystemModel& model, double beta, int n, const Endpoints& ends = {},
                 const WordConfig& config = {});

/// Truncated Dirichlet series by enumeration: shells 0..L when unconstrained,
/// shells 1..L when a source or target is fixed (Z_y and Z_xy exclude e).
double partial_series(const SystemModel& model, double beta, int L, const Endpoints& ends = {},
                      const WordConfig& config = {});

struct ShellRow {
    int n = 0;
    std::uint64_t count = 0;
    double sum = 0.0;
};

/// Per-shell table n = 0..L from a single enumeration pass.
std::vector<ShellRow> shell_table(const SystemModel& model, double beta, int L, const Endpoints& ends = {},
                                  const WordConfig& config = {});

/// The same shells by the last-letter transfer recursion
/// v_{n+1}(y) = sum_x v_n(x) A(x,y) N(y)^{-beta}; no enumeration, any L.
std::vector<double> shell_sums_transfer(const SystemModel& model, double beta, int L, const Endpoints& ends = {});

}  // namespace kmsphase
