#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kmsphase {

/// Generators are the contiguous indices 0..m-1.
using Generator = std::size_t;

/// A column of A as a bit-vector: bit x is A(x, z).
using BitVector = std::vector<bool>;

/// Row-major 0/1 input as read from configuration files.
using IntMatrix = std::vector<std::vector<int>>;

/// Distinct columns of A, i.e. the finite column space Sigma_A.
///
/// Points are kept in lexicographic order of their bit-vectors so that point
/// indices are deterministic for a given matrix.
struct ColumnSpace {
    std::vector<BitVector> points;
    std::vector<std::size_t> column_of;  // generator z -> index of c_z in points
    bool contains_zero = false;

    [[nodiscard]] std::size_t d() const noexcept { return points.size(); }
};

/// The dynamical system: a 0/1 transition matrix without zero rows and an
/// energy N(x) > 1 per generator. Immutable after construction.
class SystemModel {
public:
    [[nodiscard]] std::size_t size() const noexcept { return m_; }
    [[nodiscard]] bool adjacent(Generator x, Generator y) const noexcept { return adj_[x * m_ + y] != 0; }
    [[nodiscard]] double energy(Generator x) const noexcept { return energies_[x]; }
    [[nodiscard]] std::span<const double> energies() const noexcept { return energies_; }
    [[nodiscard]] std::span<const Generator> successors(Generator x) const noexcept { return successors_[x]; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] const ColumnSpace& columns() const noexcept { return columns_; }
    [[nodiscard]] BitVector column(Generator z) const;
    [[nodiscard]] IntMatrix matrix() const;

    /// N(x)^{-beta}, with N(x)^{-inf} = 0.
    [[nodiscard]] double weight(Generator x, double beta) const;

    friend SystemModel build_model(const IntMatrix& matrix, std::span<const double> energies,
                                   std::vector<std::string> labels);

private:
    SystemModel() = default;

    std::size_t m_ = 0;
    std::vector<std::uint8_t> adj_;
    std::vector<double> energies_;
    std::vector<std::string> labels_;
    std::vector<std::vector<Generator>> successors_;
    ColumnSpace columns_;
};

/// Validates and builds a model. Throws Error with ZeroRow, EnergyNotAboveOne,
/// DimensionMismatch or NotBoolean.
SystemModel build_model(const IntMatrix& matrix, std::span<const double> energies,
                        std::vector<std::string> labels = {});

struct PropertyReport {
    bool irreducible = false;
    bool no_zero_column = false;
    std::optional<std::vector<Generator>> finite_target_set;
    double energy_gap = 0.0;
    bool ta_equals_oa = false;
};

PropertyReport properties(const SystemModel& model);

const ColumnSpace& column_space(const SystemModel& model);

/// A(X, Y, z) = prod_{x in X} A(x,z) prod_{y in Y} (1 - A(y,z)).
int a_xyz(const SystemModel& model, std::span<const Generator> X, std::span<const Generator> Y, Generator z);

/// Strongly connected components of the transition graph (edge x -> y when
/// A(x,y) = 1), each sorted, listed in order of their smallest generator.
std::vector<std::vector<Generator>> strongly_connected_components(const SystemModel& model);

/// Generators that reach `target` by an admissible word (target included).
std::vector<Generator> ancestors(const SystemModel& model, Generator target);

}  // namespace kmsphase
