#include "kmsphase/model.hpp"

#include "kmsphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace kmsphase {

namespace {

ColumnSpace build_column_space(std::size_t m, const std::vector<std::uint8_t>& adj) {
    std::map<BitVector, std::size_t> index;
    std::vector<BitVector> cols(m, BitVector(m, false));
    for (std::size_t z = 0; z < m; ++z) {
        for (std::size_t x = 0; x < m; ++x) {
            cols[z][x] = adj[x * m + z] != 0;
        }
        index.emplace(cols[z], 0);
    }
    ColumnSpace space;
    std::size_t next = 0;
    for (auto& [bits, idx] : index) {
        idx = next++;
        space.points.push_back(bits);
        if (std::none_of(bits.begin(), bits.end(), [](bool b) { return b; })) {
            space.contains_zero = true;
        }
    }
    space.column_of.resize(m);
    for (std::size_t z = 0; z < m; ++z) {
        space.column_of[z] = index.at(cols[z]);
    }
    return space;
}

// Tarjan's algorithm; m stays small enough for recursion.
struct Tarjan {
    const SystemModel& model;
    std::vector<int> index, low;
    std::vector<bool> on_stack;
    std::vector<Generator> stack;
    std::vector<std::vector<Generator>> components;
    int counter = 0;

    explicit Tarjan(const SystemModel& mdl)
        : model(mdl), index(mdl.size(), -1), low(mdl.size(), 0), on_stack(mdl.size(), false) {}

    void visit(Generator v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (Generator w : model.successors(v)) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<Generator> comp;
            Generator w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            components.push_back(std::move(comp));
        }
    }
};

}  // namespace

BitVector SystemModel::column(Generator z) const {
    BitVector c(m_, false);
    for (std::size_t x = 0; x < m_; ++x) c[x] = adjacent(x, z);
    return c;
}

IntMatrix SystemModel::matrix() const {
    IntMatrix out(m_, std::vector<int>(m_, 0));
    for (std::size_t x = 0; x < m_; ++x)
        for (std::size_t y = 0; y < m_; ++y) out[x][y] = adjacent(x, y) ? 1 : 0;
    return out;
}

double SystemModel::weight(Generator x, double beta) const {
    if (std::isinf(beta) && beta > 0) return 0.0;
    return std::pow(energies_[x], -beta);
}

SystemModel build_model(const IntMatrix& matrix, std::span<const double> energies,
                        std::vector<std::string> labels) {
    const std::size_t m = matrix.size();
    if (m == 0) throw Error(ErrorCode::DimensionMismatch, "matrix must have at least one row");
    if (energies.size() != m) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(m) + " energies, got " + std::to_string(energies.size()));
    }
    if (!labels.empty() && labels.size() != m) {
        throw Error(ErrorCode::DimensionMismatch, "labels must match the matrix dimension");
    }

    SystemModel model;
    model.m_ = m;
    model.adj_.assign(m * m, 0);
    for (std::size_t x = 0; x < m; ++x) {
        if (matrix[x].size() != m) {
            throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(x) + " has wrong length", x);
        }
        bool any = false;
        for (std::size_t y = 0; y < m; ++y) {
            const int a = matrix[x][y];
            if (a != 0 && a != 1) {
                throw Error(ErrorCode::NotBoolean, "entry (" + std::to_string(x) + "," + std::to_string(y) + ") is not 0/1", x);
            }
            model.adj_[x * m + y] = static_cast<std::uint8_t>(a);
            any = any || a == 1;
        }
        if (!any) throw Error(ErrorCode::ZeroRow, "row " + std::to_string(x) + " is identically zero", x);
    }
    for (std::size_t x = 0; x < m; ++x) {
        if (!(energies[x] > 1.0) || !std::isfinite(energies[x])) {
            throw Error(ErrorCode::EnergyNotAboveOne,
                        "energy " + std::to_string(x) + " must be a finite real > 1", x);
        }
    }
    model.energies_.assign(energies.begin(), energies.end());
    if (labels.empty()) {
        labels.reserve(m);
        for (std::size_t x = 0; x < m; ++x) labels.push_back(std::to_string(x));
    }
    model.labels_ = std::move(labels);
    model.successors_.resize(m);
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y)
            if (model.adj_[x * m + y]) model.successors_[x].push_back(y);
    model.columns_ = build_column_space(m, model.adj_);
    return model;
}

const ColumnSpace& column_space(const SystemModel& model) { return model.columns(); }

int a_xyz(const SystemModel& model, std::span<const Generator> X, std::span<const Generator> Y, Generator z) {
    int value = 1;
    for (Generator x : X) value *= model.adjacent(x, z) ? 1 : 0;
    for (Generator y : Y) value *= model.adjacent(y, z) ? 0 : 1;
    return value;
}

std::vector<std::vector<Generator>> strongly_connected_components(const SystemModel& model) {
    Tarjan t(model);
    for (Generator v = 0; v < model.size(); ++v)
        if (t.index[v] < 0) t.visit(v);
    std::sort(t.components.begin(), t.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return std::move(t.components);
}

std::vector<Generator> ancestors(const SystemModel& model, Generator target) {
    const std::size_t m = model.size();
    std::vector<bool> seen(m, false);
    std::vector<Generator> todo{target};
    seen[target] = true;
    while (!todo.empty()) {
        const Generator y = todo.back();
        todo.pop_back();
        for (Generator x = 0; x < m; ++x) {
            if (!seen[x] && model.adjacent(x, y)) {
                seen[x] = true;
                todo.push_back(x);
            }
        }
    }
    std::vector<Generator> out;
    for (Generator x = 0; x < m; ++x)
        if (seen[x]) out.push_back(x);
    return out;
}

PropertyReport properties(const SystemModel& model) {
    const std::size_t m = model.size();
    PropertyReport report;
    report.irreducible = strongly_connected_components(model).size() == 1;
    report.no_zero_column = !model.columns().contains_zero;

    // Greedy cover: repeatedly take the column hitting the most uncovered rows.
    std::vector<bool> covered(m, false);
    std::size_t remaining = m;
    std::vector<Generator> targets;
    while (remaining > 0) {
        Generator best = 0;
        std::size_t best_gain = 0;
        for (Generator y = 0; y < m; ++y) {
            std::size_t gain = 0;
            for (Generator x = 0; x < m; ++x)
                if (!covered[x] && model.adjacent(x, y)) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = y;
            }
        }
        targets.push_back(best);
        for (Generator x = 0; x < m; ++x) {
            if (!covered[x] && model.adjacent(x, best)) {
                covered[x] = true;
                --remaining;
            }
        }
    }
    std::sort(targets.begin(), targets.end());
    report.finite_target_set = std::move(targets);

    report.energy_gap = *std::min_element(model.energies().begin(), model.energies().end());
    report.ta_equals_oa = false;  // needs infinitely many generators per column neighbourhood
    return report;
}

}  // namespace kmsphase
