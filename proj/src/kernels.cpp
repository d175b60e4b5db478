#include "kmsphase/kernels.hpp"

#include "kmsphase/critical.hpp"
#include "kmsphase/partition.hpp"

#include <cmath>
#include <exception>
#include <limits>

namespace kmsphase {

namespace {

struct ShellAccumulator {
    std::vector<CompensatedSum> sums;
    std::vector<std::uint64_t> counts;

    explicit ShellAccumulator(int L)
        : sums(static_cast<std::size_t>(L) + 1), counts(static_cast<std::size_t>(L) + 1, 0) {}

    void merge(const ShellAccumulator& other) {
        for (std::size_t n = 0; n < sums.size(); ++n) {
            sums[n].add(other.sums[n]);
            counts[n] += other.counts[n];
        }
    }

    ShellSums finish() const {
        ShellSums out;
        out.counts = counts;
        for (const auto& s : sums) out.sums.push_back(s.sum);
        return out;
    }
};

struct ShellWalker {
    const SystemModel& model;
    const std::vector<double>& w;
    const Endpoints& ends;
    int L;
    ShellAccumulator& acc;

    void walk(Generator last, int depth, double weight) const {
        if (!ends.target || *ends.target == last) {
            acc.sums[static_cast<std::size_t>(depth)].add(weight);
            ++acc.counts[static_cast<std::size_t>(depth)];
        }
        if (depth == L) return;
        for (Generator y : model.successors(last)) walk(y, depth + 1, weight * w[y]);
    }
};

std::vector<double> weights(const SystemModel& model, double beta) {
    std::vector<double> w(model.size());
    for (Generator x = 0; x < model.size(); ++x) w[x] = model.weight(x, beta);
    return w;
}

std::vector<Generator> first_letters(const SystemModel& model, const Endpoints& ends) {
    if (ends.source) return {*ends.source};
    std::vector<Generator> out(model.size());
    for (Generator x = 0; x < model.size(); ++x) out[x] = x;
    return out;
}

void seed_empty_word(ShellAccumulator& acc, const Endpoints& ends) {
    if (!ends.unconstrained()) return;
    acc.sums[0].add(1.0);
    acc.counts[0] = 1;
}

struct PairScanner {
    const PairScanInput& in;
    std::vector<double> point_lhs;  // generator_lhs grouped by column-space point

    explicit PairScanner(const PairScanInput& input) : in(input), point_lhs(input.point_masks.size(), 0.0) {
        for (std::size_t z = 0; z < in.generator_columns.size(); ++z)
            for (std::size_t c = 0; c < in.point_masks.size(); ++c)
                if (in.point_masks[c] == in.generator_columns[z]) point_lhs[c] += in.generator_lhs[z];
    }

    static bool in_v(std::uint32_t mask, std::uint32_t X, std::uint32_t Y) { return (mask & X) == X && (mask & Y) == 0; }

    // Scans every Y disjoint from X, folding into `result`.
    void scan_x(std::uint32_t X, std::uint32_t full, PairScanResult& result) const {
        const std::uint32_t rest = full & ~X;
        std::uint32_t Y = rest;
        while (true) {
            CompensatedSum direct, grouped, rhs;
            for (std::size_t z = 0; z < in.generator_columns.size(); ++z)
                if (in_v(in.generator_columns[z], X, Y)) direct.add(in.generator_lhs[z]);
            for (std::size_t c = 0; c < in.point_masks.size(); ++c) {
                if (!in_v(in.point_masks[c], X, Y)) continue;
                grouped.add(point_lhs[c]);
                rhs.add(in.atom_masses[c]);
            }
            const double gap = rhs.sum - direct.sum;
            ++result.pairs;
            if (gap < result.worst_gap) {
                result.worst_gap = gap;
                result.worst_x = X;
                result.worst_y = Y;
            }
            const double err = std::abs(direct.sum - grouped.sum);
            if (err > result.worst_atomization_error) result.worst_atomization_error = err;
            if (Y == 0) break;
            Y = (Y - 1) & rest;
        }
    }
};

PairScanResult empty_scan() {
    PairScanResult r;
    r.worst_gap = std::numeric_limits<double>::infinity();
    return r;
}

// Earlier X wins ties, matching the serial visiting order.
void fold(PairScanResult& into, const PairScanResult& part) {
    if (part.worst_gap < into.worst_gap) {
        into.worst_gap = part.worst_gap;
        into.worst_x = part.worst_x;
        into.worst_y = part.worst_y;
    }
    into.pairs += part.pairs;
    if (part.worst_atomization_error > into.worst_atomization_error)
        into.worst_atomization_error = part.worst_atomization_error;
}

std::uint32_t full_mask(int m) { return m >= 32 ? ~0u : ((1u << m) - 1u); }

SweepRow sweep_row(const SystemModel& model, double beta, double beta_c, double margin) {
    SweepRow row;
    row.beta = beta;
    if (beta <= 0.0) {
        row.spectral_radius = spectral_radius(model, beta);
    } else {
        const PartitionReport rep = evaluate(model, beta, PartitionConfig{margin});
        row.spectral_radius = rep.spectral_radius;
        row.z_total = rep.z_total;
    }
    if (std::abs(beta - beta_c) <= 1e-9) {
        row.regime = "critical";
    } else {
        row.regime = beta < beta_c ? "below" : "above";
    }
    return row;
}

}  // namespace

namespace reference {

ShellSums shell_sums(const SystemModel& model, double beta, int L, const Endpoints& ends) {
    const auto w = weights(model, beta);
    ShellAccumulator acc(L);
    seed_empty_word(acc, ends);
    if (L >= 1) {
        const ShellWalker walker{model, w, ends, L, acc};
        for (Generator x : first_letters(model, ends)) walker.walk(x, 1, w[x]);
    }
    return acc.finish();
}

PairScanResult scan_pairs(const PairScanInput& input) {
    const PairScanner scanner(input);
    const std::uint32_t full = full_mask(input.m);
    PairScanResult result = empty_scan();
    for (std::uint64_t X = 0; X <= full; ++X) scanner.scan_x(static_cast<std::uint32_t>(X), full, result);
    return result;
}

std::vector<SweepRow> sweep(const SystemModel& model, std::span<const double> betas, double beta_c,
                            double margin) {
    std::vector<SweepRow> rows;
    rows.reserve(betas.size());
    for (double b : betas) rows.push_back(sweep_row(model, b, beta_c, margin));
    return rows;
}

}  // namespace reference

namespace parallel {

ShellSums shell_sums(const SystemModel& model, double beta, int L, const Endpoints& ends) {
    const auto w = weights(model, beta);
    const auto firsts = first_letters(model, ends);
    std::vector<ShellAccumulator> parts(firsts.size(), ShellAccumulator(L));
    if (L >= 1) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < firsts.size(); ++i) {
            const ShellWalker walker{model, w, ends, L, parts[i]};
            walker.walk(firsts[i], 1, w[firsts[i]]);
        }
    }
    ShellAccumulator acc(L);
    seed_empty_word(acc, ends);
    for (const auto& p : parts) acc.merge(p);
    return acc.finish();
}

PairScanResult scan_pairs(const PairScanInput& input) {
    const PairScanner scanner(input);
    const std::uint32_t full = full_mask(input.m);
    const std::size_t n = static_cast<std::size_t>(full) + 1;
    std::vector<PairScanResult> parts(n, empty_scan());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t X = 0; X < n; ++X) scanner.scan_x(static_cast<std::uint32_t>(X), full, parts[X]);
    PairScanResult result = empty_scan();
    for (const auto& p : parts) fold(result, p);
    return result;
}

std::vector<SweepRow> sweep(const SystemModel& model, std::span<const double> betas, double beta_c,
                            double margin) {
    std::vector<SweepRow> rows(betas.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < betas.size(); ++i) {
        try {
            rows[i] = sweep_row(model, betas[i], beta_c, margin);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

}  // namespace parallel

}  // namespace kmsphase
