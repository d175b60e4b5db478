#include "kmsphase/words.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace kmsphase {

namespace {

constexpr double kCountCeiling = 1.8e19;  // just under 2^64

// Path counts by length via the transfer recursion with unit weights.
std::vector<double> counts_by_length(const SystemModel& model, int L, const Endpoints& ends) {
    const std::size_t m = model.size();
    std::vector<double> out(static_cast<std::size_t>(L) + 1, 0.0);
    out[0] = ends.unconstrained() ? 1.0 : 0.0;
    if (L == 0) return out;
    std::vector<double> v(m, 0.0), next(m);
    for (Generator x = 0; x < m; ++x) v[x] = (!ends.source || *ends.source == x) ? 1.0 : 0.0;
    for (int n = 1; n <= L; ++n) {
        double total = 0.0;
        for (Generator x = 0; x < m; ++x)
            if (!ends.target || *ends.target == x) total += v[x];
        out[static_cast<std::size_t>(n)] = total;
        if (n == L) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (Generator x = 0; x < m; ++x)
            for (Generator y : model.successors(x)) next[y] += v[x];
        v.swap(next);
    }
    return out;
}

void check_length(int n) {
    if (n < 0) throw Error(ErrorCode::LengthTooLarge, "word length must be nonnegative");
}

void check_endpoints(const SystemModel& model, const Endpoints& ends) {
    if ((ends.source && *ends.source >= model.size()) || (ends.target && *ends.target >= model.size())) {
        throw Error(ErrorCode::DimensionMismatch, "endpoint generator out of range");
    }
}

// Every prefix of every word up to length L is visited once by the DFS.
void check_budget(const SystemModel& model, int L, const Endpoints& ends, const WordConfig& config) {
    Endpoints prefixes{ends.source, std::nullopt};
    const auto counts = counts_by_length(model, L, prefixes);
    double total = 0.0;
    for (double c : counts) total += c;
    if (total > static_cast<double>(config.max_words)) {
        throw Error(ErrorCode::LengthTooLarge,
                    "enumerating words up to length " + std::to_string(L) + " visits ~" +
                        std::to_string(static_cast<long double>(total)) + " words, cap is " +
                        std::to_string(config.max_words));
    }
}

void extend(const SystemModel& model, std::size_t n, std::vector<Generator>& prefix, double log_weight,
            std::vector<AdmissibleWord>& out) {
    if (prefix.size() == n) {
        out.push_back({prefix, log_weight});
        return;
    }
    if (prefix.empty()) {
        for (Generator x = 0; x < model.size(); ++x) {
            prefix.push_back(x);
            extend(model, n, prefix, std::log(model.energy(x)), out);
            prefix.pop_back();
        }
        return;
    }
    for (Generator y : model.successors(prefix.back())) {
        prefix.push_back(y);
        extend(model, n, prefix, log_weight + std::log(model.energy(y)), out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<AdmissibleWord> enumerate(const SystemModel& model, int n, const WordConfig& config) {
    check_length(n);
    const double count = counts_by_length(model, n, {}).back();
    if (count > static_cast<double>(config.max_words)) {
        throw Error(ErrorCode::LengthTooLarge, "P_A^" + std::to_string(n) + " has more than " +
                                                   std::to_string(config.max_words) + " words");
    }
    std::vector<AdmissibleWord> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<Generator> prefix;
    extend(model, static_cast<std::size_t>(n), prefix, 0.0, out);
    return out;
}

std::uint64_t word_count(const SystemModel& model, int n, const Endpoints& ends) {
    check_length(n);
    check_endpoints(model, ends);
    const double c = counts_by_length(model, n, ends).back();
    if (c >= kCountCeiling) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::llround(c));
}

std::vector<ShellRow> shell_table(const SystemModel& model, double beta, int L, const Endpoints& ends,
                                  const WordConfig& config) {
    check_length(L);
    check_endpoints(model, ends);
    check_budget(model, L, ends, config);
    const ShellSums shells = parallel::shell_sums(model, beta, L, ends);
    std::vector<ShellRow> rows;
    rows.reserve(shells.sums.size());
    for (std::size_t n = 0; n < shells.sums.size(); ++n) {
        rows.push_back({static_cast<int>(n), shells.counts[n], shells.sums[n]});
    }
    return rows;
}

double shell_sum(const SystemModel& model, double beta, int n, const Endpoints& ends, const WordConfig& config) {
    return shell_table(model, beta, n, ends, config).back().sum;
}

double partial_series(const SystemModel& model, double beta, int L, const Endpoints& ends,
                      const WordConfig& config) {
    const auto rows = shell_table(model, beta, L, ends, config);
    CompensatedSum total;
    for (const auto& row : rows) {
        if (row.n == 0 && !ends.unconstrained()) continue;
        total.add(row.sum);
    }
    return total.sum;
}

std::vector<double> shell_sums_transfer(const SystemModel& model, double beta, int L, const Endpoints& ends) {
    check_length(L);
    check_endpoints(model, ends);
    const std::size_t m = model.size();
    std::vector<double> w(m);
    for (Generator x = 0; x < m; ++x) w[x] = model.weight(x, beta);

    std::vector<double> out(static_cast<std::size_t>(L) + 1, 0.0);
    out[0] = ends.unconstrained() ? 1.0 : 0.0;
    if (L == 0) return out;
    std::vector<double> v(m, 0.0), next(m);
    for (Generator x = 0; x < m; ++x) v[x] = (!ends.source || *ends.source == x) ? w[x] : 0.0;
    for (int n = 1; n <= L; ++n) {
        CompensatedSum total;
        for (Generator x = 0; x < m; ++x)
            if (!ends.target || *ends.target == x) total.add(v[x]);
        out[static_cast<std::size_t>(n)] = total.sum;
        if (n == L) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (Generator x = 0; x < m; ++x)
            for (Generator y : model.successors(x)) next[y] += v[x] * w[y];
        v.swap(next);
    }
    return out;
}

}  // namespace kmsphase
