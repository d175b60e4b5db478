#include "kmsphase/star.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace kmsphase {

namespace {

// Terms of the default family are summed exactly up to this original index;
// the rest is enclosed by integrals.
constexpr std::size_t kHeadEnd = 1'000'000;
constexpr double kHeadRelError = 1e-13;

double default_energy(std::size_t k) {
    const double l = std::log(static_cast<double>(k) + 1.0);
    return static_cast<double>(k) * l * l;
}

// T(beta, L) = int_{e^L}^inf (x ln^2 x)^{-beta} dx
//            = int_0^{1/L} t^{2beta-2} exp(-(beta-1)/t) dt   (x = e^{1/t}).
double log_square_tail(double beta, double L) {
    if (beta == 1.0) return 1.0 / L;
    const auto f = [beta](double t) {
        if (t <= 0.0) return 0.0;
        return std::pow(t, 2.0 * beta - 2.0) * std::exp(-(beta - 1.0) / t);
    };
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0 / L, 15, 1e-14, &err);
    return v + err;  // the caller pads lower bounds separately
}

// Sum over original indices k in (from, kHeadEnd] plus the integral
// enclosure of k > kHeadEnd.
ZetaEnclosure default_zeta_from(double beta, std::size_t from) {
    CompensatedSum head;
    for (std::size_t k = from + 1; k <= kHeadEnd; ++k) head.add(std::pow(default_energy(k), -beta));
    const double H = static_cast<double>(kHeadEnd);
    // sum_{k>H} (k ln^2(k+1))^{-beta} lies between T(beta, ln(H+2)) and T(beta, ln H).
    const double tail_hi = log_square_tail(beta, std::log(H));
    double tail_lo = log_square_tail(beta, std::log(H + 2.0));
    if (beta != 1.0) tail_lo *= 1.0 - 1e-10;
    return {head.sum * (1.0 - kHeadRelError) + tail_lo, head.sum * (1.0 + kHeadRelError) + tail_hi};
}

bool dagger_holds(const ZetaEnclosure& z, double beta_bar) { return z.upper < std::pow(2.0, beta_bar); }

}  // namespace

double StarSystem::energy(std::size_t j) const {
    if (j == 0) throw Error(ErrorCode::InvalidArgument, "starred generators are numbered from 1");
    if (family_ == StarFamily::Default) return default_energy(j + static_cast<std::size_t>(drop_));
    if (j > terms_.size()) throw Error(ErrorCode::InvalidArgument, "term index past the supplied list");
    return terms_[j - 1];
}

std::optional<std::size_t> StarSystem::term_count() const {
    if (family_ == StarFamily::Default) return std::nullopt;
    return terms_.size();
}

ZetaEnclosure StarSystem::zeta(double beta) const { return zeta_tail(beta, 0); }

ZetaEnclosure StarSystem::zeta_tail(double beta, std::size_t K) const {
    if (beta < beta_bar_) {
        throw Error(ErrorCode::BelowAbscissa,
                    "beta = " + std::to_string(beta) + " is below the abscissa " + std::to_string(beta_bar_));
    }
    if (family_ == StarFamily::Default) {
        const std::size_t from = static_cast<std::size_t>(drop_) + K;
        if (from >= kHeadEnd) throw Error(ErrorCode::InvalidArgument, "truncation level beyond the summed head");
        return default_zeta_from(beta, from);
    }
    CompensatedSum s;
    for (std::size_t j = K; j < terms_.size(); ++j) s.add(std::pow(terms_[j], -beta));
    return {s.sum, s.sum};
}

StarSystem build_star(const StarSpec& spec) {
    StarSystem sys;
    sys.family_ = spec.family;
    if (spec.family == StarFamily::Default) {
        sys.beta_bar_ = 1.0;
        const auto valid_energy = [](int d) { return default_energy(static_cast<std::size_t>(d) + 1) >= 2.0; };
        if (spec.drop) {
            if (*spec.drop < 0) throw Error(ErrorCode::InvalidArgument, "drop must be nonnegative");
            if (!valid_energy(*spec.drop)) {
                const auto k = static_cast<std::size_t>(*spec.drop) + 1;
                throw Error(ErrorCode::EnergyBelowTwo,
                            "N_" + std::to_string(k) + " = " + std::to_string(default_energy(k)) + " < 2", k);
            }
        }
        int d = spec.drop.value_or(0);
        while (!valid_energy(d)) ++d;
        // zeta(1) over k > d, lowered term by term as d grows.
        ZetaEnclosure z = default_zeta_from(1.0, static_cast<std::size_t>(d));
        const int first = d;
        while (!dagger_holds(z, 1.0)) {
            const double term = 1.0 / default_energy(static_cast<std::size_t>(d) + 1);
            z.lower -= term;
            z.upper -= term;
            ++d;
        }
        if (spec.drop && d != first) {
            throw Error(ErrorCode::ConditionDaggerFails,
                        "zeta(1) >= 2 with drop " + std::to_string(first) + "; needs drop " + std::to_string(d),
                        static_cast<std::size_t>(d));
        }
        sys.drop_ = d;
        return sys;
    }

    if (!(spec.declared_abscissa >= 0.0) || std::isinf(spec.declared_abscissa)) {
        throw Error(ErrorCode::InvalidArgument, "declared abscissa must be a finite nonnegative number");
    }
    sys.beta_bar_ = spec.declared_abscissa;
    const std::size_t n = spec.terms.size();
    const auto zeta_from = [&](std::size_t d) {
        CompensatedSum s;
        for (std::size_t k = d; k < n; ++k) s.add(std::pow(spec.terms[k], -sys.beta_bar_));
        return ZetaEnclosure{s.sum, s.sum};
    };
    const auto first_low_energy = [&](std::size_t d) -> std::optional<std::size_t> {
        for (std::size_t k = d; k < n; ++k)
            if (spec.terms[k] < 2.0) return k + 1;
        return std::nullopt;
    };
    std::size_t d = 0;
    if (spec.drop) {
        if (*spec.drop < 0) throw Error(ErrorCode::InvalidArgument, "drop must be nonnegative");
        d = static_cast<std::size_t>(*spec.drop);
        if (auto k = first_low_energy(d)) {
            throw Error(ErrorCode::EnergyBelowTwo,
                        "N_" + std::to_string(*k) + " = " + std::to_string(spec.terms[*k - 1]) + " < 2", *k);
        }
    } else {
        while (first_low_energy(d)) ++d;
    }
    const std::size_t first = d;
    while (d < n && !dagger_holds(zeta_from(d), sys.beta_bar_)) ++d;
    if (d >= n) {
        throw Error(ErrorCode::ConditionDaggerFails,
                    "zeta(beta_bar) < 2^{beta_bar} fails for every drop that keeps a term");
    }
    if (spec.drop && d != first) {
        throw Error(ErrorCode::ConditionDaggerFails,
                    "zeta(beta_bar) >= 2^{beta_bar}; needs drop " + std::to_string(d), d);
    }
    sys.drop_ = static_cast<int>(d);
    sys.terms_.assign(spec.terms.begin() + static_cast<std::ptrdiff_t>(d), spec.terms.end());
    return sys;
}

std::optional<double> z0_displayed_formula(double zeta, double beta) {
    const double a = std::pow(2.0, -beta);
    if (a * zeta >= 1.0) return std::nullopt;
    return (1.0 + a) / (1.0 - a * zeta);
}

std::optional<double> star_z0(const StarSystem& sys, double beta) {
    return z0_displayed_formula(sys.zeta(beta).value(), beta);
}

std::optional<double> StarPartition::z_k(const StarSystem& sys, std::size_t k) const {
    if (!z0_words) return std::nullopt;
    return std::pow(sys.energy(k), -beta) * (1.0 + *z0_words);
}

StarPartition star_partition(const StarSystem& sys, double beta) {
    StarPartition p;
    p.beta = beta;
    p.zeta = sys.zeta(beta);
    p.z0_displayed = z0_displayed_formula(p.zeta.value(), beta);
    p.convention =
        "z0_displayed keeps the empty word (n = 0 term of its first sum); z0_words = z0_displayed - 1 sums "
        "nonempty words ending in 0 and feeds Z_k, Z and Z(beta, gamma)";
    if (p.z0_displayed) {
        p.z0_words = *p.z0_displayed - 1.0;
        p.z_total = (1.0 + *p.z0_words) * (1.0 + p.zeta.value());
    }
    return p;
}

TruncationBounds truncation_bounds(const StarSystem& sys, double beta, std::size_t K) {
    const double a = std::pow(2.0, -beta);
    const ZetaEnclosure full = sys.zeta(beta);
    const double tail = sys.zeta_tail(beta, K).upper;
    const double denom = 1.0 - a * full.upper;
    if (!(denom > 0.0)) throw Error(ErrorCode::DivergentNormalizer, "Z_0 diverges at this beta");
    TruncationBounds b;
    b.z0 = a * (1.0 + a) / (denom * denom) * tail;
    const double z0_hi = a * (1.0 + full.upper) / denom;
    b.z_total = b.z0 * (1.0 + full.upper) + (1.0 + z0_hi) * tail;
    return b;
}

SystemModel truncate(const StarSystem& sys, std::size_t K) {
    if (K == 0) throw Error(ErrorCode::InvalidArgument, "truncation needs K >= 1");
    if (auto n = sys.term_count(); n && K > *n) throw Error(ErrorCode::InvalidArgument, "K exceeds the supplied terms");
    const std::size_t m = K + 1;
    IntMatrix A(m, std::vector<int>(m, 0));
    std::vector<double> energies(m);
    energies[0] = 2.0;
    for (std::size_t k = 1; k < m; ++k) {
        A[0][k] = 1;
        A[k][0] = 1;
        energies[k] = sys.energy(k);
    }
    return build_model(A, energies);
}

StarState star_kms(const StarSystem& sys, double beta, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
    const double zeta = sys.zeta(beta).value();
    const double a = std::pow(2.0, -beta);
    const double q = 1.0 - a * zeta;
    if (!(q > 0.0)) throw Error(ErrorCode::DivergentNormalizer, "Z_0 diverges at this beta");

    const double z0 = a * (1.0 + zeta) / q;          // nonempty words ending in 0
    const double z_b = 1.0 + z0;                     // Z(beta, delta_{c_B})
    const double z_a = 1.0 + (1.0 + z0) * zeta;      // Z(beta, delta_{c_A})
    const double g_b = (1.0 - t) / z_b;
    const double g_a = t / z_a;

    // Stems starting with 0 land on c_A: Z_00 = a/q, sum_k Z_0k = a zeta/q.
    // Stems starting with k >= 1 land on c_B: sum_k Z_k0 = zeta a/q,
    // sum_{k,k'} Z_kk' = zeta + a zeta^2/q.
    StarState s;
    s.beta = beta;
    s.t = t;
    s.atom_a = g_a + (a / q) * g_b + (a * zeta / q) * g_a;
    s.atom_b = g_b + (zeta * a / q) * g_b + (zeta + a * zeta * zeta / q) * g_a;
    s.q0 = s.atom_b;
    s.qk = s.atom_a;
    s.z_gamma = g_b * (1.0 + z0) + g_a * (1.0 + (1.0 + z0) * zeta);
    s.normalization_residual = std::abs(s.atom_a + s.atom_b - 1.0);
    return s;
}

StarState star_kms_at_critical(const StarSystem& sys, double t) { return star_kms(sys, sys.beta_bar(), t); }

}  // namespace kmsphase
