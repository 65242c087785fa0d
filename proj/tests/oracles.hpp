// Test-only reference implementations, deliberately independent of the
// library's evaluation path: numerically integrated Gaussian tail, a long
// double re-derivation of the link model, brute-force scans, and finite
// difference helpers.

#pragma once

#include "relayopt/model.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oracles {

/// Gaussian tail via composite Simpson over [z, z+12]; the truncated tail is
/// negligible relative to the result. Accurate to ~1e-13 relative for
/// |z| <= 8.
inline double q_integral(double z) {
    if (z < 0.0) return 1.0 - q_integral(-z);
    constexpr double kSpan = 12.0;
    constexpr long kIntervals = 400000;  // even
    const double h = kSpan / kIntervals;
    const auto density = [](long double t) {
        return std::exp(-0.5L * t * t) * 0.398942280401432677939946059934L;
    };
    long double sum = density(z) + density(z + kSpan);
    for (long i = 1; i < kIntervals; ++i) {
        sum += density(z + h * i) * (i % 2 == 1 ? 4.0L : 2.0L);
    }
    return static_cast<double>(sum * h / 3.0L);
}

/// Link-model chain recomputed in long double from the channel definition.
struct LongModel {
    static long double q(long double z) { return 0.5L * erfcl(z / sqrtl(2.0L)); }

    static long double rate_penalty(long double gamma, long double m, long double bits) {
        const long double u = 1.0L + gamma;
        const long double v = gamma * (gamma + 2.0L) / (u * u);
        const long double ln2 = logl(2.0L);
        return ln2 * sqrtl(m / v) * (log1pl(gamma) / ln2 - bits / m);
    }

    static long double snr(const relayopt::ScenarioParams& p, long double x, relayopt::Hop hop) {
        const long double off =
            hop == relayopt::Hop::first ? x : static_cast<long double>(p.distance_m) - x;
        const long double power = hop == relayopt::Hop::first ? p.power1_w : p.power2_w;
        const long double beta0 = powl(10.0L, static_cast<long double>(p.beta0_db) / 10.0L);
        const long double h = p.altitude_m;
        return power * beta0 / ((h * h + off * off) * static_cast<long double>(p.noise_power));
    }

    static long double hop_error(const relayopt::ScenarioParams& p, long double x, long double m,
                                 relayopt::Hop hop) {
        return q(rate_penalty(snr(p, x, hop), m, static_cast<long double>(p.packet_bits)));
    }

    static long double eps_tilde(const relayopt::ScenarioParams& p, long double x,
                                 long double m1) {
        return hop_error(p, x, m1, relayopt::Hop::first) +
               hop_error(p, x, static_cast<long double>(p.total_blocklength) - m1,
                         relayopt::Hop::second);
    }
};

template <typename F>
double central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <typename F>
double second_diff(F&& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Integer argmin of eps_tilde over m1 in [1, M-1] at a fixed position.
inline std::pair<int, double> scan_blocklength(const relayopt::ScenarioParams& p, double x) {
    int best_m1 = 1;
    double best = relayopt::approx_error(p, x, 1.0);
    for (int m1 = 2; m1 <= p.total_blocklength - 1; ++m1) {
        const double v = relayopt::approx_error(p, x, m1);
        if (v < best) {
            best = v;
            best_m1 = m1;
        }
    }
    return {best_m1, best};
}

/// Grid argmin of eps_tilde over x in [x_min, x_max] at a fixed split.
inline std::pair<double, double> scan_location(const relayopt::ScenarioParams& p, int m1,
                                               double step) {
    double best_x = p.x_min_m;
    double best = relayopt::approx_error(p, p.x_min_m, m1);
    for (double x = p.x_min_m + step; x <= p.x_max_m + 1e-12; x += step) {
        const double clamped = std::min(x, p.x_max_m);
        const double v = relayopt::approx_error(p, clamped, m1);
        if (v < best) {
            best = v;
            best_x = clamped;
        }
    }
    return {best_x, best};
}

/// 53-bit uniform real in [lo, hi); bit-stable across platforms.
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

inline int uniform_index(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Random feasible scenario over the study ranges: P1, P2 in [0.5, 5] W,
/// H in [100, 150] m, L in [50, 200] bits, M in [60, 200] symbols; geometry
/// and reference gain stay at the defaults.
inline relayopt::ScenarioParams random_scenario(std::mt19937_64& rng) {
    relayopt::ScenarioParams p;
    p.power1_w = uniform_real(rng, 0.5, 5.0);
    p.power2_w = uniform_real(rng, 0.5, 5.0);
    p.altitude_m = uniform_real(rng, 100.0, 150.0);
    p.packet_bits = uniform_index(rng, 50, 200);
    p.total_blocklength = uniform_index(rng, 60, 200);
    p.bandwidth_hz = 0.0;
    p.latency_s = 0.0;
    return p;
}

}  // namespace oracles
