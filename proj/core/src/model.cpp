#include "relayopt/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace relayopt {

namespace {

constexpr double kGammaFloor = 1e-12;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)

void require_gamma(double gamma, const char* where) {
    if (!(gamma >= kGammaFloor)) {
        throw domain_error(std::string(where) + ": snr " + std::to_string(gamma) +
                           " below domain floor 1e-12");
    }
}

void require_finite_x(double x, const char* where) {
    if (!std::isfinite(x)) {
        throw domain_error(std::string(where) + ": position x must be finite");
    }
}

double lateral_offset(const ScenarioParams& p, double x, Hop hop) {
    return hop == Hop::first ? x : p.distance_m - x;
}

double tx_power(const ScenarioParams& p, Hop hop) {
    return hop == Hop::first ? p.power1_w : p.power2_w;
}

/// Standard normal density.
double phi(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

/// (1+gamma)^2 - 1, computed as gamma*(gamma+2) to avoid cancellation.
double snr_span(double gamma) { return gamma * (gamma + 2.0); }

/// d(eps)/d(gamma) for one hop at fixed m.
double hop_error_dgamma(double gamma, double m, double bits) {
    const double f = rate_penalty(gamma, m, bits);
    return -phi(f) * rate_penalty_dgamma(gamma, m, bits);
}

/// d^2(eps)/d(gamma)^2 for one hop at fixed m.
double hop_error_dgamma2(double gamma, double m, double bits) {
    const double f = rate_penalty(gamma, m, bits);
    const double df = rate_penalty_dgamma(gamma, m, bits);
    return phi(f) * (f * df * df - rate_penalty_dgamma2(gamma, m, bits));
}

struct HopState {
    double eps;
    double deps_dx;
};

HopState hop_state(const ScenarioParams& p, double x, double m, Hop hop) {
    const double gamma = snr(p, x, hop);
    return {hop_error(p, x, m, hop),
            hop_error_dgamma(gamma, m, p.packet_bits) * snr_slope(p, x, hop)};
}

}  // namespace

void ScenarioParams::validate() const {
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(distance_m) || !(distance_m > 0.0))
        throw config_error("D_m must be finite and > 0");
    if (!finite(altitude_m) || !(altitude_m > 0.0))
        throw config_error("H_m must be finite and > 0");
    if (!finite(x_min_m) || !(x_min_m >= 0.0))
        throw config_error("d1_m must be finite and >= 0");
    if (!finite(x_max_m) || !(x_min_m < x_max_m))
        throw config_error("interval invariant d1_m < d2_m violated");
    if (!(x_max_m <= distance_m))
        throw config_error("interval invariant d2_m <= D_m violated");
    if (packet_bits < 1) throw config_error("L_bits must be >= 1");
    if (total_blocklength < 2) throw config_error("M_symbols must be >= 2");
    if (!finite(power1_w) || !(power1_w > 0.0)) throw config_error("P1_w must be > 0");
    if (!finite(power2_w) || !(power2_w > 0.0)) throw config_error("P2_w must be > 0");
    if (!finite(beta0_db)) throw config_error("beta0_db must be finite");
    if (!finite(noise_power) || !(noise_power > 0.0))
        throw config_error("noise must be > 0");
    if (bandwidth_hz > 0.0 && latency_s > 0.0) {
        const auto derived = static_cast<long long>(std::llround(bandwidth_hz * latency_s));
        if (derived != total_blocklength)
            throw config_error("M_symbols must equal round(B_hz * Tmax_s) = " +
                               std::to_string(derived));
    }
}

double beta0_linear(const ScenarioParams& params) {
    return std::pow(10.0, params.beta0_db / 10.0);
}

double snr(const ScenarioParams& p, double x, Hop hop) {
    require_finite_x(x, "snr");
    const double off = lateral_offset(p, x, hop);
    const double range_sq = p.altitude_m * p.altitude_m + off * off;
    return tx_power(p, hop) * beta0_linear(p) / (range_sq * p.noise_power);
}

double snr_slope(const ScenarioParams& p, double x, Hop hop) {
    require_finite_x(x, "snr_slope");
    const double off = lateral_offset(p, x, hop);
    const double range_sq = p.altitude_m * p.altitude_m + off * off;
    const double k = tx_power(p, hop) * beta0_linear(p) / p.noise_power;
    // d(off)/dx is +1 for the first hop, -1 for the second; both fold into
    // the overall sign: gamma1 falls and gamma2 rises as x grows.
    const double sign = hop == Hop::first ? -1.0 : 1.0;
    return sign * 2.0 * k * off / (range_sq * range_sq);
}

double snr_curvature(const ScenarioParams& p, double x, Hop hop) {
    require_finite_x(x, "snr_curvature");
    const double off = lateral_offset(p, x, hop);
    const double h_sq = p.altitude_m * p.altitude_m;
    const double range_sq = h_sq + off * off;
    const double k = tx_power(p, hop) * beta0_linear(p) / p.noise_power;
    const double off_sq = off * off;
    const double numer = 6.0 * k * off_sq * off_sq + 4.0 * k * h_sq * off_sq - 2.0 * k * h_sq * h_sq;
    const double range_4 = range_sq * range_sq;
    return numer / (range_4 * range_4);
}

double dispersion(double gamma) {
    require_gamma(gamma, "dispersion");
    const double u = 1.0 + gamma;
    return snr_span(gamma) / (u * u);
}

double rate_penalty(double gamma, double m, double packet_bits) {
    require_gamma(gamma, "rate_penalty");
    if (!(m >= 1.0)) throw domain_error("rate_penalty: blocklength m must be >= 1");
    if (!(packet_bits >= 1.0)) throw domain_error("rate_penalty: packet size must be >= 1 bit");
    const double v = dispersion(gamma);
    const double gap_bits = std::log1p(gamma) / std::numbers::ln2 - packet_bits / m;
    return std::numbers::ln2 * std::sqrt(m / v) * gap_bits;
}

double rate_penalty_dm(double gamma, double m, double packet_bits) {
    if (!(m >= 1.0)) throw domain_error("rate_penalty_dm: blocklength m must be >= 1");
    const double a = std::numbers::ln2 / std::sqrt(dispersion(gamma));
    const double c = std::log1p(gamma) / std::numbers::ln2;
    const double inv_sqrt_m = 1.0 / std::sqrt(m);
    return 0.5 * a * inv_sqrt_m * (c + packet_bits / m);
}

double rate_penalty_dm2(double gamma, double m, double packet_bits) {
    if (!(m >= 1.0)) throw domain_error("rate_penalty_dm2: blocklength m must be >= 1");
    const double a = std::numbers::ln2 / std::sqrt(dispersion(gamma));
    const double c = std::log1p(gamma) / std::numbers::ln2;
    const double m32 = std::pow(m, -1.5);
    return -0.25 * a * c * m32 - 0.75 * a * packet_bits * m32 / m;
}

double rate_penalty_dgamma(double gamma, double m, double packet_bits) {
    require_gamma(gamma, "rate_penalty_dgamma");
    if (!(m >= 1.0)) throw domain_error("rate_penalty_dgamma: blocklength m must be >= 1");
    const double span = snr_span(gamma);
    const double gap_nat = std::log1p(gamma) - std::numbers::ln2 * packet_bits / m;
    return std::sqrt(m) * (1.0 - gap_nat / span) / std::sqrt(span);
}

double rate_penalty_dgamma2(double gamma, double m, double packet_bits) {
    require_gamma(gamma, "rate_penalty_dgamma2");
    if (!(m >= 1.0)) throw domain_error("rate_penalty_dgamma2: blocklength m must be >= 1");
    const double span = snr_span(gamma);
    const double u = 1.0 + gamma;
    const double c = std::sqrt(m) / (span * span * std::sqrt(span));
    const double gap_nat = std::log1p(gamma) - std::numbers::ln2 * packet_bits / m;
    return c * (-1.0 / u - u) * span + 3.0 * c * u * gap_nat;
}

double q_function(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double hop_error(const ScenarioParams& p, double x, double m, Hop hop) {
    return q_function(rate_penalty(snr(p, x, hop), m, p.packet_bits));
}

double overall_error(double eps1, double eps2) {
    if (!(eps1 >= 0.0 && eps1 <= 1.0) || !(eps2 >= 0.0 && eps2 <= 1.0)) {
        throw domain_error("overall_error: hop error probabilities must lie in [0, 1]");
    }
    return eps1 + (1.0 - eps1) * eps2;
}

double approx_error(const ScenarioParams& p, double x, double m1) {
    const double m_max = static_cast<double>(p.total_blocklength - 1);
    if (!(m1 >= 1.0 && m1 <= m_max)) {
        throw domain_error("approx_error: m1 outside [1, M-1]");
    }
    return hop_error(p, x, m1, Hop::first) +
           hop_error(p, x, static_cast<double>(p.total_blocklength) - m1, Hop::second);
}

double approx_error_dm1(const ScenarioParams& p, double x, double m1) {
    const double m_max = static_cast<double>(p.total_blocklength - 1);
    if (!(m1 >= 1.0 && m1 <= m_max)) {
        throw domain_error("approx_error_dm1: m1 outside [1, M-1]");
    }
    const double bits = p.packet_bits;
    const double g1 = snr(p, x, Hop::first);
    const double g2 = snr(p, x, Hop::second);
    const double m2 = static_cast<double>(p.total_blocklength) - m1;
    // d(eps2)/dm1 picks up a sign flip through m2 = M - m1.
    return -phi(rate_penalty(g1, m1, bits)) * rate_penalty_dm(g1, m1, bits) +
           phi(rate_penalty(g2, m2, bits)) * rate_penalty_dm(g2, m2, bits);
}

double g_value(const ScenarioParams& p, double m1, double m2, double x) {
    const double sum = hop_error(p, x, m1, Hop::first) + hop_error(p, x, m2, Hop::second);
    if (sum <= 0.0) {
        throw domain_error("g_value: error sum underflowed to 0 (both tails below ~1e-308)");
    }
    return std::log(sum);
}

double g_prime(const ScenarioParams& p, double m1, double m2, double x) {
    const HopState a = hop_state(p, x, m1, Hop::first);
    const HopState b = hop_state(p, x, m2, Hop::second);
    const double sum = a.eps + b.eps;
    if (sum <= 0.0) {
        throw domain_error("g_prime: error sum underflowed to 0");
    }
    return (a.deps_dx + b.deps_dx) / sum;
}

double g_second(const ScenarioParams& p, double m1, double m2, double x) {
    const double bits = p.packet_bits;
    const double g1 = snr(p, x, Hop::first);
    const double g2 = snr(p, x, Hop::second);
    const double s1 = snr_slope(p, x, Hop::first);
    const double s2 = snr_slope(p, x, Hop::second);

    const double e1 = q_function(rate_penalty(g1, m1, bits));
    const double e2 = q_function(rate_penalty(g2, m2, bits));
    const double d1 = hop_error_dgamma(g1, m1, bits) * s1;
    const double d2 = hop_error_dgamma(g2, m2, bits) * s2;
    const double dd1 = hop_error_dgamma2(g1, m1, bits) * s1 * s1 +
                       hop_error_dgamma(g1, m1, bits) * snr_curvature(p, x, Hop::first);
    const double dd2 = hop_error_dgamma2(g2, m2, bits) * s2 * s2 +
                       hop_error_dgamma(g2, m2, bits) * snr_curvature(p, x, Hop::second);

    const double sum = e1 + e2;
    if (sum <= 0.0) {
        throw domain_error("g_second: error sum underflowed to 0");
    }
    const double slope = d1 + d2;
    return ((dd1 + dd2) * sum - slope * slope) / (sum * sum);
}

}  // namespace relayopt
