#pragma once

#include "relayopt/errors.hpp"

#include <cstdint>

namespace relayopt {

/// Transmission phase of the two-hop decode-and-forward link.
enum class Hop {
    first,   // controller -> relay
    second,  // relay -> robot
};

/// Physical and problem configuration for one scenario.
///
/// The relay hovers at height `altitude_m` above the segment between the
/// controller at x=0 and the robot at x=`distance_m`; its horizontal position
/// x is restricted to [x_min_m, x_max_m]. A packet of `packet_bits` bits must
/// be forwarded within `total_blocklength` channel symbols split across the
/// two hops. `bandwidth_hz` and `latency_s` are informational: when both are
/// set, total_blocklength must equal round(bandwidth_hz * latency_s).
struct ScenarioParams {
    double distance_m = 200.0;
    double altitude_m = 120.0;
    double x_min_m = 30.0;
    double x_max_m = 130.0;
    int packet_bits = 100;
    int total_blocklength = 100;
    double bandwidth_hz = 0.0;  // 0 = not specified
    double latency_s = 0.0;     // 0 = not specified
    double power1_w = 3.0;
    double power2_w = 1.0;
    double beta0_db = 50.0;  // reference channel gain at 1 m
    double noise_power = 1.0;

    /// Throws config_error naming the violated field/invariant.
    void validate() const;
};

/// Integer blocklength split; m1 + m2 = total_blocklength.
struct Allocation {
    int m1 = 1;
    int m2 = 1;
};

/// Reference channel gain as a linear power ratio, 10^(beta0_db/10).
double beta0_linear(const ScenarioParams& params);

/// Received SNR of one hop at relay position x (meters). Free-space gain
/// beta0 / (H^2 + lateral^2) scaled by transmit power and 1/noise_power.
/// x outside [x_min_m, x_max_m] is allowed for diagnostics; non-finite x is
/// rejected.
double snr(const ScenarioParams& params, double x, Hop hop);

/// d(snr)/dx at position x.
double snr_slope(const ScenarioParams& params, double x, Hop hop);

/// d^2(snr)/dx^2 at position x.
double snr_curvature(const ScenarioParams& params, double x, Hop hop);

/// Channel dispersion V = 1 - (1+gamma)^-2, in (0, 1).
/// Rejects gamma below 1e-12 (the model blows up as V -> 0).
double dispersion(double gamma);

/// Normal-approximation rate penalty
///   f(gamma, m, L) = ln2 * sqrt(m/V) * (log2(1+gamma) - L/m).
/// m may be non-integer (continuous relaxation); requires m >= 1, L >= 1.
double rate_penalty(double gamma, double m, double packet_bits);

/// df/dm at fixed gamma: 0.5*A*C*m^-1/2 + 0.5*A*L*m^-3/2 with
/// A = ln2/sqrt(V), C = log2(1+gamma). Positive for all valid inputs.
double rate_penalty_dm(double gamma, double m, double packet_bits);

/// d^2f/dm^2 at fixed gamma; strictly negative (f is concave in m).
double rate_penalty_dm2(double gamma, double m, double packet_bits);

/// df/dgamma at fixed m.
double rate_penalty_dgamma(double gamma, double m, double packet_bits);

/// d^2f/dgamma^2 at fixed m.
double rate_penalty_dgamma2(double gamma, double m, double packet_bits);

/// Gaussian tail probability Q(z) = P(N(0,1) > z), via 0.5*erfc(z/sqrt(2)).
/// Relative accuracy ~1e-15 while the result is a normal double (|z| up to
/// about 37.5); below ~1e-308 the result degrades to subnormal precision and
/// underflows to 0 near z = 38.6.
double q_function(double z);

/// Decoding error probability of one hop: Q(f(snr(x), m, L)).
double hop_error(const ScenarioParams& params, double x, double m, Hop hop);

/// End-to-end decode-and-forward error eps1 + (1 - eps1)*eps2.
/// Inputs must lie in [0, 1].
double overall_error(double eps1, double eps2);

/// Surrogate objective eps_tilde = eps1(m1) + eps2(M - m1), the small-error
/// approximation of the end-to-end error. Requires 1 <= m1 <= M-1.
double approx_error(const ScenarioParams& params, double x, double m1);

/// d(eps_tilde)/dm1 with m2 = M - m1 eliminated; m1 is treated as a
/// continuous variable. Monotone increasing in m1 (eps_tilde is convex).
double approx_error_dm1(const ScenarioParams& params, double x, double m1);

/// g(x) = ln(eps1(x, m1) + eps2(x, m2)) at a fixed blocklength split.
/// Throws domain_error if the sum underflows to exactly 0.
double g_value(const ScenarioParams& params, double m1, double m2, double x);

/// Analytic g'(x) = (eps1' + eps2') / (eps1 + eps2).
double g_prime(const ScenarioParams& params, double m1, double m2, double x);

/// Analytic g''(x) from the quotient rule over the hop error derivatives.
double g_second(const ScenarioParams& params, double m1, double m2, double x);

}  // namespace relayopt
