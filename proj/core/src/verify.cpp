#include "relayopt/verify.hpp"

#include "relayopt/csv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace relayopt {

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> xs(count);
    for (int i = 0; i < count; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return xs;
}

struct FdSample {
    std::string label;
    double analytic;
    double reference;
};

/// Relative tolerance where the reference is resolvable, absolute fallback of
/// 1e-12 * scale near zeros, with scale the largest reference magnitude.
VerifyCheck compare_samples(std::string name, const std::vector<FdSample>& samples,
                            double rel_tol) {
    double scale = 0.0;
    for (const auto& s : samples) scale = std::max(scale, std::abs(s.reference));
    const double abs_tol = 1e-12 * scale;

    double worst_rel = 0.0;
    for (const auto& s : samples) {
        const double err = std::abs(s.analytic - s.reference);
        if (std::abs(s.reference) > abs_tol) {
            const double rel = err / std::abs(s.reference);
            worst_rel = std::max(worst_rel, rel);
            if (rel > rel_tol) {
                std::ostringstream detail;
                detail << s.label << ": analytic=" << format_double(s.analytic)
                       << " reference=" << format_double(s.reference)
                       << " rel_err=" << format_double(rel);
                return {std::move(name), VerifyCheck::State::failed, detail.str()};
            }
        } else if (err > abs_tol) {
            std::ostringstream detail;
            detail << s.label << ": analytic=" << format_double(s.analytic)
                   << " reference=" << format_double(s.reference) << " above absolute tolerance "
                   << format_double(abs_tol);
            return {std::move(name), VerifyCheck::State::failed, detail.str()};
        }
    }
    std::ostringstream detail;
    detail << samples.size() << " points, max rel err " << format_double(worst_rel);
    return {std::move(name), VerifyCheck::State::passed, detail.str()};
}

VerifyCheck check_q_identities(const VerifyHooks& hooks) {
    double worst = 0.0;
    double previous = 2.0;
    for (double z = -37.0; z <= 37.0 + 1e-9; z += 0.25) {
        const double q = hooks.q_function(z);
        const double identity = std::abs(q + hooks.q_function(-z) - 1.0);
        worst = std::max(worst, identity);
        if (identity > 1e-14) {
            return {"q_function_identities", VerifyCheck::State::failed,
                    "Q(z)+Q(-z)-1 = " + format_double(identity) + " at z=" + format_double(z)};
        }
        // Strictly decreasing once below the representable ceiling; values
        // left of z ~ -8.3 all round to 1.0 in double precision.
        const bool decreasing = previous >= 1.0 ? q <= previous : q < previous;
        if (!decreasing) {
            return {"q_function_identities", VerifyCheck::State::failed,
                    "not decreasing at z=" + format_double(z)};
        }
        previous = q;
    }
    return {"q_function_identities", VerifyCheck::State::passed,
            "identity holds to " + format_double(worst) + ", monotone decreasing"};
}

/// Smallest split for which the hop operates at or below capacity
/// (rate gap >= 0): m >= L / log2(1 + gamma).
double capacity_crossing(const ScenarioParams& p, double x, Hop hop) {
    return p.packet_bits / std::log2(1.0 + snr(p, x, hop));
}

VerifyCheck check_dm1_derivative(const ScenarioParams& p, const VerifyHooks& hooks) {
    const double h = 1e-3;
    std::vector<FdSample> samples;
    for (const double x : linspace(p.x_min_m, p.x_max_m, 5)) {
        for (const double m1 : linspace(2.0, static_cast<double>(p.total_blocklength - 2), 10)) {
            const double fd =
                (hooks.approx_error(p, x, m1 + h) - hooks.approx_error(p, x, m1 - h)) / (2.0 * h);
            samples.push_back({"x=" + format_double(x) + " m1=" + format_double(m1),
                               hooks.approx_error_dm1(p, x, m1), fd});
        }
    }
    return compare_samples("d_approx_error_dm1_vs_fd", samples, 1e-6);
}

VerifyCheck check_g_prime(const ScenarioParams& p, const VerifyHooks& hooks) {
    const double m1 = p.total_blocklength / 2;
    const double m2 = p.total_blocklength - m1;
    const double h = 1e-3;
    std::vector<FdSample> samples;
    for (const double x : linspace(p.x_min_m, p.x_max_m, 50)) {
        const double fd =
            (hooks.g_value(p, m1, m2, x + h) - hooks.g_value(p, m1, m2, x - h)) / (2.0 * h);
        samples.push_back({"x=" + format_double(x), hooks.g_prime(p, m1, m2, x), fd});
    }
    return compare_samples("g_prime_vs_fd", samples, 1e-6);
}

VerifyCheck check_g_second(const ScenarioParams& p, const VerifyHooks& hooks) {
    const double m1 = p.total_blocklength / 2;
    const double m2 = p.total_blocklength - m1;
    const double h = 1e-2;
    std::vector<FdSample> samples;
    for (const double x : linspace(p.x_min_m, p.x_max_m, 50)) {
        const double fd = (hooks.g_value(p, m1, m2, x + h) - 2.0 * hooks.g_value(p, m1, m2, x) +
                           hooks.g_value(p, m1, m2, x - h)) /
                          (h * h);
        samples.push_back({"x=" + format_double(x), hooks.g_second(p, m1, m2, x), fd});
    }
    return compare_samples("g_second_vs_fd", samples, 1e-5);
}

// Convexity of the surrogate in the split, restricted to the window where
// both hops run at or below capacity. Outside that window a saturated hop
// error flattens toward 1 through a genuinely concave shoulder, so the
// surrogate is only piecewise convex over the full [1, M-1] range.
VerifyCheck check_convexity(const ScenarioParams& p, const VerifyHooks& hooks) {
    const int total = p.total_blocklength;
    int checked = 0;
    for (const double x : linspace(p.x_min_m, p.x_max_m, 20)) {
        const int lo = std::max(1, static_cast<int>(
                                       std::ceil(capacity_crossing(p, x, Hop::first))));
        const int hi = std::min(total - 1,
                                total - static_cast<int>(std::ceil(
                                            capacity_crossing(p, x, Hop::second))));
        if (hi - lo < 2) continue;
        std::vector<double> values;
        values.reserve(hi - lo + 1);
        double peak = 0.0;
        for (int m1 = lo; m1 <= hi; ++m1) {
            values.push_back(hooks.approx_error(p, x, m1));
            peak = std::max(peak, values.back());
        }
        for (std::size_t i = 1; i + 1 < values.size(); ++i) {
            const double second = values[i + 1] - 2.0 * values[i] + values[i - 1];
            ++checked;
            if (second < -1e-15 * peak) {
                return {"approx_error_convexity", VerifyCheck::State::failed,
                        "negative second difference " + format_double(second) + " at x=" +
                            format_double(x) + " m1=" + std::to_string(lo + static_cast<int>(i))};
            }
        }
    }
    return {"approx_error_convexity", VerifyCheck::State::passed,
            "second differences non-negative at " + std::to_string(checked) +
                " below-capacity grid points"};
}

VerifyCheck check_rate_penalty_concavity(const ScenarioParams& p) {
    for (const double x : linspace(p.x_min_m, p.x_max_m, 10)) {
        for (const Hop hop : {Hop::first, Hop::second}) {
            const double gamma = snr(p, x, hop);
            for (const double m : linspace(1.0, static_cast<double>(p.total_blocklength), 25)) {
                const double dd = rate_penalty_dm2(gamma, m, p.packet_bits);
                if (!(dd < 0.0)) {
                    return {"rate_penalty_concavity", VerifyCheck::State::failed,
                            "d2f/dm2 = " + format_double(dd) + " at gamma=" + format_double(gamma) +
                                " m=" + format_double(m)};
                }
            }
        }
    }
    return {"rate_penalty_concavity", VerifyCheck::State::passed,
            "d2f/dm2 < 0 over the sampled (gamma, m) grid"};
}

VerifyCheck check_symmetry(const ScenarioParams& p, const VerifyHooks& hooks) {
    if (p.power1_w != p.power2_w || p.total_blocklength % 2 != 0) {
        return {"symmetry_stationarity", VerifyCheck::State::skipped,
                "scenario is not symmetric (needs P1 = P2 and even M)"};
    }
    const double mid_x = 0.5 * p.distance_m;
    const double mid_m = p.total_blocklength / 2;
    const double slope_m = hooks.approx_error_dm1(p, mid_x, mid_m);
    const double slope_x = hooks.g_prime(p, mid_m, mid_m, mid_x);
    if (std::abs(slope_m) > 1e-15 || std::abs(slope_x) > 1e-15) {
        return {"symmetry_stationarity", VerifyCheck::State::failed,
                "midpoint slopes eps'=" + format_double(slope_m) + " g'=" + format_double(slope_x)};
    }
    return {"symmetry_stationarity", VerifyCheck::State::passed,
            "both derivatives vanish at (D/2, M/2)"};
}

}  // namespace

VerifyHooks VerifyHooks::defaults() {
    VerifyHooks hooks;
    hooks.q_function = [](double z) { return relayopt::q_function(z); };
    hooks.approx_error = [](const ScenarioParams& p, double x, double m1) {
        return relayopt::approx_error(p, x, m1);
    };
    hooks.approx_error_dm1 = [](const ScenarioParams& p, double x, double m1) {
        return relayopt::approx_error_dm1(p, x, m1);
    };
    hooks.g_value = [](const ScenarioParams& p, double m1, double m2, double x) {
        return relayopt::g_value(p, m1, m2, x);
    };
    hooks.g_prime = [](const ScenarioParams& p, double m1, double m2, double x) {
        return relayopt::g_prime(p, m1, m2, x);
    };
    hooks.g_second = [](const ScenarioParams& p, double m1, double m2, double x) {
        return relayopt::g_second(p, m1, m2, x);
    };
    return hooks;
}

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) {
        return c.state != VerifyCheck::State::failed;
    });
}

VerifyReport run_verification(const ScenarioParams& params, const VerifyHooks& hooks) {
    params.validate();
    VerifyReport report;
    report.checks.push_back(check_q_identities(hooks));
    report.checks.push_back(check_dm1_derivative(params, hooks));
    report.checks.push_back(check_g_prime(params, hooks));
    report.checks.push_back(check_g_second(params, hooks));
    report.checks.push_back(check_convexity(params, hooks));
    report.checks.push_back(check_rate_penalty_concavity(params));
    report.checks.push_back(check_symmetry(params, hooks));
    return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
    for (const auto& check : report.checks) {
        const char* tag = check.state == VerifyCheck::State::passed   ? "[PASS]"
                          : check.state == VerifyCheck::State::failed ? "[FAIL]"
                                                                      : "[SKIP]";
        out << tag << ' ' << check.name << ": " << check.detail << '\n';
    }
}

}  // namespace relayopt
