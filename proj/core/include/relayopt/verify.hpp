#pragma once

#include "relayopt/model.hpp"

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace relayopt {

/// Evaluation points used by the verification suite. Tests substitute
/// deliberately corrupted implementations to prove the suite catches them.
struct VerifyHooks {
    std::function<double(double)> q_function;
    std::function<double(const ScenarioParams&, double, double)> approx_error;      // (p, x, m1)
    std::function<double(const ScenarioParams&, double, double)> approx_error_dm1;  // (p, x, m1)
    std::function<double(const ScenarioParams&, double, double, double)> g_value;   // (p, m1, m2, x)
    std::function<double(const ScenarioParams&, double, double, double)> g_prime;
    std::function<double(const ScenarioParams&, double, double, double)> g_second;

    static VerifyHooks defaults();
};

struct VerifyCheck {
    enum class State { passed, failed, skipped };
    std::string name;
    State state = State::passed;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_passed() const;
};

/// Finite-difference agreement of the analytic derivatives, convexity of the
/// surrogate over the split, concavity of the rate penalty, Q-function
/// identities, and (for symmetric scenarios) stationarity at the midpoint.
VerifyReport run_verification(const ScenarioParams& params,
                              const VerifyHooks& hooks = VerifyHooks::defaults());

/// One "[PASS]/[FAIL]/[SKIP] name: detail" line per check.
void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace relayopt
