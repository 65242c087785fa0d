#pragma once

#include "relayopt/config.hpp"
#include "relayopt/solver.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace relayopt {

/// Declarative parameter sweep for the comparison harness.
struct SweepSpec {
    enum class Parameter { altitude, blocklength, packet_bits, power1, power2, distance };

    Parameter parameter = Parameter::blocklength;
    std::vector<double> values;    // non-empty, strictly increasing
    std::vector<Method> methods;   // executed and emitted in this order
    int repetitions = 1;           // seed variations per sweep point

    void validate() const;  // throws config_error
};

std::string_view sweep_parameter_name(SweepSpec::Parameter parameter);  // "H", "M", ...
std::optional<SweepSpec::Parameter> sweep_parameter_from_name(std::string_view name);

/// One solver execution: scenario snapshot, dispatch inputs, result, timing.
struct RunRecord {
    ScenarioParams params;
    Method method = Method::joint;
    std::uint64_t seed = 0;
    Solution solution;
    double wall_ms = 0.0;
};

/// Runs one method on a scenario (seed applies to the joint solver's RNG).
RunRecord run_method(const Scenario& scenario, Method method, std::uint64_t seed);

/// Solves and prints a one-line summary; optionally appends a CSV record.
/// wall_ms is written to the CSV only when `timing` is set (zero otherwise)
/// so that default outputs stay byte-deterministic.
void cmd_solve(const Scenario& scenario, Method method, std::uint64_t seed,
               std::ostream& summary, std::ostream* csv, bool timing = false);

/// CSV of (x, g, g', g'') over the [x_min, x_max] grid at a fixed split.
void cmd_landscape(const Scenario& scenario, int m1, int m2, double x_min, double x_max,
                   double step, std::ostream& csv);

/// CSV of (H, iteration, eps_approx) joint-solver traces, one block per
/// altitude; iteration 0 carries the initial objective. Per-altitude seeds
/// derive from mix_seed(seed, index, 0).
void cmd_convergence(const Scenario& scenario, const std::vector<double>& altitudes,
                     std::uint64_t seed, std::ostream& csv, int threads = 1);

/// CSV of method results across a sweep; rows ordered by (value, method,
/// repetition). Per-point seeds derive from mix_seed(seed, value index,
/// repetition), so serial and parallel runs emit identical bytes. Joint rows
/// worse than the exhaustive row of the same point by more than 1e-6
/// relative are flagged.
void cmd_compare(const Scenario& scenario, const SweepSpec& sweep, std::uint64_t seed,
                 std::ostream& csv, int threads = 1, bool timing = false);

/// Runs the verification suite against the scenario; returns 0 on success,
/// 2 if any check failed.
int cmd_verify(const Scenario& scenario, std::ostream& out);

}  // namespace relayopt
