#pragma once

#include "relayopt/model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace relayopt {

enum class Method {
    joint,       // perturbation-based alternating descent
    exhaustive,  // full grid scan over (m1, x)
    fixed_x,     // blocklength search at x = (x_min + x_max)/2
    fixed_m,     // location search at m1 = floor(M/2)
};

std::string_view method_name(Method method);                 // "Joint", "Exhaustive", ...
std::optional<Method> method_from_name(std::string_view s);  // case-insensitive

struct SolverConfig {
    double blocklength_tol = 0.5;  // bisection interval width target, symbols
    double location_tol = 0.1;     // bisection interval width target, meters
    int perturbation_max = 3;      // upper bound of the random blocklength jitter
    int max_iterations = 10;       // outer iterations of the joint solver
    std::uint64_t seed = 0;
    double early_stop_tol = 1e-12;  // relative objective-change stop; 0 disables

    void validate() const;  // throws config_error
};

struct Solution {
    double x = 0.0;
    int m1 = 0;
    int m2 = 0;
    double eps_approx = 0.0;  // surrogate objective eps1 + eps2
    double eps_exact = 0.0;   // eps1 + (1 - eps1)*eps2
    Method method = Method::joint;
    long long eval_count = 0;  // model-point evaluations (values and derivatives)
    int iterations = 0;        // outer iterations; 0 for single-shot methods
};

struct CandidateRecord {
    int m1 = 0;
    double x = 0.0;
    double eps_approx = 0.0;
};

/// One outer iteration of the joint solver: the unperturbed blocklength from
/// the bisection step, the random jitters, the three (m1, x) candidates with
/// their objectives, and the incumbent after selection.
struct IterationRecord {
    int iteration = 0;  // 1-based
    int m1_unperturbed = 0;
    int perturb_left = 0;
    int perturb_right = 0;
    std::array<CandidateRecord, 3> candidates{};  // left, middle, right
    int selected_m1 = 0;
    double selected_x = 0.0;
    double objective = 0.0;  // eps_approx of the incumbent after this iteration
};

struct IterationTrace {
    double initial_objective = 0.0;
    std::vector<IterationRecord> iterations;
};

struct JointResult {
    Solution solution;
    IterationTrace trace;
};

/// Optional joint-solver starting point; defaults are the interval midpoint
/// and floor(M/2).
struct InitialPoint {
    double x = 0.0;
    int m1 = 0;
};

/// Optimal integer blocklength split at a fixed relay position: bisects the
/// surrogate's m1-derivative over [1, M-1], rounds, and keeps the result
/// locally unimprovable by a one-symbol step. A derivative of constant sign
/// drives the bracket to the corresponding endpoint.
Allocation optimize_blocklength(const ScenarioParams& params, double x, const SolverConfig& cfg);

/// Optimal relay position for a fixed split: returns x_max if g'(x_max) < 0,
/// else x_min if g'(x_min) > 0, else the midpoint of the bisection bracket
/// of g' narrowed to location_tol.
double optimize_location(const ScenarioParams& params, int m1, int m2, const SolverConfig& cfg);

/// Alternating descent with random blocklength perturbations. Each iteration
/// re-optimizes the split at the current position, solves the location
/// subproblem for the split and its two jittered neighbours, and adopts the
/// best candidate pair; the incumbent is kept when no candidate improves on
/// it, so the objective never increases. A final deterministic one-symbol
/// descent along m1 -> (m1, x*(m1)) clears the fixed point the alternation
/// can park in one symbol short of the optimum.
JointResult joint_optimize(const ScenarioParams& params, const SolverConfig& cfg,
                           std::optional<InitialPoint> init = std::nullopt);

/// Grid oracle: every integer m1 in [1, M-1] against every x on the
/// location_tol grid over [x_min, x_max] (x_max always included).
Solution exhaustive_search(const ScenarioParams& params, const SolverConfig& cfg);

/// Blocklength optimization at the fixed midpoint location.
Solution baseline_fixed_x(const ScenarioParams& params, const SolverConfig& cfg);

/// Location optimization at the fixed split m1 = floor(M/2).
Solution baseline_fixed_m(const ScenarioParams& params, const SolverConfig& cfg);

}  // namespace relayopt
