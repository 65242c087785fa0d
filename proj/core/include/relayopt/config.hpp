#pragma once

#include "relayopt/model.hpp"
#include "relayopt/solver.hpp"

#include <filesystem>
#include <istream>
#include <string>

namespace relayopt {

struct Scenario {
    ScenarioParams params;
    SolverConfig solver;
};

/// Scenario matching the bundled paper.cfg (the reference configuration).
Scenario reference_scenario();

/// Parses flat key=value text ('#' starts a comment). Unknown or duplicate
/// keys and malformed numbers raise config_error with "<name>:<line>:";
/// the result is validated before being returned.
///
/// Keys: D_m, H_m, d1_m, d2_m, L_bits, M_symbols (or B_hz + Tmax_s),
/// P1_w, P2_w, beta0_db, noise, delta, zeta, n_max, t_max.
Scenario parse_scenario(std::istream& in, const std::string& name);

/// parse_scenario over a file; missing files raise config_error.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace relayopt
