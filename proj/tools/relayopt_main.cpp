// Command-line front end: solve | exhaustive | landscape | convergence |
// compare | verify. Exit codes: 0 success, 1 usage/config error,
// 2 verification failure, 3 numeric domain error.

#include "relayopt/commands.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using relayopt::config_error;
using relayopt::Scenario;

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file '" + path + "'");
    return out;
}

/// Runs `body` with the CSV stream selected by --out (file or stdout).
template <typename Body>
void with_csv(const std::string& out_path, Body&& body) {
    if (out_path.empty()) {
        body(std::cout);
    } else {
        std::ofstream out = open_csv(out_path);
        body(out);
    }
}

std::vector<relayopt::Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<relayopt::Method> methods;
    methods.reserve(names.size());
    for (const auto& name : names) {
        const auto method = relayopt::method_from_name(name);
        if (!method) throw config_error("unknown method '" + name + "'");
        methods.push_back(*method);
    }
    return methods;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-blocklength error optimizer for a two-hop aerial relay"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int threads = 1;
    bool timing = false;

    const auto add_common = [&](CLI::App* sub, bool with_out) {
        sub->add_option("--config", config_path, "scenario config file")->required();
        sub->add_option("--seed", seed, "base RNG seed");
        if (with_out) sub->add_option("--out", out_path, "CSV output path (default: stdout)");
    };

    // solve / exhaustive
    std::string method_name = "joint";
    CLI::App* solve = app.add_subcommand("solve", "run one solver and print the solution");
    add_common(solve, true);
    solve->add_option("--method", method_name, "joint | exhaustive | fixedx | fixedm");
    solve->add_flag("--timing", timing, "record wall time in the CSV (breaks byte determinism)");

    CLI::App* exhaustive = app.add_subcommand("exhaustive", "run the exhaustive grid search");
    add_common(exhaustive, true);
    exhaustive->add_flag("--timing", timing, "record wall time in the CSV");

    // landscape
    int m1 = -1, m2 = -1;
    double x_min = 0.0, x_max = -1.0, step = 0.1;
    CLI::App* landscape = app.add_subcommand("landscape", "dump g, g', g'' over a position grid");
    add_common(landscape, true);
    landscape->add_option("--m1", m1, "first-hop blocklength (default: M/2)");
    landscape->add_option("--m2", m2, "second-hop blocklength (default: M - m1)");
    landscape->add_option("--xmin", x_min, "grid start, meters (default: 0)");
    landscape->add_option("--xmax", x_max, "grid end, meters (default: D)");
    landscape->add_option("--step", step, "grid step, meters");

    // convergence
    std::vector<double> altitudes = {100.0, 120.0, 140.0};
    CLI::App* convergence =
        app.add_subcommand("convergence", "joint-solver traces for a list of altitudes");
    add_common(convergence, true);
    convergence->add_option("--H", altitudes, "altitudes, meters")->delimiter(',');
    convergence->add_option("--threads", threads, "worker threads");

    // compare
    std::string param_name = "M";
    std::vector<double> values = {60.0, 80.0, 100.0, 120.0, 140.0};
    std::vector<std::string> method_names = {"joint", "exhaustive", "fixedx", "fixedm"};
    int repetitions = 1;
    CLI::App* compare = app.add_subcommand("compare", "method comparison across a parameter sweep");
    add_common(compare, true);
    compare->add_option("--param", param_name, "swept parameter: H | M | L | P1 | P2 | D");
    compare->add_option("--values", values, "sweep values, increasing")->delimiter(',');
    compare->add_option("--methods", method_names, "methods to run")->delimiter(',');
    compare->add_option("--reps", repetitions, "seed repetitions per sweep point");
    compare->add_option("--threads", threads, "worker threads");
    compare->add_flag("--timing", timing, "record wall time in the CSV");

    // verify
    CLI::App* verify = app.add_subcommand("verify", "run the model verification suite");
    add_common(verify, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        const Scenario scenario = relayopt::load_scenario(config_path);

        if (solve->parsed() || exhaustive->parsed()) {
            const auto method = exhaustive->parsed() ? relayopt::Method::exhaustive
                                                     : relayopt::method_from_name(method_name)
                                                           .value_or(relayopt::Method::joint);
            if (solve->parsed() && !relayopt::method_from_name(method_name)) {
                throw config_error("unknown method '" + method_name + "'");
            }
            if (out_path.empty()) {
                relayopt::cmd_solve(scenario, method, seed, std::cout, nullptr, timing);
            } else {
                std::ofstream csv = open_csv(out_path);
                relayopt::cmd_solve(scenario, method, seed, std::cout, &csv, timing);
            }
        } else if (landscape->parsed()) {
            const int eff_m1 = m1 > 0 ? m1 : scenario.params.total_blocklength / 2;
            const int eff_m2 = m2 > 0 ? m2 : scenario.params.total_blocklength - eff_m1;
            const double eff_xmax = x_max >= 0.0 ? x_max : scenario.params.distance_m;
            with_csv(out_path, [&](std::ostream& out) {
                relayopt::cmd_landscape(scenario, eff_m1, eff_m2, x_min, eff_xmax, step, out);
            });
        } else if (convergence->parsed()) {
            with_csv(out_path, [&](std::ostream& out) {
                relayopt::cmd_convergence(scenario, altitudes, seed, out, threads);
            });
        } else if (compare->parsed()) {
            const auto parameter = relayopt::sweep_parameter_from_name(param_name);
            if (!parameter) throw config_error("unknown sweep parameter '" + param_name + "'");
            relayopt::SweepSpec sweep;
            sweep.parameter = *parameter;
            sweep.values = values;
            sweep.methods = parse_methods(method_names);
            sweep.repetitions = repetitions;
            with_csv(out_path, [&](std::ostream& out) {
                relayopt::cmd_compare(scenario, sweep, seed, out, threads, timing);
            });
        } else if (verify->parsed()) {
            return relayopt::cmd_verify(scenario, std::cout);
        }
        return 0;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const relayopt::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
