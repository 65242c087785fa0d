#include "relayopt/commands.hpp"

#include "relayopt/csv.hpp"
#include "relayopt/grid.hpp"
#include "relayopt/rng.hpp"
#include "relayopt/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

namespace relayopt {

namespace {

/// Index-sharded parallel loop; the first exception wins and is rethrown
/// after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const int workers = std::min<int>(std::max(threads, 1), static_cast<int>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

int require_integral(double value, const char* what) {
    if (std::rint(value) != value) {
        throw config_error(std::string("sweep value for ") + what + " must be an integer");
    }
    return static_cast<int>(value);
}

ScenarioParams apply_sweep_value(ScenarioParams params, SweepSpec::Parameter parameter,
                                 double value) {
    switch (parameter) {
        case SweepSpec::Parameter::altitude:
            params.altitude_m = value;
            break;
        case SweepSpec::Parameter::blocklength:
            params.total_blocklength = require_integral(value, "M");
            // bandwidth/latency describe the original budget only
            params.bandwidth_hz = 0.0;
            params.latency_s = 0.0;
            break;
        case SweepSpec::Parameter::packet_bits:
            params.packet_bits = require_integral(value, "L");
            break;
        case SweepSpec::Parameter::power1:
            params.power1_w = value;
            break;
        case SweepSpec::Parameter::power2:
            params.power2_w = value;
            break;
        case SweepSpec::Parameter::distance:
            params.distance_m = value;
            break;
    }
    params.validate();
    return params;
}

void write_solve_header(std::ostream& out) {
    CsvRow(out)
        .field("D_m")
        .field("H_m")
        .field("d1_m")
        .field("d2_m")
        .field("L_bits")
        .field("M_symbols")
        .field("P1_w")
        .field("P2_w")
        .field("beta0_db")
        .field("noise")
        .field("method")
        .field("seed")
        .field("x")
        .field("m1")
        .field("m2")
        .field("eps_approx")
        .field("eps_exact")
        .field("iterations")
        .field("eval_count")
        .field("wall_ms");
}

void write_solve_row(std::ostream& out, const RunRecord& record, bool timing) {
    const ScenarioParams& p = record.params;
    const Solution& s = record.solution;
    CsvRow(out)
        .field(p.distance_m)
        .field(p.altitude_m)
        .field(p.x_min_m)
        .field(p.x_max_m)
        .field(p.packet_bits)
        .field(p.total_blocklength)
        .field(p.power1_w)
        .field(p.power2_w)
        .field(p.beta0_db)
        .field(p.noise_power)
        .field(std::string(method_name(s.method)))
        .field(std::to_string(record.seed))
        .field(s.x)
        .field(s.m1)
        .field(s.m2)
        .field(s.eps_approx)
        .field(s.eps_exact)
        .field(s.iterations)
        .field(s.eval_count)
        .field(timing ? record.wall_ms : 0.0);
}

}  // namespace

void SweepSpec::validate() const {
    if (values.empty()) throw config_error("sweep values must be non-empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw config_error("sweep values must be strictly increasing");
        }
    }
    if (methods.empty()) throw config_error("sweep methods must be non-empty");
    if (repetitions < 1) throw config_error("sweep repetitions must be >= 1");
}

std::string_view sweep_parameter_name(SweepSpec::Parameter parameter) {
    switch (parameter) {
        case SweepSpec::Parameter::altitude: return "H";
        case SweepSpec::Parameter::blocklength: return "M";
        case SweepSpec::Parameter::packet_bits: return "L";
        case SweepSpec::Parameter::power1: return "P1";
        case SweepSpec::Parameter::power2: return "P2";
        case SweepSpec::Parameter::distance: return "D";
    }
    return "?";
}

std::optional<SweepSpec::Parameter> sweep_parameter_from_name(std::string_view name) {
    if (name == "H") return SweepSpec::Parameter::altitude;
    if (name == "M") return SweepSpec::Parameter::blocklength;
    if (name == "L") return SweepSpec::Parameter::packet_bits;
    if (name == "P1") return SweepSpec::Parameter::power1;
    if (name == "P2") return SweepSpec::Parameter::power2;
    if (name == "D") return SweepSpec::Parameter::distance;
    return std::nullopt;
}

RunRecord run_method(const Scenario& scenario, Method method, std::uint64_t seed) {
    RunRecord record;
    record.params = scenario.params;
    record.method = method;
    record.seed = seed;
    SolverConfig cfg = scenario.solver;
    cfg.seed = seed;

    const auto start = std::chrono::steady_clock::now();
    switch (method) {
        case Method::joint:
            record.solution = joint_optimize(scenario.params, cfg).solution;
            break;
        case Method::exhaustive:
            record.solution = exhaustive_search(scenario.params, cfg);
            break;
        case Method::fixed_x:
            record.solution = baseline_fixed_x(scenario.params, cfg);
            break;
        case Method::fixed_m:
            record.solution = baseline_fixed_m(scenario.params, cfg);
            break;
    }
    record.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return record;
}

void cmd_solve(const Scenario& scenario, Method method, std::uint64_t seed,
               std::ostream& summary, std::ostream* csv, bool timing) {
    scenario.params.validate();
    scenario.solver.validate();
    const RunRecord record = run_method(scenario, method, seed);
    const Solution& s = record.solution;
    summary << "method=" << method_name(s.method) << " x=" << format_double(s.x)
            << " m1=" << s.m1 << " m2=" << s.m2 << " eps_approx=" << format_double(s.eps_approx)
            << " eps_exact=" << format_double(s.eps_exact) << " iterations=" << s.iterations
            << " eval_count=" << s.eval_count << " wall_ms=" << format_double(record.wall_ms)
            << '\n';
    if (csv != nullptr) {
        write_solve_header(*csv);
        write_solve_row(*csv, record, timing);
    }
}

void cmd_landscape(const Scenario& scenario, int m1, int m2, double x_min, double x_max,
                   double step, std::ostream& csv) {
    scenario.params.validate();
    if (m1 < 1 || m2 < 1) throw config_error("landscape: m1 and m2 must be >= 1");
    if (!(x_min < x_max)) throw config_error("landscape: x_min must be < x_max");
    if (!(step > 0.0)) throw config_error("landscape: step must be > 0");

    const ScenarioParams& p = scenario.params;
    CsvRow(csv).field("x").field("g").field("g_prime").field("g_second");
    for (const double x : grid_points(x_min, x_max, step)) {
        CsvRow(csv)
            .field(x)
            .field(g_value(p, m1, m2, x))
            .field(g_prime(p, m1, m2, x))
            .field(g_second(p, m1, m2, x));
    }
}

void cmd_convergence(const Scenario& scenario, const std::vector<double>& altitudes,
                     std::uint64_t seed, std::ostream& csv, int threads) {
    if (altitudes.empty()) throw config_error("convergence: altitude list must be non-empty");
    scenario.solver.validate();

    std::vector<IterationTrace> traces(altitudes.size());
    parallel_for(altitudes.size(), threads, [&](std::size_t i) {
        ScenarioParams params = scenario.params;
        params.altitude_m = altitudes[i];
        params.validate();
        SolverConfig cfg = scenario.solver;
        cfg.seed = mix_seed(seed, i, 0);
        traces[i] = joint_optimize(params, cfg).trace;
    });

    CsvRow(csv).field("H").field("iteration").field("eps_approx");
    for (std::size_t i = 0; i < altitudes.size(); ++i) {
        CsvRow(csv).field(altitudes[i]).field(0).field(traces[i].initial_objective);
        for (const IterationRecord& rec : traces[i].iterations) {
            CsvRow(csv).field(altitudes[i]).field(rec.iteration).field(rec.objective);
        }
    }
}

void cmd_compare(const Scenario& scenario, const SweepSpec& sweep, std::uint64_t seed,
                 std::ostream& csv, int threads, bool timing) {
    sweep.validate();
    scenario.solver.validate();

    const std::size_t n_methods = sweep.methods.size();
    const std::size_t reps = static_cast<std::size_t>(sweep.repetitions);
    const std::size_t n_tasks = sweep.values.size() * reps;
    std::vector<RunRecord> records(n_tasks * n_methods);

    parallel_for(n_tasks, threads, [&](std::size_t task) {
        const std::size_t value_index = task / reps;
        const std::size_t repetition = task % reps;
        Scenario point = scenario;
        point.params =
            apply_sweep_value(scenario.params, sweep.parameter, sweep.values[value_index]);
        const std::uint64_t task_seed = mix_seed(seed, value_index, repetition);
        for (std::size_t j = 0; j < n_methods; ++j) {
            records[task * n_methods + j] = run_method(point, sweep.methods[j], task_seed);
        }
    });

    const auto record_at = [&](std::size_t value_index, std::size_t repetition,
                               std::size_t method_index) -> const RunRecord& {
        return records[(value_index * reps + repetition) * n_methods + method_index];
    };

    CsvRow(csv)
        .field("param")
        .field("param_value")
        .field("method")
        .field("repetition")
        .field("eps_approx")
        .field("eps_exact")
        .field("eval_count")
        .field("wall_ms")
        .field("flag");
    const std::string param(sweep_parameter_name(sweep.parameter));
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        for (std::size_t j = 0; j < n_methods; ++j) {
            for (std::size_t r = 0; r < reps; ++r) {
                const RunRecord& record = record_at(i, r, j);
                // A joint result measurably above the exhaustive oracle of
                // the same point is suspicious and gets flagged.
                std::string flag;
                if (sweep.methods[j] == Method::joint) {
                    for (std::size_t k = 0; k < n_methods; ++k) {
                        if (sweep.methods[k] != Method::exhaustive) continue;
                        const double oracle = record_at(i, r, k).solution.eps_approx;
                        if (record.solution.eps_approx > oracle * (1.0 + 1e-6)) {
                            flag = "above_exhaustive_tol";
                        }
                    }
                }
                CsvRow(csv)
                    .field(param)
                    .field(sweep.values[i])
                    .field(std::string(method_name(record.method)))
                    .field(static_cast<long long>(r))
                    .field(record.solution.eps_approx)
                    .field(record.solution.eps_exact)
                    .field(record.solution.eval_count)
                    .field(timing ? record.wall_ms : 0.0)
                    .field(flag);
            }
        }
    }
}

int cmd_verify(const Scenario& scenario, std::ostream& out) {
    const VerifyReport report = run_verification(scenario.params);
    print_report(out, report);
    if (!report.all_passed()) {
        out << "verification FAILED\n";
        return 2;
    }
    out << "verification passed\n";
    return 0;
}

}  // namespace relayopt
