#include "vortex/cli.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vortex/config.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/invariants.hpp"
#include "vortex/serialize.hpp"
#include "vortex/wellposed.hpp"

namespace vortex {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIllPosed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliOptions {
    std::string config_path;
    std::string output;        // empty → stdout
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<double> t0, t1;
    std::optional<int> samples;
};

void add_common_options(CLI::App* sub, CliOptions& opts, bool with_times) {
    sub->add_option("config", opts.config_path, "Path to the run configuration (JSON)")
        ->required();
    sub->add_option("--output", opts.output, "Write the result to this file instead of stdout");
    sub->add_option("--seed", opts.seed, "Override the sampling seed from the config");
    if (with_times) {
        sub->add_option("--t0", opts.t0, "Override the start time from the config");
        sub->add_option("--t1", opts.t1, "Override the end time from the config");
    }
}

// Writes `content` to --output (atomically) or to the output stream.
void deliver(const CliOptions& opts, std::ostream& out, const std::string& content) {
    if (opts.output.empty()) {
        out << content;
        if (!content.empty() && content.back() != '\n') out << '\n';
    } else {
        atomic_write_file(opts.output, content);
    }
}

int run_invariants(const RunConfig& config, const SigmaAnalysis& analysis,
                   const VortexDynamics& dyn, const CliOptions& opts, std::ostream& out,
                   std::ostream& err) {
    std::vector<InvariantReport> reports;
    std::optional<InvariantReport> liouville;
    bool liouville_failed = false;

    try {
        for (std::size_t i = 0; i < config.invariant_tasks.size(); ++i) {
            const InvariantTask& task = config.invariant_tasks[i];
            const double t0 = task.t0.value_or(config.t0);
            const double t1 = task.t1.value_or(config.t1);
            Chain cycle =
                Chain::spatial(config.space, task.dimension, t0, task.maps, task.closed);
            InvariantOptions io;
            io.quadrature_order = task.order;
            reports.push_back(
                check_invariant(analysis, dyn, cycle, t0, t1, task.k, task.kind, io));
        }
        if (config.liouville) {
            const LiouvilleTask& task = *config.liouville;
            LiouvilleOptions lo;
            lo.fd_step = task.fd_step;
            liouville = check_liouville(dyn, task.box_lo, task.box_hi,
                                        task.t0.value_or(config.t0), task.t1.value_or(config.t1),
                                        task.count, config.sampling.seed, lo);
            // Every sample failing means the probe produced no data at all.
            liouville_failed =
                liouville->sample_count > 0 &&
                static_cast<int>(liouville->sample_errors.size()) == liouville->sample_count;
        }
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const EvalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "invalid invariant task: " << e.what() << "\n";
        return kExitConfig;
    }

    deliver(opts, out,
            report_to_json(analysis.report, &reports, liouville ? &*liouville : nullptr));
    if (liouville_failed) {
        err << "numerical failure: every Liouville sample failed\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vortex-lines equations on extended phase space: well-posedness analysis, "
                 "derived dynamics, and integral-invariant checks"};
    app.require_subcommand(1);

    CliOptions opts;

    CLI::App* cmd_analyze =
        app.add_subcommand("analyze", "Check well-posedness of σ and report the verdict");
    add_common_options(cmd_analyze, opts, /*with_times=*/false);

    CLI::App* cmd_simulate =
        app.add_subcommand("simulate", "Integrate the derived velocity field from `initial`");
    add_common_options(cmd_simulate, opts, /*with_times=*/true);
    cmd_simulate->add_option("--format", opts.format, "Trajectory output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_simulate->add_option("--samples", opts.samples,
                             "Sample the trajectory at this many uniform times");

    CLI::App* cmd_invariants = app.add_subcommand(
        "invariants", "Evaluate the configured integral invariants and Liouville checks");
    add_common_options(cmd_invariants, opts, /*with_times=*/true);

    // CLI11 expects argv-style input including a program name.
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("vortexlines");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::optional<RunConfig> config;
    try {
        config.emplace(load_config(opts.config_path));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (opts.seed) config->sampling.seed = *opts.seed;
    if (opts.t0) config->t0 = *opts.t0;
    if (opts.t1) config->t1 = *opts.t1;
    if (opts.samples) {
        if (*opts.samples < 1) {
            err << "usage error: --samples must be >= 1\n";
            return kExitConfig;
        }
        config->integrator.sample_count = *opts.samples;
        config->integrator.sample_times.clear();
    }

    SigmaAnalysis analysis = analyze(config->sigma, config->sampling);

    if (cmd_analyze->parsed()) {
        deliver(opts, out, report_to_json(analysis.report));
        return analysis.report.well_posed ? kExitOk : kExitIllPosed;
    }

    // simulate/invariants never start integrating an ill-posed system.
    if (!analysis.report.well_posed) {
        err << "sigma is ill-posed; refusing to integrate\n";
        err << report_to_json(analysis.report) << "\n";
        return kExitIllPosed;
    }

    VortexDynamics dyn(analysis);

    if (cmd_simulate->parsed()) {
        if (!config->initial) {
            err << "config error: /initial: required by the simulate command\n";
            return kExitConfig;
        }
        Trajectory traj =
            integrate_trajectory(dyn, *config->initial, config->t0, config->t1, config->integrator);
        const int n = config->space.dim();
        deliver(opts, out,
                opts.format == "json" ? trajectory_to_json(traj, n) : trajectory_to_csv(traj, n));
        if (!traj.ok) {
            err << "numerical failure: " << traj.failure << "\n";
            return kExitNumerical;
        }
        return kExitOk;
    }

    return run_invariants(*config, analysis, dyn, opts, out, err);
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace vortex
