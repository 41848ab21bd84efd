#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vortex/dynamics.hpp"
#include "vortex/invariants.hpp"
#include "vortex/systems.hpp"
#include "vortex/wellposed.hpp"

namespace vortex {

// Configuration-file violation; what() = "<json-pointer path>: <message>".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// One relative/absolute invariant task: a spatial cycle (expression maps in
// u1..uk) advected from t0 to t1 under the flow of σ.
struct InvariantTask {
    InvariantKind kind = InvariantKind::Relative;
    int k = 0;
    int dimension = 1;
    std::vector<Expression> maps;  // n spatial maps, parsed eagerly
    bool closed = true;
    std::optional<double> t0, t1;  // default: the global time span
    int order = 16;
};

struct LiouvilleTask {
    std::vector<double> box_lo, box_hi;
    int count = 16;
    std::optional<double> t0, t1;
    double fd_step = 1e-4;
};

// A fully validated run configuration; every expression in it has already
// been parsed, so later pipeline stages can only fail numerically.
struct RunConfig {
    RunConfig(SpaceSpec space_in, Form sigma_in)
        : space(std::move(space_in)), sigma(std::move(sigma_in)) {}

    SpaceSpec space;
    Form sigma;
    std::string sigma_kind;  // "hamiltonian" | "nambu" | "raw"

    std::optional<std::vector<double>> initial;  // spatial coordinates
    double t0 = 0.0;
    double t1 = 1.0;

    IntegratorOptions integrator;
    SamplingSpec sampling;

    std::vector<InvariantTask> invariant_tasks;
    std::optional<LiouvilleTask> liouville;
};

// Parses and validates a config file; throws ConfigError with a
// JSON-pointer-style path on any violation (expression parse errors are
// wrapped with their position).
RunConfig load_config(const std::string& path);

// Same, from an in-memory JSON document (used by tests).
RunConfig load_config_text(const std::string& json_text);

}  // namespace vortex
