#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vortex {

// Command-line front end.  `args` excludes the program name, e.g.
// {"analyze", "configs/oscillator.json", "--output", "report.json"}.
// Returns the process exit code: 0 success, 1 ill-posed σ, 2 config or
// usage error, 3 numerical failure.  All human-facing text goes to `err`;
// reports/trajectories go to `out` unless --output picks a file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Convenience wrapper over std::cout/std::cerr for main().
int run_cli(int argc, const char* const* argv);

}  // namespace vortex
