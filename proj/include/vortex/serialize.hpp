#pragma once

#include <string>

#include "vortex/config.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/invariants.hpp"
#include "vortex/wellposed.hpp"

namespace vortex {

// Deterministic primitive formatting for reports: %.17g for doubles, fixed
// key order, no locale dependence.  Reports must be byte-identical across
// runs with the same seed, which rules out library serializers with their
// own float formatting.
std::string json_double(double v);
std::string json_string(const std::string& s);

// Report document: verdict/degree/parity/rank_samples always; invariants[]
// when tasks ran; liouville{} when a Liouville task ran.
std::string report_to_json(const WellPosednessReport& report,
                           const std::vector<InvariantReport>* invariants = nullptr,
                           const InvariantReport* liouville = nullptr);

// Trajectory CSV: header `t,x1,...,xn`, one row per sample, %.17g fields.
std::string trajectory_to_csv(const Trajectory& traj, int n);

// Trajectory as JSON (simulate --format json).
std::string trajectory_to_json(const Trajectory& traj, int n);

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a half-written file.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace vortex
