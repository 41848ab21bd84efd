#pragma once

#include <span>
#include <string>
#include <vector>

#include "vortex/wellposed.hpp"

namespace vortex {

// Pointwise linear-algebra failure: singular/ill-conditioned contraction
// matrix, or a failed residual check.  Carries the extended point and the
// reciprocal condition estimate (0 when unknown).
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& message, std::vector<double> point, double rcond)
        : std::runtime_error(message), point_(std::move(point)), rcond_(rcond) {}
    const std::vector<double>& point() const { return point_; }
    double rcond() const { return rcond_; }

private:
    std::vector<double> point_;
    double rcond_;
};

// The ODE right-hand side induced by a well-posed σ: at each extended point
// the spatial velocity v solves i_v R̂ = −Ŝ (an n×n linear system in the
// increasing-index basis).  Coefficients are compiled once; immutable and
// shareable across threads afterwards.
class VortexDynamics {
public:
    // Throws std::invalid_argument unless analysis.report.well_posed.
    // debug_check additionally verifies i_v Ŝ = 0 (≤ 1e-9, scaled) on every
    // velocity evaluation.
    explicit VortexDynamics(const SigmaAnalysis& analysis, bool debug_check = false);

    const SpaceSpec& space() const { return space_; }
    int n() const { return space_.dim(); }

    // Solves for v at (t, x); x has n entries.  Throws NumericalError when
    // the matrix is singular or its reciprocal condition estimate < 1e-12.
    std::vector<double> velocity_at(double t, std::span<const double> x) const;

private:
    struct Entry {
        int row;
        int col;
        double sign;
        int coeff;  // index into tape_
    };

    SpaceSpec space_;
    std::vector<CompiledExpr> tape_;      // compiled coefficient expressions
    std::vector<Entry> matrix_entries_;   // A(row, col) += sign * tape[coeff]
    std::vector<int> rhs_coeffs_;         // per row: tape index of Ŝ_J, or -1
    std::vector<Entry> check_entries_;    // i_v Ŝ rows (debug mode only)
    int check_rows_ = 0;
    bool debug_check_ = false;
};

enum class IntegrationMethod { RKF45, RK4Fixed };

struct IntegratorOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    IntegrationMethod method = IntegrationMethod::RKF45;

    // Output selection: explicit times win over sample_count; with neither,
    // every accepted step is emitted.
    std::vector<double> sample_times;
    int sample_count = 0;  // > 0 → that many uniform intervals, endpoints included

    double initial_step = 0.0;  // 0 → |t1-t0|/100
    double fixed_step = 1e-3;   // RK4Fixed only
    long max_steps = 2000000;
};

struct TrajectorySample {
    double t;
    std::vector<double> x;
};

// Samples are stored with strictly increasing t (backward runs are reversed
// on return).  On failure `ok` is false, `failure` names the cause, and the
// samples collected so far are retained.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    long steps_accepted = 0;
    long steps_rejected = 0;
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    bool ok = true;
    std::string failure;
};

Trajectory integrate_trajectory(const VortexDynamics& dyn, std::span<const double> x0,
                                double t0, double t1, const IntegratorOptions& opts = {});

}  // namespace vortex
