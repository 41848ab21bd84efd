#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vortex/dynamics.hpp"

namespace vortex {

// Gauss–Legendre rule mapped to [0,1]; nodes ascending.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int order);

// A k-chain: a smooth map [0,1]^k → extended space.  Two flavors:
//  * expression chains: one Expression per extended coordinate (0 = t) in
//    the parameters u1..uk (variable index d−1 ↔ u_d);
//  * grid chains: values and per-direction tangent vectors stored at the
//    tensor-product Gauss nodes of a fixed order (produced by advection and
//    by the tube sweep; the grid is its own quadrature).
// A chain declared closed must have matching opposite faces; expression
// cycles are validated at 10 random boundary samples (tolerance 1e-9).
class Chain {
public:
    // Extended-space expression chain; maps.size() must be n+1.
    static Chain from_expressions(const SpaceSpec& space, int k, std::vector<Expression> maps,
                                  bool closed);
    // Spatial chain in the slice t = t0; maps are x1..xn only.
    static Chain spatial(const SpaceSpec& space, int k, double t0,
                         std::vector<Expression> spatial_maps, bool closed);
    // Grid chain at the tensor Gauss nodes of `order` (row-major over axes,
    // last axis fastest).  points[i] are extended points; tangents[d][i] are
    // extended tangent vectors ∂X/∂u_d.
    static Chain grid(const SpaceSpec& space, int k, int order, bool closed,
                      std::vector<std::vector<double>> points,
                      std::vector<std::vector<std::vector<double>>> tangents);

    const SpaceSpec& space() const { return space_; }
    int dimension() const { return k_; }
    bool closed() const { return closed_; }
    bool is_grid() const { return maps_.empty(); }
    int grid_order() const { return order_; }

    const std::vector<Expression>& maps() const { return maps_; }
    const std::vector<std::vector<double>>& grid_points() const { return points_; }
    const std::vector<std::vector<std::vector<double>>>& grid_tangents() const {
        return tangents_;
    }

    // Expression-chain evaluation at a parameter vector (size k).
    std::vector<double> point_at(std::span<const double> u) const;

private:
    Chain(SpaceSpec space, int k, bool closed) : space_(std::move(space)), k_(k), closed_(closed) {}

    SpaceSpec space_;
    int k_;
    bool closed_;
    std::vector<Expression> maps_;  // empty for grid chains
    int order_ = 0;
    std::vector<std::vector<double>> points_;
    std::vector<std::vector<std::vector<double>>> tangents_;
};

// Tolerances used when chains are advected or swept along the flow.  The
// defaults are much tighter than the trajectory default on purpose: grid
// tangents are central differences with step fd_step, so flow errors are
// amplified by 1/fd_step and must stay well under the 1e-6 drift budget.
struct AdvectOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double fd_step = 1e-5;  // parameter-space step for grid tangents
};

// Integral of `a` (degree k) over a k-chain.  `order` selects the Gauss
// order per axis for expression chains; grid chains integrate on their own
// stored grid and ignore `order`.
double integrate_over_chain(const Form& a, const Chain& c, int order = 16);

// Flows every Gauss node (and its ±fd_step tangent stencil) of a spatial
// expression chain from t0 to t1; returns the image grid chain in the t=t1
// slice.  t1 == t0 returns the chain unchanged.  A failed node trajectory
// throws NumericalError carrying the node's parameter vector.
Chain advect_chain(const Chain& c, const VortexDynamics& dyn, double t0, double t1,
                   int order = 16, const AdvectOptions& opts = {});

enum class InvariantKind { Relative, Absolute };

// Relative: σ∧(dσ)^k; absolute: (dσ)^{k+1}.  When the degree would exceed
// n+1 the zero form is returned with truncated = true.
struct InvariantPower {
    Form form;
    bool truncated = false;
};

InvariantPower invariant_power(const Form& sigma, int k, InvariantKind kind);

struct InvariantOptions {
    int quadrature_order = 16;
    AdvectOptions advect;
};

struct InvariantReport {
    std::string kind;  // "relative" | "absolute" | "liouville"
    int k = 0;
    double t0 = 0.0;
    double t1 = 0.0;
    double value_t0 = 0.0;
    double value_t1 = 0.0;
    double drift_abs = 0.0;
    double drift_rel = 0.0;  // drift_abs / (1 + |value_t0|)
    int quadrature_order = 0;
    bool truncated = false;
    // Liouville-only fields:
    double max_abs_det_minus_one = 0.0;
    int sample_count = 0;
    std::vector<std::string> sample_errors;
};

// Integrates the spatial part of invariant_power(σ, k, kind) over `cycle`
// at t0 and over its advected image at t1.  The cycle must be a spatial
// expression chain at t0 whose dimension matches the power's degree.
InvariantReport check_invariant(const SigmaAnalysis& analysis, const VortexDynamics& dyn,
                                const Chain& cycle, double t0, double t1, int k,
                                InvariantKind kind, const InvariantOptions& opts = {});

// Convenience wrapper: analyze σ, build dynamics, run the relative check.
InvariantReport check_relative_invariant(const Form& sigma, const Chain& cycle, double t0,
                                         double t1, int k, const InvariantOptions& opts = {});

struct LiouvilleOptions {
    double fd_step = 1e-4;  // per-coordinate displacement for the Jacobian
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
};

// Flow-map Jacobian determinant at `count` seeded random points of the box:
// each determinant needs 2n trajectories (central differences, fd_step).
// Reports max |det J − 1| over the samples; per-sample trajectory failures
// are recorded, not fatal (unless every sample fails).
InvariantReport check_liouville(const VortexDynamics& dyn, std::span<const double> box_lo,
                                std::span<const double> box_hi, double t0, double t1, int count,
                                std::uint64_t seed, const LiouvilleOptions& opts = {});

// Sweeps a spatial 1-cycle along the flow into the 2-chain of solution
// curves between the t0 and t1 slices: `order` Gauss nodes in the cycle
// parameter each carry one solution curve sampled at the Gauss times; time
// tangents are analytic ((t1−t0)·(1, v)), cycle tangents central differences.
Chain sweep_solution_chain(const VortexDynamics& dyn, const Chain& cycle, double t0, double t1,
                           int order = 16, const AdvectOptions& opts = {});

}  // namespace vortex
