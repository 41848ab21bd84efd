#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vortex/form.hpp"

namespace vortex {

// Degree/dimension and parity admissibility of a p-form equation on an
// n-dimensional spatial slice.
struct DegreeVerdict {
    bool degree_ok = false;  // C(n,p) == n, i.e. p == 1 or p == n−1
    bool parity_ok = false;  // fails only for p == 1 with n odd
    bool pass() const { return degree_ok && parity_ok; }
};

// Requires 1 ≤ p ≤ n.
DegreeVerdict check_degree(int n, int p);

// Where to probe the rank of the coefficient form.
struct SamplingSpec {
    std::uint64_t seed = 42;
    int count = 32;  // random points when explicit_points is empty
    double box_lo = -1.0;
    double box_hi = 1.0;
    // t values cycled across the random points (coefficients may depend on t).
    std::vector<double> t_values{0.0, 1.0, 3.14159265358979312};
    // When nonempty: exact extended points (t, x1..xn) to probe instead.
    std::vector<std::vector<double>> explicit_points;
};

struct RankSample {
    std::vector<double> point;         // extended point, t first
    std::optional<int> rank;           // absent when evaluation failed
    std::optional<std::string> error;  // the evaluation failure, if any
};

struct WellPosednessReport {
    int n = 0;
    int p = 0;  // degree of σ
    bool degree_ok = false;
    bool parity_ok = false;
    std::vector<RankSample> rank_samples;
    bool well_posed = false;
    std::vector<std::string> reasons;  // empty when well-posed
};

// Decomposition σ = dt∧ŝ + r̂ together with dσ = dt∧Ŝ + R̂ and the
// well-posedness report for the induced equation i_v R̂ = −Ŝ.
struct SigmaAnalysis {
    Form sigma;
    FormSplit sigma_parts;   // ŝ, r̂
    FormSplit dsigma_parts;  // s_hat = Ŝ = −d̂ŝ + ∂_t r̂; r_hat = R̂ = d̂r̂
    WellPosednessReport report;
};

SigmaAnalysis analyze(const Form& sigma, const SamplingSpec& sampling = {});

}  // namespace vortex
