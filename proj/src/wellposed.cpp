#include "vortex/wellposed.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vortex {

namespace {

// C(n,p) without overflow for the n we ever meet (n ≤ 60 is already far
// beyond any sensible form degree here).
unsigned long long binomial(int n, int p) {
    if (p < 0 || p > n) return 0;
    p = std::min(p, n - p);
    unsigned long long result = 1;
    for (int i = 1; i <= p; ++i)
        result = result * static_cast<unsigned long long>(n - p + i) /
                 static_cast<unsigned long long>(i);
    return result;
}

std::string point_to_string(const std::vector<double>& point) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (i) os << ", ";
        os << point[i];
    }
    os << ")";
    return os.str();
}

}  // namespace

DegreeVerdict check_degree(int n, int p) {
    if (p < 1 || p > n) throw std::invalid_argument("check_degree: need 1 <= p <= n");
    DegreeVerdict v;
    v.degree_ok = binomial(n, p) == static_cast<unsigned long long>(n);
    v.parity_ok = !(p == 1 && n % 2 == 1);
    return v;
}

SigmaAnalysis analyze(const Form& sigma, const SamplingSpec& sampling) {
    const SpaceSpec& space = sigma.space();
    const int n = space.dim();
    const int p = sigma.degree();

    FormSplit parts = decompose(sigma);
    // dσ = dt ∧ Ŝ + R̂ with Ŝ = −d̂ŝ + ∂_t r̂ and R̂ = d̂r̂.  The d̂ŝ term is
    // added only when it has terms: for degree-0 σ the (empty) ŝ would
    // otherwise contribute a zero form of the wrong degree.
    Form S_hat = exterior_derivative(parts.r_hat, DerivativeMode::Time);
    const Form d_s_hat = exterior_derivative(parts.s_hat, DerivativeMode::Spatial);
    if (!d_s_hat.is_zero()) S_hat = S_hat - d_s_hat;
    Form R_hat = exterior_derivative(parts.r_hat, DerivativeMode::Spatial);

    WellPosednessReport report;
    report.n = n;
    report.p = p;

    if (p < 1 || p > n) {
        report.degree_ok = false;
        report.parity_ok = true;
        report.reasons.push_back("degree-out-of-range: need 1 <= p <= n for the rank test");
    } else {
        const DegreeVerdict dv = check_degree(n, p);
        report.degree_ok = dv.degree_ok;
        report.parity_ok = dv.parity_ok;
        if (!dv.degree_ok)
            report.reasons.push_back("degree-mismatch: C(n,p) != n, the contraction map is not square");
        if (!dv.parity_ok)
            report.reasons.push_back("odd-dimensional symplectic candidate: p = 1 needs even n");
    }

    // Sample points: explicit list, or `count` uniform draws in the box with
    // t cycling through t_values.  Rank sampling runs even when the degree
    // tests fail so ill-posed reports carry a witness.
    std::vector<std::vector<double>> points = sampling.explicit_points;
    if (points.empty()) {
        std::mt19937_64 rng(sampling.seed);
        std::uniform_real_distribution<double> dist(sampling.box_lo, sampling.box_hi);
        const std::vector<double> ts =
            sampling.t_values.empty() ? std::vector<double>{0.0} : sampling.t_values;
        for (int i = 0; i < sampling.count; ++i) {
            std::vector<double> pt(static_cast<std::size_t>(n) + 1);
            pt[0] = ts[static_cast<std::size_t>(i) % ts.size()];
            for (int j = 1; j <= n; ++j) pt[static_cast<std::size_t>(j)] = dist(rng);
            points.push_back(std::move(pt));
        }
    }

    bool any_rank_ok = false;
    bool all_ranks_full = true;
    const bool rank_testable = R_hat.degree() >= 1 && R_hat.degree() <= n;
    for (auto& pt : points) {
        if (static_cast<int>(pt.size()) != n + 1)
            throw std::invalid_argument("analyze: explicit sample point has wrong dimension");
        RankSample sample;
        sample.point = pt;
        try {
            int rank = 0;
            if (!rank_testable) {
                rank = 0;  // R̂ is identically zero or out of degree range
            } else if (R_hat.degree() == n) {
                // A (non-zero) top-degree spatial form automatically has rank
                // n, so only the non-vanishing of its single coefficient is
                // checked (this agrees with the LU rank of the full matrix).
                IndexTuple top;
                for (int j = 1; j <= n; ++j) top.push_back(j);
                const double value = R_hat.coefficient(top).evaluate(pt);
                rank = value != 0.0 ? n : 0;
            } else {
                rank = form_rank_at(R_hat, pt);
            }
            sample.rank = rank;
            any_rank_ok = true;
            if (rank != n) {
                all_ranks_full = false;
                if (report.reasons.empty() ||
                    report.reasons.back().rfind("rank-deficient", 0) != 0)
                    report.reasons.push_back("rank-deficient sample: rank " +
                                             std::to_string(rank) + " < " + std::to_string(n) +
                                             " at " + point_to_string(pt));
            }
        } catch (const EvalError& e) {
            sample.error = e.what();
        }
        report.rank_samples.push_back(std::move(sample));
    }
    if (!any_rank_ok && !report.rank_samples.empty()) {
        all_ranks_full = false;
        report.reasons.push_back("no-successful-rank-sample: every probe point failed to evaluate");
    }
    if (report.rank_samples.empty()) {
        all_ranks_full = false;
        report.reasons.push_back("no-rank-samples: sampling produced no probe points");
    }

    report.well_posed = report.degree_ok && report.parity_ok && all_ranks_full;
    if (report.well_posed) report.reasons.clear();

    return SigmaAnalysis{sigma, std::move(parts), FormSplit{std::move(S_hat), std::move(R_hat)},
                         std::move(report)};
}

}  // namespace vortex
