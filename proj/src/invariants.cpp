#include "vortex/invariants.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vortex {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string param_string(std::span<const double> u) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) os << ", ";
        os << u[i];
    }
    os << ")";
    return os.str();
}

// Iterates all k-digit counters in row-major order (last axis fastest);
// returns false once exhausted.
bool next_multi_index(std::vector<int>& idx, int base) {
    for (int d = static_cast<int>(idx.size()) - 1; d >= 0; --d) {
        if (++idx[static_cast<std::size_t>(d)] < base) return true;
        idx[static_cast<std::size_t>(d)] = 0;
    }
    return false;
}

long power_of(int base, int exp) {
    long out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace

QuadratureRule gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // i-th largest root of P_order on [-1,1]; Newton on the recurrence.
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(order) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= order; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // Refresh dp at the converged node for the weight formula.
        {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= order; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1,1] → [0,1]: x ↦ (1+x)/2, weights halve.
        rule.nodes[static_cast<std::size_t>(order - 1 - i)] = 0.5 * (1.0 + x);
        rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        rule.weights[static_cast<std::size_t>(order - 1 - i)] = 0.5 * w;
        rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    }
    return rule;
}

Chain Chain::from_expressions(const SpaceSpec& space, int k, std::vector<Expression> maps,
                              bool closed) {
    if (k < 0) throw std::invalid_argument("Chain: dimension must be >= 0");
    if (static_cast<int>(maps.size()) != space.extended_dim())
        throw std::invalid_argument("Chain: need one map per extended coordinate (t first)");
    for (const Expression& m : maps) {
        const std::set<int> vars = m.variable_indices();
        if (!vars.empty() && *vars.rbegin() >= k)
            throw std::invalid_argument("Chain: map uses a parameter beyond u" +
                                        std::to_string(k));
    }
    Chain c(space, k, closed);
    c.maps_ = std::move(maps);

    if (closed && k >= 1) {
        // Opposite faces must agree: u_d = 0 vs u_d = 1 at 10 random samples.
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int d = 0; d < k; ++d) {
            for (int s = 0; s < 10; ++s) {
                std::vector<double> u(static_cast<std::size_t>(k));
                for (double& v : u) v = dist(rng);
                std::vector<double> lo_pt, hi_pt;
                u[static_cast<std::size_t>(d)] = 0.0;
                lo_pt = c.point_at(u);
                u[static_cast<std::size_t>(d)] = 1.0;
                hi_pt = c.point_at(u);
                for (std::size_t i = 0; i < lo_pt.size(); ++i)
                    if (std::abs(lo_pt[i] - hi_pt[i]) > 1e-9)
                        throw std::invalid_argument(
                            "Chain: declared closed but faces u" + std::to_string(d + 1) +
                            "=0 and =1 differ by " + std::to_string(lo_pt[i] - hi_pt[i]));
            }
        }
    }
    return c;
}

Chain Chain::spatial(const SpaceSpec& space, int k, double t0,
                     std::vector<Expression> spatial_maps, bool closed) {
    if (static_cast<int>(spatial_maps.size()) != space.dim())
        throw std::invalid_argument("Chain::spatial: need one map per spatial coordinate");
    std::vector<Expression> maps;
    maps.reserve(spatial_maps.size() + 1);
    maps.push_back(Expression::constant(t0));
    for (Expression& e : spatial_maps) maps.push_back(std::move(e));
    return from_expressions(space, k, std::move(maps), closed);
}

Chain Chain::grid(const SpaceSpec& space, int k, int order, bool closed,
                  std::vector<std::vector<double>> points,
                  std::vector<std::vector<std::vector<double>>> tangents) {
    if (k < 0 || order < 1) throw std::invalid_argument("Chain::grid: bad dimension or order");
    const long expected = power_of(order, k);
    if (static_cast<long>(points.size()) != expected)
        throw std::invalid_argument("Chain::grid: need order^k node points");
    if (static_cast<int>(tangents.size()) != k)
        throw std::invalid_argument("Chain::grid: need one tangent list per axis");
    for (const auto& pt : points)
        if (static_cast<int>(pt.size()) != space.extended_dim())
            throw std::invalid_argument("Chain::grid: node points must be extended points");
    for (const auto& list : tangents) {
        if (list.size() != points.size())
            throw std::invalid_argument("Chain::grid: tangent list size mismatch");
        for (const auto& tv : list)
            if (static_cast<int>(tv.size()) != space.extended_dim())
                throw std::invalid_argument("Chain::grid: tangents must be extended vectors");
    }
    Chain c(space, k, closed);
    c.order_ = order;
    c.points_ = std::move(points);
    c.tangents_ = std::move(tangents);
    return c;
}

std::vector<double> Chain::point_at(std::span<const double> u) const {
    if (is_grid()) throw std::logic_error("Chain::point_at: grid chains have no parametrization");
    std::vector<double> out;
    out.reserve(maps_.size());
    for (const Expression& m : maps_) out.push_back(m.evaluate(u));
    return out;
}

namespace {

// Pullback integrand at one node: Σ_K a_K(X) · det(tangent components K).
double pullback_value(const std::map<IndexTuple, Expression>& terms,
                      std::span<const double> point,
                      const std::vector<std::vector<double>>& tangents, int k) {
    double total = 0.0;
    Eigen::MatrixXd mat(k, k);
    for (const auto& [key, coeff] : terms) {
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                mat(r, c) = tangents[static_cast<std::size_t>(c)]
                                    [static_cast<std::size_t>(key[static_cast<std::size_t>(r)])];
        const double det = k == 0 ? 1.0 : mat.determinant();
        if (det == 0.0) continue;
        total += coeff.evaluate(point) * det;
    }
    return total;
}

}  // namespace

double integrate_over_chain(const Form& a, const Chain& c, int order) {
    if (a.space() != c.space())
        throw std::invalid_argument("integrate_over_chain: space mismatch");
    const int k = c.dimension();
    if (a.degree() != k)
        throw std::invalid_argument("integrate_over_chain: form degree must equal chain dimension");
    if (a.is_zero()) return 0.0;

    if (k == 0) {
        const std::vector<double> point =
            c.is_grid() ? c.grid_points().at(0) : c.point_at(std::span<const double>{});
        return a.coefficient(IndexTuple{}).evaluate(point);
    }

    const int used_order = c.is_grid() ? c.grid_order() : order;
    const QuadratureRule rule = gauss_legendre(used_order);
    const int dim = a.space().extended_dim();

    double total = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);

    if (c.is_grid()) {
        long flat = 0;
        do {
            double w = 1.0;
            for (int d = 0; d < k; ++d) w *= rule.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
            const auto& point = c.grid_points()[static_cast<std::size_t>(flat)];
            std::vector<std::vector<double>> tangents(static_cast<std::size_t>(k));
            for (int d = 0; d < k; ++d)
                tangents[static_cast<std::size_t>(d)] =
                    c.grid_tangents()[static_cast<std::size_t>(d)][static_cast<std::size_t>(flat)];
            total += w * pullback_value(a.terms(), point, tangents, k);
            ++flat;
        } while (next_multi_index(idx, used_order));
        return total;
    }

    // Expression chain: symbolic tangents, evaluated per node.
    std::vector<std::vector<Expression>> dmaps(static_cast<std::size_t>(k));
    for (int d = 0; d < k; ++d) {
        dmaps[static_cast<std::size_t>(d)].reserve(static_cast<std::size_t>(dim));
        for (const Expression& m : c.maps())
            dmaps[static_cast<std::size_t>(d)].push_back(m.differentiate(d));
    }
    std::vector<double> u(static_cast<std::size_t>(k));
    do {
        double w = 1.0;
        for (int d = 0; d < k; ++d) {
            u[static_cast<std::size_t>(d)] = rule.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
            w *= rule.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
        }
        const std::vector<double> point = c.point_at(u);
        std::vector<std::vector<double>> tangents(static_cast<std::size_t>(k));
        for (int d = 0; d < k; ++d) {
            auto& tv = tangents[static_cast<std::size_t>(d)];
            tv.reserve(static_cast<std::size_t>(dim));
            for (const Expression& e : dmaps[static_cast<std::size_t>(d)])
                tv.push_back(e.evaluate(u));
        }
        total += w * pullback_value(a.terms(), point, tangents, k);
    } while (next_multi_index(idx, used_order));
    return total;
}

namespace {

// Start point of a spatial expression chain at parameter u, with the t map
// validated against t0 elsewhere; returns the spatial coordinates only.
std::vector<double> spatial_start(const Chain& c, std::span<const double> u) {
    const std::vector<double> full = c.point_at(u);
    return std::vector<double>(full.begin() + 1, full.end());
}

// Flow one spatial point from t0 to t1, returning the endpoint coordinates.
std::vector<double> flow_point(const VortexDynamics& dyn, const std::vector<double>& x,
                               double t0, double t1, double abs_tol, double rel_tol,
                               std::span<const double> u_for_error) {
    IntegratorOptions o;
    o.abs_tol = abs_tol;
    o.rel_tol = rel_tol;
    o.sample_times = {t1};
    const Trajectory traj = integrate_trajectory(dyn, x, t0, t1, o);
    if (!traj.ok || traj.samples.empty())
        throw NumericalError("advection trajectory failed at chain parameter " +
                                 param_string(u_for_error) + ": " + traj.failure,
                             x, 0.0);
    for (const TrajectorySample& s : traj.samples)
        if (s.t == t1) return s.x;
    return traj.samples.back().x;
}

void require_spatial_slice(const Chain& c, double t0, const char* who) {
    if (c.is_grid())
        throw std::invalid_argument(std::string(who) + ": expression-parametrized chain required");
    double t_const = 0.0;
    if (!c.maps().front().is_constant(&t_const) || std::abs(t_const - t0) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": chain must lie in the t=t0 slice");
}

}  // namespace

Chain advect_chain(const Chain& c, const VortexDynamics& dyn, double t0, double t1, int order,
                   const AdvectOptions& opts) {
    require_spatial_slice(c, t0, "advect_chain");
    if (c.space() != dyn.space())
        throw std::invalid_argument("advect_chain: chain and dynamics live on different spaces");
    if (t1 == t0) return c;  // node-wise identical

    const int k = c.dimension();
    const QuadratureRule rule = gauss_legendre(order);
    const long node_count = power_of(order, k);
    const double h = opts.fd_step;

    std::vector<std::vector<double>> points;
    points.reserve(static_cast<std::size_t>(node_count));
    std::vector<std::vector<std::vector<double>>> tangents(
        static_cast<std::size_t>(k),
        std::vector<std::vector<double>>());
    for (auto& list : tangents) list.reserve(static_cast<std::size_t>(node_count));

    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::vector<double> u(static_cast<std::size_t>(k));
    do {
        for (int d = 0; d < k; ++d)
            u[static_cast<std::size_t>(d)] =
                rule.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];

        std::vector<double> end =
            flow_point(dyn, spatial_start(c, u), t0, t1, opts.abs_tol, opts.rel_tol, u);
        std::vector<double> point;
        point.reserve(end.size() + 1);
        point.push_back(t1);
        point.insert(point.end(), end.begin(), end.end());
        points.push_back(std::move(point));

        for (int d = 0; d < k; ++d) {
            std::vector<double> up(u), um(u);
            up[static_cast<std::size_t>(d)] += h;
            um[static_cast<std::size_t>(d)] -= h;
            const std::vector<double> xp =
                flow_point(dyn, spatial_start(c, up), t0, t1, opts.abs_tol, opts.rel_tol, up);
            const std::vector<double> xm =
                flow_point(dyn, spatial_start(c, um), t0, t1, opts.abs_tol, opts.rel_tol, um);
            std::vector<double> tv;
            tv.reserve(xp.size() + 1);
            tv.push_back(0.0);  // the image stays in the t = t1 slice
            for (std::size_t i = 0; i < xp.size(); ++i) tv.push_back((xp[i] - xm[i]) / (2 * h));
            tangents[static_cast<std::size_t>(d)].push_back(std::move(tv));
        }
    } while (next_multi_index(idx, order));

    return Chain::grid(c.space(), k, order, c.closed(), std::move(points), std::move(tangents));
}

InvariantPower invariant_power(const Form& sigma, int k, InvariantKind kind) {
    if (k < 0) throw std::invalid_argument("invariant_power: k must be >= 0");
    const int n1 = sigma.space().extended_dim();
    const int p = sigma.degree();
    const int degree = kind == InvariantKind::Relative ? p + k * (p + 1) : (k + 1) * (p + 1);
    if (degree > n1) return InvariantPower{Form(sigma.space(), n1), true};

    // Relative: σ then k copies of dσ; absolute: dσ then k more.
    const Form dsigma = exterior_derivative(sigma, DerivativeMode::Full);
    Form out = kind == InvariantKind::Relative ? sigma : dsigma;
    for (int i = 0; i < k; ++i) out = wedge(out, dsigma);
    return InvariantPower{std::move(out), false};
}

InvariantReport check_invariant(const SigmaAnalysis& analysis, const VortexDynamics& dyn,
                                const Chain& cycle, double t0, double t1, int k,
                                InvariantKind kind, const InvariantOptions& opts) {
    InvariantReport report;
    report.kind = kind == InvariantKind::Relative ? "relative" : "absolute";
    report.k = k;
    report.t0 = t0;
    report.t1 = t1;
    report.quadrature_order = opts.quadrature_order;

    const InvariantPower power = invariant_power(analysis.sigma, k, kind);
    report.truncated = power.truncated;
    if (power.truncated) return report;  // zero form: nothing to integrate

    const Form spatial_part = decompose(power.form).r_hat;
    if (spatial_part.degree() != cycle.dimension())
        throw std::invalid_argument(
            "check_invariant: cycle dimension must match the invariant's spatial degree " +
            std::to_string(spatial_part.degree()));

    report.value_t0 = integrate_over_chain(spatial_part, cycle, opts.quadrature_order);
    const Chain advected = advect_chain(cycle, dyn, t0, t1, opts.quadrature_order, opts.advect);
    report.value_t1 = integrate_over_chain(spatial_part, advected, opts.quadrature_order);
    report.drift_abs = std::abs(report.value_t1 - report.value_t0);
    report.drift_rel = report.drift_abs / (1.0 + std::abs(report.value_t0));
    return report;
}

InvariantReport check_relative_invariant(const Form& sigma, const Chain& cycle, double t0,
                                         double t1, int k, const InvariantOptions& opts) {
    const SigmaAnalysis analysis = analyze(sigma);
    const VortexDynamics dyn(analysis);
    return check_invariant(analysis, dyn, cycle, t0, t1, k, InvariantKind::Relative, opts);
}

InvariantReport check_liouville(const VortexDynamics& dyn, std::span<const double> box_lo,
                                std::span<const double> box_hi, double t0, double t1, int count,
                                std::uint64_t seed, const LiouvilleOptions& opts) {
    const int n = dyn.n();
    if (static_cast<int>(box_lo.size()) != n || static_cast<int>(box_hi.size()) != n)
        throw std::invalid_argument("check_liouville: box bounds must have n components");
    if (count < 1) throw std::invalid_argument("check_liouville: need at least one sample");

    InvariantReport report;
    report.kind = "liouville";
    report.t0 = t0;
    report.t1 = t1;
    report.sample_count = count;

    std::mt19937_64 rng(seed);
    const double h = opts.fd_step;

    for (int s = 0; s < count; ++s) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::uniform_real_distribution<double> dist(box_lo[static_cast<std::size_t>(i)],
                                                        box_hi[static_cast<std::size_t>(i)]);
            x[static_cast<std::size_t>(i)] = dist(rng);
        }
        try {
            Eigen::MatrixXd J(n, n);
            for (int i = 0; i < n; ++i) {
                std::vector<double> xp(x), xm(x);
                xp[static_cast<std::size_t>(i)] += h;
                xm[static_cast<std::size_t>(i)] -= h;
                const std::vector<double> fp =
                    flow_point(dyn, xp, t0, t1, opts.abs_tol, opts.rel_tol, {});
                const std::vector<double> fm =
                    flow_point(dyn, xm, t0, t1, opts.abs_tol, opts.rel_tol, {});
                for (int r = 0; r < n; ++r)
                    J(r, i) = (fp[static_cast<std::size_t>(r)] - fm[static_cast<std::size_t>(r)]) /
                              (2 * h);
            }
            const double det = J.determinant();
            report.max_abs_det_minus_one =
                std::max(report.max_abs_det_minus_one, std::abs(det - 1.0));
        } catch (const NumericalError& e) {
            report.sample_errors.push_back("sample " + std::to_string(s) + ": " + e.what());
        } catch (const EvalError& e) {
            report.sample_errors.push_back("sample " + std::to_string(s) + ": " + e.what());
        }
    }
    return report;
}

Chain sweep_solution_chain(const VortexDynamics& dyn, const Chain& cycle, double t0, double t1,
                           int order, const AdvectOptions& opts) {
    require_spatial_slice(cycle, t0, "sweep_solution_chain");
    if (cycle.dimension() != 1)
        throw std::invalid_argument("sweep_solution_chain: the swept cycle must be 1-dimensional");
    if (cycle.space() != dyn.space())
        throw std::invalid_argument("sweep_solution_chain: chain and dynamics space mismatch");

    const int n = dyn.n();
    const QuadratureRule rule = gauss_legendre(order);
    const double h = opts.fd_step;

    // Solution-curve sample times at the Gauss nodes of s ∈ [0,1].
    std::vector<double> times;
    times.reserve(rule.nodes.size());
    for (double s : rule.nodes) times.push_back(t0 + s * (t1 - t0));

    // One trajectory per u node (plus the ±h stencil pair for u-tangents),
    // each sampled at every Gauss time.
    auto curve = [&](std::span<const double> u) {
        IntegratorOptions o;
        o.abs_tol = opts.abs_tol;
        o.rel_tol = opts.rel_tol;
        o.sample_times = times;
        const Trajectory traj =
            integrate_trajectory(dyn, spatial_start(cycle, u), t0, t1, o);
        if (!traj.ok || traj.samples.size() != times.size())
            throw NumericalError("sweep trajectory failed at cycle parameter " + param_string(u) +
                                     ": " + traj.failure,
                                 spatial_start(cycle, u), 0.0);
        // Return states indexed by the s node (samples come back ascending in t).
        std::vector<std::vector<double>> by_node(times.size());
        for (const TrajectorySample& sample : traj.samples) {
            bool placed = false;
            for (std::size_t j = 0; j < times.size(); ++j) {
                if (sample.t == times[j]) {
                    by_node[j] = sample.x;
                    placed = true;
                    break;
                }
            }
            if (!placed)
                throw NumericalError("sweep trajectory returned an unexpected sample time",
                                     sample.x, 0.0);
        }
        return by_node;
    };

    const long node_count = static_cast<long>(order) * order;
    std::vector<std::vector<double>> points(static_cast<std::size_t>(node_count));
    std::vector<std::vector<std::vector<double>>> tangents(
        2, std::vector<std::vector<double>>(static_cast<std::size_t>(node_count)));

    for (int iu = 0; iu < order; ++iu) {
        const double u0 = rule.nodes[static_cast<std::size_t>(iu)];
        const std::vector<double> u{u0}, up{u0 + h}, um{u0 - h};
        const auto main = curve(u);
        const auto plus = curve(up);
        const auto minus = curve(um);

        for (int js = 0; js < order; ++js) {
            const double t = times[static_cast<std::size_t>(js)];
            const std::vector<double>& x = main[static_cast<std::size_t>(js)];
            const std::size_t flat = static_cast<std::size_t>(iu) * static_cast<std::size_t>(order) +
                                     static_cast<std::size_t>(js);

            std::vector<double> point;
            point.reserve(static_cast<std::size_t>(n) + 1);
            point.push_back(t);
            point.insert(point.end(), x.begin(), x.end());
            points[flat] = std::move(point);

            // Axis 0 = u: central difference across the stencil curves.
            std::vector<double> tu;
            tu.reserve(static_cast<std::size_t>(n) + 1);
            tu.push_back(0.0);
            for (int i = 0; i < n; ++i)
                tu.push_back((plus[static_cast<std::size_t>(js)][static_cast<std::size_t>(i)] -
                              minus[static_cast<std::size_t>(js)][static_cast<std::size_t>(i)]) /
                             (2 * h));
            tangents[0][flat] = std::move(tu);

            // Axis 1 = s: analytic time tangent (t1−t0)·(1, v(t, x)).
            const std::vector<double> v = dyn.velocity_at(t, x);
            std::vector<double> ts;
            ts.reserve(static_cast<std::size_t>(n) + 1);
            ts.push_back(t1 - t0);
            for (int i = 0; i < n; ++i) ts.push_back((t1 - t0) * v[static_cast<std::size_t>(i)]);
            tangents[1][flat] = std::move(ts);
        }
    }

    return Chain::grid(dyn.space(), 2, order, false, std::move(points), std::move(tangents));
}

}  // namespace vortex
