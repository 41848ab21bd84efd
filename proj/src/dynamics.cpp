#include "vortex/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace vortex {

namespace {

std::string point_string(double t, std::span<const double> x) {
    std::ostringstream os;
    os << "(t=" << t;
    for (double v : x) os << ", " << v;
    os << ")";
    return os.str();
}

// Contraction-entry table for i_v a restricted to `rows`: for each row J and
// column j ∉ J the coefficient a_{J∪{j}} enters with the slot sign.
template <typename Emit>
void build_contraction(const Form& a, const std::vector<IndexTuple>& rows, Emit&& emit) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const IndexTuple& row = rows[r];
        for (int j = 1; j <= a.space().dim(); ++j) {
            if (std::binary_search(row.begin(), row.end(), j)) continue;
            const auto pos = std::lower_bound(row.begin(), row.end(), j) - row.begin();
            IndexTuple key = row;
            key.insert(key.begin() + pos, j);
            const Expression coeff = a.coefficient(key);
            if (coeff.is_zero()) continue;
            emit(static_cast<int>(r), j - 1, pos % 2 == 0 ? 1.0 : -1.0, coeff);
        }
    }
}

}  // namespace

VortexDynamics::VortexDynamics(const SigmaAnalysis& analysis, bool debug_check)
    : space_(analysis.sigma.space()), debug_check_(debug_check) {
    if (!analysis.report.well_posed)
        throw std::invalid_argument(
            "VortexDynamics: analysis verdict is ill-posed; refusing to build dynamics");

    const Form& R_hat = analysis.dsigma_parts.r_hat;
    const Form& S_hat = analysis.dsigma_parts.s_hat;
    const int n = space_.dim();
    const int p = analysis.sigma.degree();

    // Rows of the velocity system: increasing p-tuples over 1..n.  Well-posed
    // means C(n,p) = n, so the system is square by construction.
    const std::vector<IndexTuple> rows = detail::increasing_tuples(1, n, p);
    if (static_cast<int>(rows.size()) != n)
        throw std::invalid_argument("VortexDynamics: contraction matrix is not square");

    auto compile = [this](const Expression& e) {
        tape_.emplace_back(e);
        return static_cast<int>(tape_.size()) - 1;
    };

    build_contraction(R_hat, rows, [&](int row, int col, double sign, const Expression& c) {
        matrix_entries_.push_back(Entry{row, col, sign, compile(c)});
    });

    rhs_coeffs_.assign(rows.size(), -1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Expression coeff = S_hat.coefficient(rows[r]);
        if (!coeff.is_zero()) rhs_coeffs_[r] = compile(coeff);
    }

    if (debug_check_) {
        const std::vector<IndexTuple> check_rows = detail::increasing_tuples(1, n, p - 1);
        check_rows_ = static_cast<int>(check_rows.size());
        build_contraction(S_hat, check_rows,
                          [&](int row, int col, double sign, const Expression& c) {
                              check_entries_.push_back(Entry{row, col, sign, compile(c)});
                          });
    }
}

std::vector<double> VortexDynamics::velocity_at(double t, std::span<const double> x) const {
    const int n = space_.dim();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("velocity_at: x must have n components");

    std::vector<double> point(static_cast<std::size_t>(n) + 1);
    point[0] = t;
    std::copy(x.begin(), x.end(), point.begin() + 1);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const Entry& e : matrix_entries_)
        A(e.row, e.col) += e.sign * tape_[static_cast<std::size_t>(e.coeff)].evaluate(point);

    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < n; ++r)
        if (rhs_coeffs_[static_cast<std::size_t>(r)] >= 0)
            b(r) = -tape_[static_cast<std::size_t>(rhs_coeffs_[static_cast<std::size_t>(r)])]
                        .evaluate(point);

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond >= 1e-12))  // catches NaN as well
        throw NumericalError("velocity solve: contraction matrix ill-conditioned at " +
                                 point_string(t, x) + " (rcond estimate " +
                                 std::to_string(rcond) + ")",
                             point, rcond);
    Eigen::VectorXd v = lu.solve(b);
    if (!v.allFinite())
        throw NumericalError("velocity solve: non-finite solution at " + point_string(t, x),
                             point, rcond);

    if (debug_check_) {
        // i_v Ŝ must vanish identically for solutions of i_v R̂ = −Ŝ.
        std::vector<double> residual(static_cast<std::size_t>(check_rows_), 0.0);
        double scale = 1.0;
        for (const Entry& e : check_entries_) {
            const double c = tape_[static_cast<std::size_t>(e.coeff)].evaluate(point);
            scale = std::max(scale, std::abs(c));
            residual[static_cast<std::size_t>(e.row)] += e.sign * c * v(e.col);
        }
        scale *= std::max(1.0, v.cwiseAbs().maxCoeff());
        for (double r : residual)
            if (std::abs(r) > 1e-9 * scale)
                throw NumericalError("velocity solve: i_v S-hat residual " + std::to_string(r) +
                                         " exceeds tolerance at " + point_string(t, x),
                                     point, rcond);
    }

    return std::vector<double>(v.data(), v.data() + n);
}

namespace {

struct DenseSegment {
    double t0, t1;
    const std::vector<double>&y0, &y1, &f0, &f1;
};

// Cubic Hermite interpolation on one accepted step.
std::vector<double> hermite(const DenseSegment& seg, double t) {
    const double h = seg.t1 - seg.t0;
    const double s = (t - seg.t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    std::vector<double> out(seg.y0.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = h00 * seg.y0[i] + h10 * h * seg.f0[i] + h01 * seg.y1[i] + h11 * h * seg.f1[i];
    return out;
}

// Classic Fehlberg 4(5) tableau.
constexpr double kC[6] = {0.0, 1.0 / 4, 3.0 / 8, 12.0 / 13, 1.0, 1.0 / 2};
constexpr double kA[6][5] = {
    {},
    {1.0 / 4},
    {3.0 / 32, 9.0 / 32},
    {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197},
    {439.0 / 216, -8.0, 3680.0 / 513, -845.0 / 4104},
    {-8.0 / 27, 2.0, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40},
};
constexpr double kB5[6] = {16.0 / 135, 0.0, 6656.0 / 12825, 28561.0 / 56430, -9.0 / 50, 2.0 / 55};
constexpr double kB4[6] = {25.0 / 216, 0.0, 1408.0 / 2565, 2197.0 / 4104, -1.0 / 5, 0.0};

}  // namespace

Trajectory integrate_trajectory(const VortexDynamics& dyn, std::span<const double> x0,
                                double t0, double t1, const IntegratorOptions& opts) {
    const int n = dyn.n();
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("integrate_trajectory: x0 must have n components");

    Trajectory traj;
    traj.abs_tol = opts.abs_tol;
    traj.rel_tol = opts.rel_tol;

    std::vector<double> y(x0.begin(), x0.end());

    if (t0 == t1) {
        traj.samples.push_back({t0, y});
        return traj;
    }

    // Requested output times, sorted along the direction of integration.
    const double dir = t1 > t0 ? 1.0 : -1.0;
    std::vector<double> wanted = opts.sample_times;
    if (wanted.empty() && opts.sample_count > 0) {
        for (int i = 0; i <= opts.sample_count; ++i)
            wanted.push_back(t0 + (t1 - t0) * static_cast<double>(i) /
                                      static_cast<double>(opts.sample_count));
    }
    const bool emit_steps = wanted.empty();
    std::sort(wanted.begin(), wanted.end(),
              [dir](double a, double b) { return dir * a < dir * b; });
    for (double w : wanted)
        if (dir * (w - t0) < -1e-15 || dir * (w - t1) > 1e-15)
            throw std::invalid_argument("integrate_trajectory: sample time outside [t0, t1]");
    std::size_t next_wanted = 0;

    auto emit = [&](double t, const std::vector<double>& x) {
        traj.samples.push_back({t, x});
    };
    // The requested samples inside (t_prev, t_cur] via dense output.
    auto emit_range = [&](const DenseSegment& seg) {
        while (next_wanted < wanted.size()) {
            const double w = wanted[next_wanted];
            if (dir * (w - seg.t1) > 1e-15) break;
            if (std::abs(w - seg.t0) < 1e-15 && !traj.samples.empty() &&
                traj.samples.back().t == seg.t0) {
                ++next_wanted;  // already emitted as the previous endpoint
                continue;
            }
            if (std::abs(w - seg.t1) < 1e-15)
                emit(w, seg.y1);
            else
                emit(w, hermite(seg, w));
            ++next_wanted;
        }
    };

    auto fail = [&](const std::string& why, double t_reached, const std::vector<double>& y_last) {
        traj.ok = false;
        traj.failure = why;
        if (traj.samples.empty() || traj.samples.back().t != t_reached)
            traj.samples.push_back({t_reached, y_last});
        if (dir < 0) std::reverse(traj.samples.begin(), traj.samples.end());
        return traj;
    };

    double t = t0;
    std::vector<double> f;
    try {
        f = dyn.velocity_at(t, y);
    } catch (const NumericalError& e) {
        return fail(e.what(), t, y);
    } catch (const EvalError& e) {
        return fail(e.what(), t, y);
    }

    if (emit_steps || (next_wanted < wanted.size() && std::abs(wanted[0] - t0) < 1e-15)) {
        emit(t0, y);
        if (!emit_steps) ++next_wanted;
    }

    const double span = std::abs(t1 - t0);
    const double min_step = 1e-14 * span;
    double h = opts.method == IntegrationMethod::RK4Fixed
                   ? std::abs(opts.fixed_step)
                   : (opts.initial_step > 0.0 ? opts.initial_step : span / 100.0);
    h *= dir;

    std::vector<double> k[6], y_stage(static_cast<std::size_t>(n)),
        y_new(static_cast<std::size_t>(n)), y4(static_cast<std::size_t>(n));

    for (long step = 0; step < opts.max_steps; ++step) {
        if (dir * (t - t1) >= 0) break;
        // Land exactly on t1.
        double h_used = h;
        bool final_step = false;
        if (dir * (t + h - t1) >= 0) {
            h_used = t1 - t;
            final_step = true;
        }

        std::vector<double> f_new;
        try {
            if (opts.method == IntegrationMethod::RK4Fixed) {
                const std::vector<double>& k1 = f;
                for (int i = 0; i < n; ++i) y_stage[i] = y[i] + h_used / 2 * k1[i];
                std::vector<double> k2 = dyn.velocity_at(t + h_used / 2, y_stage);
                for (int i = 0; i < n; ++i) y_stage[i] = y[i] + h_used / 2 * k2[i];
                std::vector<double> k3 = dyn.velocity_at(t + h_used / 2, y_stage);
                for (int i = 0; i < n; ++i) y_stage[i] = y[i] + h_used * k3[i];
                std::vector<double> k4 = dyn.velocity_at(t + h_used, y_stage);
                for (int i = 0; i < n; ++i)
                    y_new[i] = y[i] + h_used / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            } else {
                k[0] = f;
                for (int s = 1; s < 6; ++s) {
                    for (int i = 0; i < n; ++i) {
                        double acc = 0.0;
                        for (int j = 0; j < s; ++j)
                            acc += kA[s][j] * k[j][static_cast<std::size_t>(i)];
                        y_stage[static_cast<std::size_t>(i)] =
                            y[static_cast<std::size_t>(i)] + h_used * acc;
                    }
                    k[s] = dyn.velocity_at(t + kC[s] * h_used, y_stage);
                }
                double err_sq = 0.0;
                for (int i = 0; i < n; ++i) {
                    double acc5 = 0.0, acc4 = 0.0;
                    for (int s = 0; s < 6; ++s) {
                        acc5 += kB5[s] * k[s][static_cast<std::size_t>(i)];
                        acc4 += kB4[s] * k[s][static_cast<std::size_t>(i)];
                    }
                    y_new[static_cast<std::size_t>(i)] =
                        y[static_cast<std::size_t>(i)] + h_used * acc5;
                    y4[static_cast<std::size_t>(i)] =
                        y[static_cast<std::size_t>(i)] + h_used * acc4;
                    const double scale =
                        opts.abs_tol +
                        opts.rel_tol * std::max(std::abs(y[static_cast<std::size_t>(i)]),
                                                std::abs(y_new[static_cast<std::size_t>(i)]));
                    const double e =
                        (y_new[static_cast<std::size_t>(i)] - y4[static_cast<std::size_t>(i)]) /
                        scale;
                    err_sq += e * e;
                }
                const double err = std::sqrt(err_sq / n);
                const double factor =
                    err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
                if (err > 1.0) {
                    ++traj.steps_rejected;
                    h = h_used * factor;
                    if (std::abs(h) < min_step)
                        return fail("step-size underflow at t=" + std::to_string(t), t, y);
                    continue;
                }
                // Accepted: the 5th-order value propagates; h grows for next time.
                h = h_used * factor;
            }
            const double t_cand = final_step ? t1 : t + h_used;
            f_new = dyn.velocity_at(t_cand, y_new);
        } catch (const NumericalError& e) {
            return fail(e.what(), t, y);
        } catch (const EvalError& e) {
            return fail(e.what(), t, y);
        }

        const double t_new = final_step ? t1 : t + h_used;
        ++traj.steps_accepted;
        DenseSegment seg{t, t_new, y, y_new, f, f_new};
        if (emit_steps)
            emit(t_new, y_new);
        else
            emit_range(seg);
        t = t_new;
        y = y_new;
        f = std::move(f_new);
    }

    if (dir * (t - t1) < 0)
        return fail("maximum step count exceeded at t=" + std::to_string(t), t, y);

    // Numerical endpoint bookkeeping: make sure t1 itself was emitted.
    if (!emit_steps && next_wanted < wanted.size()) {
        while (next_wanted < wanted.size() && std::abs(wanted[next_wanted] - t1) <= 1e-15) {
            if (traj.samples.empty() || traj.samples.back().t != t1) emit(t1, y);
            ++next_wanted;
        }
    }

    if (dir < 0) std::reverse(traj.samples.begin(), traj.samples.end());
    return traj;
}

}  // namespace vortex
