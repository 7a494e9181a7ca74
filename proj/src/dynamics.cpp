#include "liqvap/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace liqvap {

// ---------------------------------------------------------------------------
// Pressure schedule
// ---------------------------------------------------------------------------

PressureSchedule PressureSchedule::constant(double p) {
    if (!(p > 0.0))
        throw InvalidParams("schedule pressure must be > 0");
    PressureSchedule s;
    s.knots_ = {{0.0, p}};
    return s;
}

PressureSchedule PressureSchedule::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    if (knots.empty())
        throw InvalidParams("schedule needs at least one knot");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].second > 0.0))
            throw InvalidParams("schedule pressures must be > 0");
        if (i > 0 && !(knots[i].first > knots[i - 1].first))
            throw InvalidParams("schedule times must be strictly increasing");
    }
    PressureSchedule s;
    s.knots_ = std::move(knots);
    return s;
}

double PressureSchedule::pressure(double t) const {
    if (t <= knots_.front().first)
        return knots_.front().second;
    if (t >= knots_.back().first)
        return knots_.back().second;
    auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double v, const auto& k) { return v < k.first; });
    auto lo = hi - 1;
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

double PressureSchedule::rate(double t) const {
    if (t < knots_.front().first || t >= knots_.back().first)
        return 0.0;
    auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double v, const auto& k) { return v < k.first; });
    auto lo = hi - 1;
    return (hi->second - lo->second) / (hi->first - lo->first);
}

double PressureSchedule::next_breakpoint(double t) const {
    for (const auto& k : knots_)
        if (k.first > t)
            return k.first;
    return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Embedded Dormand-Prince 5(4) with PI step control
// ---------------------------------------------------------------------------

namespace {

template <int N>
using Vec = std::array<double, N>;

// rhs(t, y, dy) -> false when a stage lands outside the admissible set (the
// step is then rejected and retried smaller). on_accept(t, y) runs after each
// accepted step; admissible(y) guards the accepted state itself.
template <int N, class Rhs, class Admissible, class OnAccept>
std::pair<double, Vec<N>> integrate_dopri5(Rhs&& rhs, Admissible&& admissible, Vec<N> y, double t0,
                                           double t_end, const StepControl& ctrl,
                                           const PressureSchedule& sched, std::size_t& accepted,
                                           std::size_t& rejected, OnAccept&& on_accept) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    double t = t0;
    double dt = std::clamp(ctrl.dt_init, ctrl.dt_min, ctrl.dt_max);
    double err_prev = 1.0;

    on_accept(t, y);

    Vec<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    while (t < t_end * (1.0 - 1e-15) || t_end - t > ctrl.dt_min) {
        dt = std::min(dt, t_end - t);
        const double bp = sched.next_breakpoint(t + 1e-13 * (1.0 + std::abs(t)));
        if (bp - t > ctrl.dt_min)
            dt = std::min(dt, bp - t);

        bool ok = rhs(t, y, k1);
        auto stage = [&](double c, const Vec<N>& yt, Vec<N>& k) { return ok && rhs(t + c * dt, yt, k); };

        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + dt * a21 * k1[i];
        ok = stage(c2, ytmp, k2);
        if (ok) for (int i = 0; i < N; ++i) ytmp[i] = y[i] + dt * (a31 * k1[i] + a32 * k2[i]);
        ok = stage(c3, ytmp, k3);
        if (ok) for (int i = 0; i < N; ++i) ytmp[i] = y[i] + dt * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        ok = stage(c4, ytmp, k4);
        if (ok) for (int i = 0; i < N; ++i)
                ytmp[i] = y[i] + dt * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        ok = stage(c5, ytmp, k5);
        if (ok) for (int i = 0; i < N; ++i)
                ytmp[i] = y[i] + dt * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        ok = stage(1.0, ytmp, k6);
        if (ok) {
            for (int i = 0; i < N; ++i)
                ynew[i] = y[i] + dt * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            ok = rhs(t + dt, ynew, k7);
        }

        double err = std::numeric_limits<double>::infinity();
        if (ok) {
            double acc = 0.0;
            for (int i = 0; i < N; ++i) {
                const double e = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                const double sc = ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                acc += (e / sc) * (e / sc);
            }
            err = std::sqrt(acc / N);
        }

        if (err <= 1.0) {
            t += dt;
            y = ynew;
            if (!admissible(y))
                throw DomainError("integrator state left the admissible set at t = " + std::to_string(t));
            ++accepted;
            on_accept(t, y);
            const double e = std::max(err, 1e-30);
            double fac = 0.9 * std::pow(e, -0.14) * std::pow(std::max(err_prev, 1e-30), 0.08);
            fac = std::clamp(fac, 0.2, 5.0);
            dt = std::clamp(dt * fac, ctrl.dt_min, ctrl.dt_max);
            err_prev = e;
        } else {
            ++rejected;
            const double fac = std::isfinite(err) ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.25;
            dt *= fac;
            if (dt < ctrl.dt_min)
                throw StepFailure("step size underflow at t = " + std::to_string(t));
        }
        if (t >= t_end)
            break;
    }
    return {t, y};
}

} // namespace

// ---------------------------------------------------------------------------
// Homogeneous relaxation
// ---------------------------------------------------------------------------

Trajectory relax_homogeneous(const PotentialModel& m, double phi0, double theta,
                             const PressureSchedule& schedule, double t_end,
                             const StepControl& ctrl) {
    if (!phi_admissible(m, phi0))
        throw DomainError("initial phi outside the admissible domain");
    if (!(t_end > 0.0))
        throw InvalidParams("t_end must be > 0");
    const double tau = m.params.tau;

    Trajectory traj;
    traj.tau = tau;
    traj.abs_tol = ctrl.abs_tol;
    traj.rel_tol = ctrl.rel_tol;

    // State: (phi, w) with w the integrated power nu pdot - tau phidot^2.
    auto rhs = [&](double t, const Vec<2>& y, Vec<2>& dy) {
        if (!phi_admissible(m, y[0]))
            return false;
        const double p = schedule.pressure(t);
        const PotentialEval ev = potential_eval(m, p, theta, y[0]);
        const double phidot = -ev.f_phi / tau;
        dy[0] = phidot;
        dy[1] = ev.f_p * schedule.rate(t) - tau * phidot * phidot;
        return true;
    };
    auto admissible = [&](const Vec<2>& y) { return phi_admissible(m, y[0]); };

    long count = -1;
    double f_prev = 0.0, w_prev = 0.0;
    auto record_sample = [&](double t, const Vec<2>& y, bool first) {
        const double p = schedule.pressure(t);
        const PotentialEval ev = potential_eval(m, p, theta, y[0]);
        const double phidot = -ev.f_phi / tau;
        TrajectorySample s{};
        s.t = t;
        s.phi = y[0];
        s.p = p;
        s.nu = ev.f_p;
        s.f = ev.f;
        s.dissipation = tau * phidot * phidot;
        s.balance_residual = first ? 0.0 : (ev.f - f_prev) - (y[1] - w_prev);
        if (!(s.nu > 0.0))
            throw NonPositiveVolume("trajectory volume " + std::to_string(s.nu) + " at t = " +
                                    std::to_string(t));
        f_prev = ev.f;
        w_prev = y[1];
        traj.samples.push_back(s);
    };
    auto record = [&](double t, const Vec<2>& y) {
        ++count;
        if (count % ctrl.record_every == 0)
            record_sample(t, y, count == 0);
    };

    const auto [tf, yf] = integrate_dopri5<2>(rhs, admissible, Vec<2>{phi0, 0.0}, 0.0, t_end,
                                              ctrl, schedule, traj.steps_accepted,
                                              traj.steps_rejected, record);
    if (traj.samples.empty() || traj.samples.back().t != tf)
        record_sample(tf, yf, traj.samples.empty());
    return traj;
}

Trajectory relax_thermal_homogeneous(const PotentialModel& m, double phi0, double theta0,
                                     const PressureSchedule& schedule, double r_supply,
                                     double t_end, const StepControl& ctrl) {
    if (!phi_admissible(m, phi0))
        throw DomainError("initial phi outside the admissible domain");
    if (!(theta0 > 0.0))
        throw InvalidParams("theta0 must be > 0");
    if (!(t_end > 0.0))
        throw InvalidParams("t_end must be > 0");
    const double tau = m.params.tau;

    Trajectory traj;
    traj.thermal = true;
    traj.tau = tau;
    traj.r_supply = r_supply;
    traj.abs_tol = ctrl.abs_tol;
    traj.rel_tol = ctrl.rel_tol;

    // State: (phi, theta, s) with s the integrated (r + dissipation) / theta.
    auto rhs = [&](double t, const Vec<3>& y, Vec<3>& dy) {
        if (!phi_admissible(m, y[0]) || !(y[1] > 0.0))
            return false;
        const double p = schedule.pressure(t);
        const PotentialEval ev = potential_eval(m, p, y[1], y[0]);
        const double heat_cap = -y[1] * ev.f_thetatheta; // theta * eta_theta
        if (std::abs(heat_cap) < 1e-12)
            throw SingularHeatCapacity("theta * eta_theta = " + std::to_string(heat_cap) +
                                       " at t = " + std::to_string(t));
        const double phidot = -ev.f_phi / tau;
        const double source = r_supply + tau * phidot * phidot;
        dy[0] = phidot;
        dy[1] = (source + y[1] * (ev.f_ptheta * schedule.rate(t) + ev.f_thetaphi * phidot)) / heat_cap;
        dy[2] = source / y[1];
        return true;
    };
    auto admissible = [&](const Vec<3>& y) { return phi_admissible(m, y[0]) && y[1] > 0.0; };

    long count = -1;
    double eta_prev = 0.0, s_prev = 0.0;
    auto record_sample = [&](double t, const Vec<3>& y, bool first) {
        const double p = schedule.pressure(t);
        const PotentialEval ev = potential_eval(m, p, y[1], y[0]);
        const double phidot = -ev.f_phi / tau;
        TrajectorySample s{};
        s.t = t;
        s.phi = y[0];
        s.p = p;
        s.nu = ev.f_p;
        s.f = ev.f;
        s.dissipation = tau * phidot * phidot;
        s.theta = y[1];
        s.eta = -ev.f_theta;
        s.balance_residual = first ? 0.0 : (s.eta - eta_prev) - (y[2] - s_prev);
        if (!(s.nu > 0.0))
            throw NonPositiveVolume("trajectory volume " + std::to_string(s.nu) + " at t = " +
                                    std::to_string(t));
        eta_prev = s.eta;
        s_prev = y[2];
        traj.samples.push_back(s);
    };
    auto record = [&](double t, const Vec<3>& y) {
        ++count;
        if (count % ctrl.record_every == 0)
            record_sample(t, y, count == 0);
    };

    const auto [tf, yf] = integrate_dopri5<3>(rhs, admissible, Vec<3>{phi0, theta0, 0.0}, 0.0,
                                              t_end, ctrl, schedule, traj.steps_accepted,
                                              traj.steps_rejected, record);
    if (traj.samples.empty() || traj.samples.back().t != tf)
        record_sample(tf, yf, traj.samples.empty());
    return traj;
}

// ---------------------------------------------------------------------------
// 1-D gradient flow
// ---------------------------------------------------------------------------

namespace {

// phi-only view of the potential at frozen (p, theta); the per-node inner
// loops of the PDE live on this instead of the full partial bundle.
struct FrozenPotential {
    PotentialKind kind;
    double a, u, h, f0;

    double f(double phi) const {
        if (kind == PotentialKind::Logarithmic)
            return f0 - a * (u + 1.0) * std::log1p(-phi * phi) - a * phi * phi - 2.0 * h * phi;
        return f0 + double_well(phi, u) + h * odd_coupling(phi, u);
    }
    double f_phi(double phi) const {
        if (kind == PotentialKind::Logarithmic)
            return 2.0 * a * (u + 1.0) * phi / (1.0 - phi * phi) - 2.0 * a * phi - 2.0 * h;
        return double_well_dx(phi, u) + h * odd_coupling_dx(phi, u);
    }
};

FrozenPotential freeze(const PotentialModel& m, double p, double theta) {
    return FrozenPotential{m.kind, m.params.a, u_schedule(m, theta), h_field(m, p, theta),
                           background_f0(m, p, theta).f0};
}

struct PdeGrid {
    std::size_t n;
    double dx, kappa, tau;
    BoundaryKind bc;
    double phiL, phiR;
    bool weighted;
    const std::vector<double>* rho;      // node weights (weighted mode)
    const std::vector<double>* rho_half; // cell weights (weighted mode)
};

// Fixed-size blocks keep the per-step reductions deterministic: partials are
// formed in index order per block and combined in block order, so results do
// not depend on Exec or the thread count.
constexpr std::size_t kBlock = 4096;

inline std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

template <class F>
void for_blocks(Exec exec, std::size_t n, F&& body) {
    parallel_for(exec, block_count(n), [&](std::size_t b) {
        body(b, b * kBlock, std::min(n, b * kBlock + kBlock));
    });
}

// One explicit step: fills phi_new and returns max |dphi/dt|.
double explicit_step(const FrozenPotential& fp, const PdeGrid& g, std::span<const double> phi,
                     std::span<double> phi_new, std::span<double> block_max, double dt,
                     Exec exec) {
    const std::size_t n = g.n;
    const double idx2 = 1.0 / (g.dx * g.dx);
    for_blocks(exec, n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            double diff;
            if (!g.weighted) {
                double lap;
                if (i == 0)
                    lap = 2.0 * (phi[1] - phi[0]) * idx2;
                else if (i == n - 1)
                    lap = 2.0 * (phi[n - 2] - phi[n - 1]) * idx2;
                else
                    lap = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * idx2;
                diff = g.kappa * lap;
            } else {
                const std::vector<double>& w = *g.rho_half;
                double div;
                if (i == 0)
                    div = 2.0 * w[0] * (phi[1] - phi[0]) * idx2;
                else if (i == n - 1)
                    div = 2.0 * w[n - 2] * (phi[n - 2] - phi[n - 1]) * idx2;
                else
                    div = (w[i] * (phi[i + 1] - phi[i]) - w[i - 1] * (phi[i] - phi[i - 1])) * idx2;
                diff = g.kappa * div / (*g.rho)[i];
            }
            double r = (diff - fp.f_phi(phi[i])) / g.tau;
            if (g.bc == BoundaryKind::Dirichlet && (i == 0 || i == n - 1))
                r = 0.0;
            m = std::max(m, std::abs(r));
            phi_new[i] = phi[i] + dt * r;
        }
        block_max[b] = m;
    });
    double rmax = 0.0;
    for (std::size_t b = 0; b < block_count(n); ++b)
        rmax = std::max(rmax, block_max[b]);
    return rmax;
}

// Semi-implicit step: the diffusion is folded into a tridiagonal solve, the
// local force stays explicit. Serial by construction (back substitution).
double semi_implicit_step(const FrozenPotential& fp, const PdeGrid& g, std::span<const double> phi,
                          std::span<double> phi_new, double dt, std::vector<double>& cp,
                          std::vector<double>& dp, Exec exec) {
    const std::size_t n = g.n;
    const double r = dt * g.kappa / (g.tau * g.dx * g.dx);

    parallel_for(exec, n, [&](std::size_t i) { dp[i] = phi[i] - dt / g.tau * fp.f_phi(phi[i]); });

    double b0 = 1.0 + 2.0 * r, cu0 = -2.0 * r;
    if (g.bc == BoundaryKind::Dirichlet) {
        b0 = 1.0;
        cu0 = 0.0;
        dp[0] = g.phiL;
        dp[n - 1] = g.phiR;
    }
    cp[0] = cu0 / b0;
    dp[0] = dp[0] / b0;
    for (std::size_t i = 1; i < n; ++i) {
        double lo = -r, di = 1.0 + 2.0 * r, up = -r;
        if (i == n - 1) {
            if (g.bc == BoundaryKind::Dirichlet) {
                lo = 0.0;
                di = 1.0;
            } else {
                lo = -2.0 * r;
            }
            up = 0.0;
        }
        const double den = di - lo * cp[i - 1];
        cp[i] = up / den;
        dp[i] = (dp[i] - lo * dp[i - 1]) / den;
    }
    phi_new[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        phi_new[i] = dp[i] - cp[i] * phi_new[i + 1];
    double rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        rmax = std::max(rmax, std::abs(phi_new[i] - phi[i]) / dt);
    return rmax;
}

// Energy of the profile, with an optional admissibility scan folded into the
// same pass. Returns the first offending node or -1.
struct EnergyScan {
    double energy;
    std::ptrdiff_t bad_node;
};

EnergyScan profile_energy(const FrozenPotential& fp, const PdeGrid& g, std::span<const double> phi,
                          std::span<double> block_sum, std::span<std::ptrdiff_t> block_bad,
                          double domain_cap, Exec exec) {
    const std::size_t n = g.n;
    const double half_k = 0.5 * g.kappa / g.dx;
    for_blocks(exec, n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        std::ptrdiff_t bad = -1;
        for (std::size_t i = lo; i < hi; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            double c;
            if (!g.weighted) {
                c = g.dx * w * fp.f(phi[i]);
                if (i + 1 < n) {
                    const double d = phi[i + 1] - phi[i];
                    c += half_k * d * d;
                }
            } else {
                c = g.dx * w * (*g.rho)[i] * fp.f(phi[i]);
                if (i + 1 < n) {
                    const double d = phi[i + 1] - phi[i];
                    c += half_k * (*g.rho_half)[i] * d * d;
                }
            }
            acc += c;
            if (bad < 0 && std::abs(phi[i]) >= domain_cap)
                bad = static_cast<std::ptrdiff_t>(i);
        }
        block_sum[b] = acc;
        block_bad[b] = bad;
    });
    EnergyScan out{0.0, -1};
    for (std::size_t b = 0; b < block_count(n); ++b) {
        out.energy += block_sum[b];
        if (out.bad_node < 0 && block_bad[b] >= 0)
            out.bad_node = block_bad[b];
    }
    return out;
}

} // namespace

PdeResult run_pde1d(const PotentialModel& m, const Profile1D& initial, double t_end,
                    const PdeOptions& opts) {
    const std::size_t n = initial.phi.size();
    if (n < 3)
        throw InvalidParams("profile needs at least 3 nodes");
    if (!(initial.dx > 0.0))
        throw InvalidParams("dx must be > 0");
    if (!(t_end > 0.0))
        throw InvalidParams("t_end must be > 0");

    const double tau = m.params.tau;
    const double kappa = m.params.kappa;

    double dt = opts.dt;
    if (dt == 0.0) {
        if (!(kappa > 0.0))
            throw InvalidParams("dt must be given explicitly when kappa = 0");
        dt = 0.4 * initial.dx * initial.dx * tau / kappa;
    }
    if (!(dt > 0.0))
        throw InvalidParams("dt must be > 0");
    if (opts.scheme == PdeScheme::Explicit && kappa > 0.0) {
        const double bound = 0.5 * initial.dx * initial.dx * tau / kappa;
        if (dt > bound * (1.0 + 1e-9))
            throw StabilityViolation("dt = " + std::to_string(dt) +
                                     " exceeds the explicit bound " + std::to_string(bound));
    }
    if (opts.scheme == PdeScheme::SemiImplicit && initial.density == DensityMode::FrozenRhoField)
        throw InvalidParams("the semi-implicit scheme supports ConstantRho only");

    PdeResult res;
    res.profile = initial;
    std::vector<double>& phi = res.profile.phi;
    for (double v : phi)
        if (!phi_admissible(m, v))
            throw DomainError("initial profile outside the admissible domain");
    if (initial.bc == BoundaryKind::Dirichlet) {
        phi.front() = initial.phi_left;
        phi.back() = initial.phi_right;
    }

    const FrozenPotential fp = freeze(m, initial.p, initial.theta);

    std::vector<double> rho, rho_half;
    const bool weighted = initial.density == DensityMode::FrozenRhoField;
    if (weighted) {
        rho = initial.rho;
        if (rho.empty()) {
            rho.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double nu = potential_eval(m, initial.p, initial.theta, phi[i]).f_p;
                if (!(nu > 0.0))
                    throw NonPositiveVolume("frozen density undefined: nu = " + std::to_string(nu) +
                                            " at node " + std::to_string(i));
                rho[i] = 1.0 / nu;
            }
        }
        if (rho.size() != n)
            throw InvalidParams("frozen density weights do not match the grid");
        rho_half.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            rho_half[i] = 0.5 * (rho[i] + rho[i + 1]);
        res.profile.rho = rho;
    }

    PdeGrid g{};
    g.n = n;
    g.dx = initial.dx;
    g.kappa = kappa;
    g.tau = tau;
    g.bc = initial.bc;
    g.phiL = initial.phi_left;
    g.phiR = initial.phi_right;
    g.weighted = weighted;
    g.rho = &rho;
    g.rho_half = &rho_half;

    const std::size_t nb = block_count(n);
    std::vector<double> phi_new(n), block_sum(nb), block_max(nb), cp, dp;
    std::vector<std::ptrdiff_t> block_bad(nb);
    if (opts.scheme == PdeScheme::SemiImplicit) {
        cp.resize(n);
        dp.resize(n);
    }
    const double domain_cap = m.kind == PotentialKind::Logarithmic
                                  ? 1.0 - 1e-10
                                  : std::numeric_limits<double>::infinity();

    double energy =
        profile_energy(fp, g, phi, block_sum, block_bad, domain_cap, opts.exec).energy;
    double t = 0.0;
    res.times.push_back(t);
    res.energies.push_back(energy);

    std::size_t since_record = 0;
    while (t < t_end * (1.0 - 1e-15)) {
        const double step_dt = std::min(dt, t_end - t);
        const double rmax =
            opts.scheme == PdeScheme::Explicit
                ? explicit_step(fp, g, phi, phi_new, block_max, step_dt, opts.exec)
                : semi_implicit_step(fp, g, phi, phi_new, step_dt, cp, dp, opts.exec);

        phi.swap(phi_new);
        t += step_dt;
        ++res.steps;
        ++since_record;
        res.final_rate_inf = rmax;

        const EnergyScan scan =
            profile_energy(fp, g, phi, block_sum, block_bad, domain_cap, opts.exec);
        if (scan.bad_node >= 0)
            throw DomainError("phi left (-1, 1) at node " + std::to_string(scan.bad_node) +
                              ", t = " + std::to_string(t));
        if (scan.energy - energy > 1e-12 * std::abs(energy)) {
            ++res.energy_increases;
            res.max_energy_increase = std::max(res.max_energy_increase, scan.energy - energy);
        }
        energy = scan.energy;

        const bool steady = opts.steady_tol > 0.0 && rmax < opts.steady_tol;
        const bool done = steady || !(t < t_end * (1.0 - 1e-15));
        if (since_record >= static_cast<std::size_t>(std::max(1, opts.record_every)) || done) {
            res.times.push_back(t);
            res.energies.push_back(energy);
            since_record = 0;
        }
        if (steady)
            break;
    }
    return res;
}

double discrete_free_energy(const PotentialModel& m, const Profile1D& profile) {
    const std::size_t n = profile.phi.size();
    if (n < 2)
        throw InvalidParams("profile needs at least 2 nodes");
    const FrozenPotential fp = freeze(m, profile.p, profile.theta);

    const bool weighted = profile.density == DensityMode::FrozenRhoField && !profile.rho.empty();
    std::vector<double> rho_half;
    if (weighted) {
        if (profile.rho.size() != n)
            throw InvalidParams("frozen density weights do not match the grid");
        rho_half.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            rho_half[i] = 0.5 * (profile.rho[i] + profile.rho[i + 1]);
    }
    PdeGrid g{};
    g.n = n;
    g.dx = profile.dx;
    g.kappa = m.params.kappa;
    g.tau = m.params.tau;
    g.bc = profile.bc;
    g.weighted = weighted;
    g.rho = &profile.rho;
    g.rho_half = &rho_half;

    const std::size_t nb = block_count(n);
    std::vector<double> block_sum(nb);
    std::vector<std::ptrdiff_t> block_bad(nb);
    return profile_energy(fp, g, profile.phi, block_sum, block_bad,
                          std::numeric_limits<double>::infinity(), Exec::Serial)
        .energy;
}

} // namespace liqvap
