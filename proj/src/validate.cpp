#include "liqvap/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace liqvap {

namespace {

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

// First derivative by central difference, or by the second-order one-sided
// stencil in direction dir when the point sits at a kink or a domain edge.
template <class F>
double fd1(F&& f, double x, double h, int dir) {
    if (dir == 0)
        return (f(x + h) - f(x - h)) / (2.0 * h);
    const double d = dir * h;
    return (-3.0 * f(x) + 4.0 * f(x + d) - f(x + 2.0 * d)) / (2.0 * d);
}

double fd_step(double x) { return 1e-6 * (std::abs(x) + 1.0); }

std::string point_label(double p, double theta, double phi, const char* partial) {
    std::ostringstream os;
    os << partial << " at (p=" << p << ", theta=" << theta << ", phi=" << phi << ")";
    return os.str();
}

} // namespace

AuditReport check_derivatives(const PotentialModel& m, int n_samples, std::uint64_t seed, Exec exec) {
    AuditReport rep;
    rep.check = "check_derivatives";
    rep.tolerance = 1e-6;
    if (n_samples < 1) {
        rep.grid = "empty";
        rep.pass = true;
        return rep;
    }

    const ModelParams& ps = m.params;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> up(0.3 * ps.p_c, 3.0 * ps.p_c);
    std::uniform_real_distribution<double> ut(0.4 * ps.theta_c, 1.6 * ps.theta_c);
    std::uniform_real_distribution<double> uphi_log(-0.95, 0.95);
    std::uniform_real_distribution<double> uphi_q(-1.5, 1.5);

    struct Point {
        double p, theta, phi;
    };
    std::vector<Point> pts(static_cast<std::size_t>(n_samples));
    for (auto& pt : pts) {
        pt.p = up(rng);
        do {
            pt.theta = ut(rng);
        } while (std::abs(pt.theta - ps.theta_c) < 0.02 * ps.theta_c);
        pt.phi = m.kind == PotentialKind::Logarithmic ? uphi_log(rng) : uphi_q(rng);
    }

    struct Worst {
        double abs = 0.0, rel = 0.0;
        std::string label;
    };
    std::vector<Worst> worst(pts.size());

    parallel_for(exec, pts.size(), [&](std::size_t i) {
        const double p = pts[i].p, theta = pts[i].theta, phi = pts[i].phi;
        const PotentialEval ev = potential_eval(m, p, theta, phi);

        const double hp = fd_step(p);
        const double ht = fd_step(theta);
        const double hf = fd_step(phi);

        int phi_dir = 0;
        if (m.kind == PotentialKind::Quartic) {
            const double u = u_schedule(m, theta);
            if (std::abs(std::abs(phi) - u) <= 2.0 * hf) {
                const double s = phi >= 0.0 ? 1.0 : -1.0;
                phi_dir = std::abs(phi) <= u ? static_cast<int>(-s) : static_cast<int>(s);
                if (phi_dir == 0)
                    phi_dir = -1;
            }
        }
        const int theta_dir =
            std::abs(theta - ps.theta_c) <= 2.0 * ht ? (theta >= ps.theta_c ? 1 : -1) : 0;

        auto f_of_p = [&](double x) { return potential_eval(m, x, theta, phi).f; };
        auto f_of_t = [&](double x) { return potential_eval(m, p, x, phi).f; };
        auto f_of_phi = [&](double x) { return potential_eval(m, p, theta, x).f; };
        auto fp_of_p = [&](double x) { return potential_eval(m, x, theta, phi).f_p; };
        auto fp_of_t = [&](double x) { return potential_eval(m, p, x, phi).f_p; };
        auto fp_of_phi = [&](double x) { return potential_eval(m, p, theta, x).f_p; };
        auto ft_of_t = [&](double x) { return potential_eval(m, p, x, phi).f_theta; };
        auto ft_of_phi = [&](double x) { return potential_eval(m, p, theta, x).f_theta; };
        auto fphi_of_phi = [&](double x) { return potential_eval(m, p, theta, x).f_phi; };

        struct Cmp {
            const char* name;
            double analytic, fd;
        };
        const Cmp cmps[] = {
            {"f_p", ev.f_p, fd1(f_of_p, p, hp, 0)},
            {"f_theta", ev.f_theta, fd1(f_of_t, theta, ht, theta_dir)},
            {"f_phi", ev.f_phi, fd1(f_of_phi, phi, hf, phi_dir)},
            {"f_pp", ev.f_pp, fd1(fp_of_p, p, hp, 0)},
            {"f_ptheta", ev.f_ptheta, fd1(fp_of_t, theta, ht, theta_dir)},
            {"f_pphi", ev.f_pphi, fd1(fp_of_phi, phi, hf, phi_dir)},
            {"f_thetatheta", ev.f_thetatheta, fd1(ft_of_t, theta, ht, theta_dir)},
            {"f_thetaphi", ev.f_thetaphi, fd1(ft_of_phi, phi, hf, phi_dir)},
            {"f_phiphi", ev.f_phiphi, fd1(fphi_of_phi, phi, hf, phi_dir)},
            // assembly identity psi + p f_p = Phi, i.e. (f - p f_p) + p f_p = f
            {"psi_identity", (ev.f - p * ev.f_p) + p * ev.f_p, ev.f},
        };
        for (const Cmp& c : cmps) {
            const double ae = std::abs(c.analytic - c.fd);
            const double re = rel_err(c.analytic, c.fd);
            if (re > worst[i].rel) {
                worst[i].rel = re;
                worst[i].abs = ae;
                worst[i].label = point_label(p, theta, phi, c.name);
            }
        }
    });

    rep.n_points = pts.size();
    {
        std::ostringstream os;
        os << n_samples << " random admissible points, seed " << seed;
        rep.grid = os.str();
    }
    for (const auto& w : worst) {
        if (w.rel > rep.max_rel_error) {
            rep.max_rel_error = w.rel;
            rep.max_abs_error = w.abs;
            rep.offending = w.label;
        }
    }
    rep.pass = rep.max_rel_error < rep.tolerance;
    return rep;
}

AuditReport check_gibbs_envelope(const PotentialModel& m, std::span<const double> theta_grid,
                                 std::span<const double> p_grid) {
    AuditReport rep;
    rep.check = "check_gibbs_envelope";
    rep.tolerance = 1e-6;
    {
        std::ostringstream os;
        os << theta_grid.size() << " x " << p_grid.size() << " (theta, p) grid";
        rep.grid = os.str();
    }

    // Equilibrium free energy of the branch nearest to phi_ref, or nothing
    // when the branch has died under the perturbation.
    auto branch_value = [&](double p, double theta, double phi_ref) -> std::optional<double> {
        const std::vector<PhaseState> states = equilibrium_state(m, p, theta);
        const PhaseState* best = nullptr;
        for (const auto& st : states)
            if (!best || std::abs(st.phi - phi_ref) < std::abs(best->phi - phi_ref))
                best = &st;
        if (!best || std::abs(best->phi - phi_ref) > 0.2)
            return std::nullopt;
        return best->gibbs;
    };

    for (double theta : theta_grid) {
        for (double p : p_grid) {
            const std::vector<PhaseState> states = equilibrium_state(m, p, theta);
            for (const auto& st : states) {
                const PotentialEval ev = potential_eval(m, p, theta, st.phi);
                const double hp = fd_step(p);
                const double ht = fd_step(theta);

                const auto pl = branch_value(p - hp, theta, st.phi);
                const auto pr = branch_value(p + hp, theta, st.phi);
                const auto tl = branch_value(p, theta - ht, st.phi);
                const auto tr = branch_value(p, theta + ht, st.phi);
                if (!pl || !pr || !tl || !tr) {
                    ++rep.n_skipped;
                    continue;
                }
                ++rep.n_points;

                const double dphidp = (*pr - *pl) / (2.0 * hp);
                const double dphidt = (*tr - *tl) / (2.0 * ht);
                const struct {
                    const char* name;
                    double analytic, fd;
                } cmps[] = {
                    {"dPhi/dp vs nu", ev.f_p, dphidp},
                    {"dPhi/dtheta vs -eta", ev.f_theta, dphidt},
                };
                for (const auto& c : cmps) {
                    const double re = rel_err(c.analytic, c.fd);
                    if (re > rep.max_rel_error) {
                        rep.max_rel_error = re;
                        rep.max_abs_error = std::abs(c.analytic - c.fd);
                        rep.offending = point_label(p, theta, st.phi, c.name);
                    }
                }
            }
        }
    }
    rep.pass = rep.max_rel_error < rep.tolerance;
    return rep;
}

AuditReport check_dissipation(const Trajectory& traj) {
    AuditReport rep;
    rep.check = "check_dissipation";
    {
        std::ostringstream os;
        os << traj.samples.size() << " trajectory samples"
           << (traj.thermal ? " (thermal)" : " (isothermal)");
        rep.grid = os.str();
    }
    rep.n_points = traj.samples.size();

    double scale = 0.0;
    for (const auto& s : traj.samples)
        scale = std::max(scale, traj.thermal ? std::abs(s.eta) : std::abs(s.f));
    rep.tolerance = 10.0 * (traj.abs_tol + traj.rel_tol * std::max(scale, 1.0));

    bool ok = true;
    for (const auto& s : traj.samples) {
        if (s.dissipation < 0.0) {
            ok = false;
            rep.max_abs_error = std::max(rep.max_abs_error, -s.dissipation);
            rep.offending = "negative dissipation at t = " + std::to_string(s.t);
        }
        const double r = std::abs(s.balance_residual);
        if (r > rep.max_abs_error && ok)
            rep.max_abs_error = r;
        rep.max_rel_error = std::max(rep.max_rel_error, r / std::max(scale, 1.0));
        if (r > rep.tolerance) {
            ok = false;
            rep.offending = "balance residual " + std::to_string(r) + " at t = " + std::to_string(s.t);
        }
    }
    rep.pass = ok;
    return rep;
}

EntropyScanResult entropy_regularity_scan(const PotentialModel& m, int k_max,
                                          const std::function<double(double, double)>& eta0_correction) {
    EntropyScanResult out;
    AuditReport& rep = out.report;
    rep.check = "entropy_regularity_scan";
    {
        std::ostringstream os;
        os << "theta = theta_c (1 - 2^-k), k = 1.." << k_max;
        rep.grid = os.str();
    }

    const double theta_c = m.params.theta_c;
    std::vector<double> log_t, log_excess;
    for (int k = 1; k <= k_max; ++k) {
        const double gap = theta_c * std::pow(2.0, -k);
        const double theta = theta_c - gap;
        const double p0 = coexistence_pressure(m, theta);
        const std::vector<PhaseState> states = equilibrium_state(m, p0, theta);
        if (states.empty())
            continue;
        double eta0 = -background_f0(m, p0, theta).f0_theta;
        if (eta0_correction)
            eta0 += eta0_correction(p0, theta);
        double excess = 0.0;
        for (const auto& st : states)
            excess = std::max(excess, std::abs(st.eta - eta0));
        ++rep.n_points;
        if (excess > 0.0) {
            log_t.push_back(std::log(gap));
            log_excess.push_back(std::log(excess));
        }
    }

    // Least-squares slope over the last (deepest) 10 dyadic points.
    const std::size_t fit_n = std::min<std::size_t>(10, log_t.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = log_t.size() - fit_n; i < log_t.size(); ++i) {
        sx += log_t[i];
        sy += log_excess[i];
        sxx += log_t[i] * log_t[i];
        sxy += log_t[i] * log_excess[i];
    }
    if (fit_n >= 2) {
        const double denom = fit_n * sxx - sx * sx;
        out.fitted_exponent = (fit_n * sxy - sx * sy) / denom;
    }
    for (std::size_t i = log_t.size() - fit_n; i < log_t.size(); ++i)
        out.sup_excess = std::max(out.sup_excess, std::exp(log_excess[i]));

    out.bounded = out.fitted_exponent >= -0.05;
    const bool expected_bounded =
        m.kind == PotentialKind::Logarithmic || m.params.beta_q >= 1.0;
    rep.max_abs_error = out.sup_excess;
    rep.tolerance = 0.05;
    rep.pass = out.bounded == expected_bounded && fit_n >= 2;
    {
        std::ostringstream os;
        os << "fitted exponent " << out.fitted_exponent << (out.bounded ? " (bounded)" : " (diverging)");
        rep.offending = os.str();
    }
    return out;
}

} // namespace liqvap
