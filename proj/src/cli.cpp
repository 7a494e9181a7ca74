#include "liqvap/cli.hpp"

#include "liqvap/csv.hpp"
#include "liqvap/dynamics.hpp"
#include "liqvap/equilibrium.hpp"
#include "liqvap/validate.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace liqvap {

namespace {

using Row = std::vector<CsvValue>;

void write_meta(CsvWriter& w, const RunConfig& cfg, const std::string& cmd) {
    for (const auto& [k, v] : config_echo(cfg, cmd))
        w.comment(k + " = " + v);
}

std::vector<std::string> cols(std::initializer_list<const char*> names) {
    return {names.begin(), names.end()};
}

double default_pressure(const PotentialModel& m, double p_key, double theta) {
    return p_key > 0.0 ? p_key : coexistence_pressure(m, theta);
}

PressureSchedule make_schedule(const PotentialModel& m, double p_key,
                               const std::vector<std::pair<double, double>>& knots, double theta) {
    if (!knots.empty())
        return PressureSchedule::piecewise_linear(knots);
    return PressureSchedule::constant(default_pressure(m, p_key, theta));
}

void emit_isotherm(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg) {
    const auto& b = cfg.isotherm;
    const double p0 = coexistence_pressure(m, b.theta);
    const double p_min = b.p_min > 0.0 ? b.p_min : 0.5 * p0;
    const double p_max = b.p_max > 0.0 ? b.p_max : 1.5 * p0;
    const IsothermCurve curve = isotherm(m, b.theta, p_min, p_max, b.n);

    w.header(cols({"p", "nu", "phi", "branch"}));
    bool plateau_done = !curve.plateau.has_value();
    auto plateau_rows = [&]() {
        const IsothermPlateau& pl = *curve.plateau;
        w.row(Row{pl.p0, pl.nu_vapour, pl.phi_vapour, std::string("plateau_vapour")});
        w.row(Row{pl.p0, pl.nu_liquid, pl.phi_liquid, std::string("plateau_liquid")});
    };
    for (const auto& s : curve.samples) {
        if (!plateau_done && s.p > curve.plateau->p0) {
            plateau_rows();
            plateau_done = true;
        }
        w.row(Row{s.p, s.nu, s.phi, std::string(branch_name(s.branch))});
    }
    if (!plateau_done)
        plateau_rows();
}

void emit_phase_diagram(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg) {
    const auto& b = cfg.phase_diagram;
    w.header(cols({"theta", "p0", "p0_prime", "delta_nu", "latent_heat", "cc_residual",
                   "h_spinodal_minus", "h_spinodal_plus"}));
    for (int i = 0; i < b.n; ++i) {
        const double theta =
            b.theta_min + (b.theta_max - b.theta_min) * static_cast<double>(i) / (b.n - 1);
        const double p0 = coexistence_pressure(m, theta);
        const double p0p = coexistence_pressure_dtheta(m, theta);
        double dnu = 0.0, latent = 0.0, cc = 0.0, h_lo = 0.0, h_hi = 0.0;
        if (theta < m.params.theta_c) {
            dnu = volume_jump(m, theta);
            if (dnu > 0.0) {
                const LatentHeatResult lh = latent_heat_and_clapeyron(m, theta);
                latent = lh.latent_heat;
                cc = lh.clapeyron_residual;
            }
            if (const auto sp = spinodal(m, theta)) {
                h_lo = sp->h_minus;
                h_hi = sp->h_plus;
            }
        }
        w.row(Row{theta, p0, p0p, dnu, latent, cc, h_lo, h_hi});
    }
}

void emit_minima(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg) {
    const auto& b = cfg.minima;
    const StructureMap map =
        minima_structure_map(m, b.u_min, b.u_max, b.n_u, b.h_min, b.h_max, b.n_h);
    w.header(cols({"u", "h_over_a", "n_minima"}));
    for (int iu = 0; iu < map.n_u; ++iu)
        for (int ih = 0; ih < map.n_h; ++ih)
            w.row(Row{map.u_values[iu], map.h_values[ih], static_cast<double>(map.at(iu, ih))});
}

void emit_spinodal(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg) {
    const auto& b = cfg.spinodal;
    w.comment("rows cover temperatures with a metastable branch");
    w.header(cols({"theta", "u", "h_minus", "h_plus"}));
    for (int i = 0; i < b.n; ++i) {
        const double theta =
            b.theta_min + (b.theta_max - b.theta_min) * static_cast<double>(i) / (b.n - 1);
        if (const auto sp = spinodal(m, theta))
            w.row(Row{theta, u_schedule(m, theta), sp->h_minus, sp->h_plus});
    }
}

void emit_hysteresis(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg) {
    const auto& b = cfg.hysteresis;
    std::vector<double> path;
    path.reserve(2 * b.n_steps + 1);
    for (int k = 0; k <= b.n_steps; ++k)
        path.push_back(-b.h_amplitude + 2.0 * b.h_amplitude * static_cast<double>(k) / b.n_steps);
    for (int k = 1; k <= b.n_steps; ++k)
        path.push_back(b.h_amplitude - 2.0 * b.h_amplitude * static_cast<double>(k) / b.n_steps);

    const auto sweep = hysteresis_sweep(m, b.theta, path);
    w.header(cols({"h_over_a", "phi", "branch"}));
    for (const auto& s : sweep)
        w.row(Row{s.h_over_a, s.phi, std::string(s.direction > 0 ? "up" : "down")});
}

void trajectory_rows(CsvWriter& w, const Trajectory& traj) {
    if (traj.thermal) {
        w.header(cols({"t", "phi", "p", "nu", "f", "dissipation", "balance_residual", "theta", "eta"}));
        for (const auto& s : traj.samples)
            w.row(Row{s.t, s.phi, s.p, s.nu, s.f, s.dissipation, s.balance_residual, s.theta, s.eta});
    } else {
        w.header(cols({"t", "phi", "p", "nu", "f", "dissipation", "balance_residual"}));
        for (const auto& s : traj.samples)
            w.row(Row{s.t, s.phi, s.p, s.nu, s.f, s.dissipation, s.balance_residual});
    }
}

void emit_relax(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg) {
    const auto& b = cfg.relax;
    StepControl ctrl;
    ctrl.abs_tol = b.abs_tol;
    ctrl.rel_tol = b.rel_tol;
    ctrl.record_every = b.record_every;
    const Trajectory traj = relax_homogeneous(m, b.phi0, b.theta,
                                              make_schedule(m, b.p, b.schedule, b.theta),
                                              b.t_end, ctrl);
    trajectory_rows(w, traj);
}

void emit_thermal(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg) {
    const auto& b = cfg.thermal;
    StepControl ctrl;
    ctrl.abs_tol = b.abs_tol;
    ctrl.rel_tol = b.rel_tol;
    ctrl.record_every = b.record_every;
    const Trajectory traj = relax_thermal_homogeneous(m, b.phi0, b.theta0,
                                                      make_schedule(m, b.p, b.schedule, b.theta0),
                                                      b.r, b.t_end, ctrl);
    trajectory_rows(w, traj);
}

std::string energy_path(const std::string& out_path) {
    const auto dot = out_path.rfind('.');
    const auto slash = out_path.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return out_path.substr(0, dot) + ".energy" + out_path.substr(dot);
    return out_path + ".energy.csv";
}

void emit_pde1d(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg,
                const std::string& out_path, bool quiet, std::ostream& info) {
    const auto& b = cfg.pde1d;
    Profile1D prof;
    prof.dx = b.dx;
    prof.x0 = std::isnan(b.x_min) ? -0.5 * b.dx * (b.n - 1) : b.x_min;
    prof.phi.resize(static_cast<std::size_t>(b.n));
    prof.bc = b.bc == "dirichlet" ? BoundaryKind::Dirichlet : BoundaryKind::NoFlux;
    prof.phi_left = b.phi_left;
    prof.phi_right = b.phi_right;
    prof.theta = b.theta;
    prof.p = default_pressure(m, b.p, b.theta);
    prof.density = b.density == "frozen" ? DensityMode::FrozenRhoField : DensityMode::ConstantRho;

    const double x_mid = prof.x0 + 0.5 * b.dx * (b.n - 1);
    for (std::size_t i = 0; i < prof.phi.size(); ++i) {
        const double x = prof.x(i);
        if (b.init == "uniform")
            prof.phi[i] = b.init_value;
        else if (b.init == "kink")
            prof.phi[i] = 0.5 * (b.phi_left + b.phi_right) +
                          0.5 * (b.phi_right - b.phi_left) * std::tanh(x - x_mid);
        else
            prof.phi[i] = x < x_mid ? b.phi_left : b.phi_right;
    }

    PdeOptions opts;
    opts.dt = b.dt;
    opts.scheme = b.scheme == "semi_implicit" ? PdeScheme::SemiImplicit : PdeScheme::Explicit;
    opts.record_every = b.record_every;
    opts.steady_tol = b.steady_tol;
    const PdeResult res = run_pde1d(m, prof, b.t_end, opts);

    w.header(cols({"x", "phi"}));
    for (std::size_t i = 0; i < res.profile.phi.size(); ++i)
        w.row(Row{res.profile.x(i), res.profile.phi[i]});

    const std::string epath = energy_path(out_path);
    std::ofstream eos(epath, std::ios::binary);
    if (!eos)
        throw Error("IoError", "cannot open " + epath);
    CsvWriter ew(eos);
    write_meta(ew, cfg, "pde1d");
    ew.header(cols({"t", "energy"}));
    for (std::size_t i = 0; i < res.times.size(); ++i)
        ew.row(Row{res.times[i], res.energies[i]});

    if (!quiet)
        info << "pde1d: " << res.steps << " steps, " << res.energy_increases
             << " energy increases, final rate " << format_double(res.final_rate_inf) << "\n";
}

int emit_validate(CsvWriter& w, const PotentialModel& m, const RunConfig& cfg, bool quiet,
                  std::ostream& info) {
    const auto& b = cfg.validate;

    std::vector<AuditReport> reports;
    reports.push_back(check_derivatives(m, b.n_samples, cfg.seed));

    // Envelope audit per temperature with pressures straddling the transition
    // line, merged into one report.
    {
        AuditReport merged;
        merged.check = "check_gibbs_envelope";
        merged.tolerance = 1e-6;
        std::ostringstream grid;
        grid << b.n_theta << " temperatures x " << b.n_p << " pressures around p0";
        merged.grid = grid.str();
        for (int i = 0; i < b.n_theta; ++i) {
            const double theta = m.params.theta_c * (0.55 + 0.40 * i / std::max(1, b.n_theta - 1));
            const double p0 = coexistence_pressure(m, theta);
            std::vector<double> ps;
            for (int j = 0; j < b.n_p; ++j)
                ps.push_back(p0 * (0.8 + 0.4 * j / std::max(1, b.n_p - 1)));
            const std::vector<double> ts{theta};
            const AuditReport r = check_gibbs_envelope(m, ts, ps);
            merged.n_points += r.n_points;
            merged.n_skipped += r.n_skipped;
            if (r.max_rel_error > merged.max_rel_error) {
                merged.max_rel_error = r.max_rel_error;
                merged.max_abs_error = r.max_abs_error;
                merged.offending = r.offending;
            }
        }
        merged.pass = merged.max_rel_error < merged.tolerance;
        reports.push_back(merged);
    }

    {
        const double theta = 0.6 * m.params.theta_c;
        const PressureSchedule sched = PressureSchedule::constant(1.1 * coexistence_pressure(m, theta));
        const Trajectory traj = relax_homogeneous(m, 0.1, theta, sched, 20.0, StepControl{});
        reports.push_back(check_dissipation(traj));
    }

    reports.push_back(entropy_regularity_scan(m, b.k_max).report);

    w.header(cols({"check", "grid", "n_points", "n_skipped", "max_abs_error", "max_rel_error",
                   "tolerance", "pass", "detail"}));
    bool all_pass = true;
    for (const auto& r : reports) {
        w.row(Row{r.check, r.grid, static_cast<double>(r.n_points),
                  static_cast<double>(r.n_skipped), r.max_abs_error, r.max_rel_error, r.tolerance,
                  std::string(r.pass ? "true" : "false"), r.offending});
        all_pass = all_pass && r.pass;
        if (!quiet)
            info << (r.pass ? "PASS " : "FAIL ") << r.check << " (max_rel_error "
                 << format_double(r.max_rel_error) << ", points " << r.n_points << ")\n";
    }
    if (!quiet)
        info << (all_pass ? "all checks passed\n" : "some checks FAILED\n");
    return all_pass ? 0 : 2;
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"isotherm", "phase-diagram", "minima",
                                                "spinodal", "hysteresis",    "relax",
                                                "thermal",  "pde1d",         "validate"};
    return names;
}

int run_command(const std::string& cmd, const RunConfig& cfg, const std::string& out_path,
                bool quiet, std::ostream& info, std::ostream& diag) {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        diag << "IoError: cannot open " << out_path << "\n";
        return 2;
    }
    CsvWriter w(os);

    try {
        const PotentialModel model(cfg.kind, cfg.params);
        write_meta(w, cfg, cmd);

        int code = 0;
        if (cmd == "isotherm")
            emit_isotherm(w, model, cfg);
        else if (cmd == "phase-diagram")
            emit_phase_diagram(w, model, cfg);
        else if (cmd == "minima")
            emit_minima(w, model, cfg);
        else if (cmd == "spinodal")
            emit_spinodal(w, model, cfg);
        else if (cmd == "hysteresis")
            emit_hysteresis(w, model, cfg);
        else if (cmd == "relax")
            emit_relax(w, model, cfg);
        else if (cmd == "thermal")
            emit_thermal(w, model, cfg);
        else if (cmd == "pde1d")
            emit_pde1d(w, model, cfg, out_path, quiet, info);
        else if (cmd == "validate")
            code = emit_validate(w, model, cfg, quiet, info);
        else {
            diag << "UsageError: unknown command '" << cmd << "'\n";
            return 1;
        }

        if (!quiet && cmd != "validate" && cmd != "pde1d")
            info << cmd << ": wrote " << out_path << "\n";
        return code;
    } catch (const Error& e) {
        w.abandon();
        diag << e.name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        w.abandon();
        diag << "RuntimeError: " << e.what() << "\n";
        return 2;
    }
}

} // namespace liqvap
