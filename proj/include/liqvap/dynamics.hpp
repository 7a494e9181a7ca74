#pragma once

#include "liqvap/parallel.hpp"
#include "liqvap/potentials.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace liqvap {

// Externally imposed homogeneous pressure p(t): piecewise linear between
// knots, constant outside their range.
class PressureSchedule {
public:
    static PressureSchedule constant(double p);
    // Knots (t_i, p_i) with t strictly increasing and p_i > 0.
    static PressureSchedule piecewise_linear(std::vector<std::pair<double, double>> knots);

    double pressure(double t) const;
    double rate(double t) const; // dp/dt, right-continuous at knots
    // First knot time strictly greater than t, +inf when none is left.
    double next_breakpoint(double t) const;

    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

// Embedded Runge-Kutta step control: 5(4) pair with PI adaptation.
struct StepControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double dt_init = 1e-6;
    double dt_min = 1e-14;
    double dt_max = std::numeric_limits<double>::infinity();
    int record_every = 1; // record every k-th accepted step
};

struct TrajectorySample {
    double t, phi, p, nu, f;
    double dissipation;      // tau * phidot^2
    double balance_residual; // energy-balance defect accumulated since the previous record
    double theta = 0.0, eta = 0.0; // filled in thermal mode
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool thermal = false;
    double tau = 0.0;
    double r_supply = 0.0;
    double abs_tol = 0.0, rel_tol = 0.0;
    std::size_t steps_accepted = 0, steps_rejected = 0;
};

// Isothermal homogeneous relaxation tau phidot = -f_phi(p(t), theta, phi).
// The balance column tracks f against the integrated power nu pdot - tau
// phidot^2; the defect per record is bounded by the step tolerances.
Trajectory relax_homogeneous(const PotentialModel& m, double phi0, double theta,
                             const PressureSchedule& schedule, double t_end,
                             const StepControl& ctrl = {});

// Homogeneous First-Law mode: the pair tau phidot = -f_phi and
// theta etadot = r + tau phidot^2 with eta = -f_theta, integrated through the
// analytic second partials. The balance column tracks eta against the
// integrated (r + dissipation)/theta.
Trajectory relax_thermal_homogeneous(const PotentialModel& m, double phi0, double theta0,
                                     const PressureSchedule& schedule, double r_supply,
                                     double t_end, const StepControl& ctrl = {});

enum class BoundaryKind { NoFlux, Dirichlet };
enum class DensityMode { ConstantRho, FrozenRhoField };
enum class PdeScheme { Explicit, SemiImplicit };

// phi(x) on a uniform grid with frozen (p, theta).
struct Profile1D {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> phi;
    BoundaryKind bc = BoundaryKind::NoFlux;
    double phi_left = 0.0, phi_right = 0.0; // Dirichlet values
    double p = 1.0, theta = 1.0;
    DensityMode density = DensityMode::ConstantRho;
    // Frozen density weights 1/f_p(p, theta, phi0); filled by run_pde1d in
    // FrozenRhoField mode, empty otherwise.
    std::vector<double> rho;

    double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
};

struct PdeOptions {
    double dt = 0.0; // 0 selects 0.4 dx^2 tau / kappa
    PdeScheme scheme = PdeScheme::Explicit;
    Exec exec = Exec::Parallel;
    int record_every = 1;
    double steady_tol = 0.0; // stop early once ||phi_t||_inf < steady_tol (0 = off)
};

struct PdeResult {
    Profile1D profile;
    std::vector<double> times, energies; // one entry per record plus the final state
    std::size_t steps = 0;
    std::size_t energy_increases = 0; // steps with E_new > E_old + 1e-12 |E_old|
    double max_energy_increase = 0.0;
    double final_rate_inf = 0.0; // ||phi_t||_inf at the last step
};

// Gradient-flow relaxation tau phi_t = kappa phi_xx - f_phi at frozen
// (p, theta). Explicit stepping enforces dt <= dx^2 tau / (2 kappa); the
// discrete energy is evaluated every step. In FrozenRhoField mode the
// diffusion is density-weighted and the energy is monitored only.
PdeResult run_pde1d(const PotentialModel& m, const Profile1D& initial, double t_end,
                    const PdeOptions& opts = {});

// Trapezoidal free energy of a profile: sum of kappa (phi_x)^2 / 2 + f,
// density-weighted when the profile carries frozen weights.
double discrete_free_energy(const PotentialModel& m, const Profile1D& profile);

} // namespace liqvap
