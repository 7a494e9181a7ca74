#pragma once

#include "liqvap/errors.hpp"

namespace liqvap {

enum class PotentialKind { Quartic, Logarithmic };

// Every knob of the free-energy family, in one flat bag. Defaults give the
// non-dimensional setup theta_c = p_c = 1 used throughout the tests.
struct ModelParams {
    double a = 1.0;         // energy scale of the logarithmic well, > 0
    double tau = 1.0;       // relaxation time, > 0
    double kappa = 1.0;     // gradient-energy coefficient, >= 0
    double theta_c = 1.0;   // critical temperature, > 0
    double p_c = 1.0;       // critical pressure, > 0
    double q = 1.0;         // first exponent of the order-scale schedule, > 0
    double beta = 0.5;      // second exponent of the order-scale schedule, > 0
    double A = 7.0;         // slope parameter of the coexistence line, > 0
    double R = 1.0;         // background EOS gas constant, > 0
    double c = 1.0;         // background heat capacity, > 0
    double p_ref = 1.0;     // background EOS reference pressure, > 0
    double theta_ref = 1.0; // background EOS reference temperature, > 0
    double dnu_ref = 1.0;   // volume-jump amplitude of the quartic schedule, >= 0
    double beta_q = 0.5;    // volume-jump exponent of the quartic schedule, > 0

    void validate() const; // throws InvalidParams on any violated bound
};

// Immutable after construction; all evaluations below are pure functions of
// their arguments and safe to call concurrently.
struct PotentialModel {
    PotentialKind kind = PotentialKind::Logarithmic;
    ModelParams params;

    PotentialModel() = default;
    PotentialModel(PotentialKind k, ModelParams ps) : kind(k), params(ps) { params.validate(); }
};

// ---------------------------------------------------------------------------
// Building blocks of the quartic potential.
// ---------------------------------------------------------------------------

// Symmetric double well x^4/4 - u^2 x^2/2 with minima at x = +-u.
double double_well(double x, double u);
double double_well_dx(double x, double u);

// C1 odd coupling: x^3/3 - u^2 x on |x| <= u, constant -(2/3) sgn(x) u^3
// outside. Its slope vanishes at |x| = u, so adding any multiple of it moves
// well depths without moving the wells.
double odd_coupling(double x, double u);
double odd_coupling_dx(double x, double u);

// ---------------------------------------------------------------------------
// Schedules in temperature and pressure.
// ---------------------------------------------------------------------------

// Order-parameter scale u(theta). Signed for the logarithmic model (negative
// below theta_c, zero at theta_c, increasing), and >= 0 for the quartic model
// where it is tied to the volume-jump schedule (3 dnu(theta) / 4)^(1/3).
double u_schedule(const PotentialModel& m, double theta);
double u_schedule_dtheta(const PotentialModel& m, double theta);
double u_schedule_d2theta(const PotentialModel& m, double theta);

// Transition-line pressure p0(theta) = p_c exp(A (1 - theta_c/theta)) and its
// theta-derivatives. Monotone, positive, analytic on theta > 0, equal to p_c
// at the critical temperature.
double coexistence_pressure(const PotentialModel& m, double theta);
double coexistence_pressure_dtheta(const PotentialModel& m, double theta);
double coexistence_pressure_d2theta(const PotentialModel& m, double theta);

// Driving field h(p, theta) = p - p0(theta); zero on the transition line,
// positive on the liquid side.
double h_field(const PotentialModel& m, double p, double theta);
double h_field_dp(const PotentialModel& m, double p, double theta);     // == 1
double h_field_dtheta(const PotentialModel& m, double p, double theta); // == -p0'(theta)

// Background equation of state f0(p, theta) and its partials. The default
// form R theta ln(p/p_ref) - c theta (ln(theta/theta_ref) - 1) gives the
// ideal-gas background volume R theta / p and heat capacity c.
struct BackgroundEval {
    double f0;
    double f0_p, f0_theta;
    double f0_pp, f0_thetatheta, f0_ptheta;
};
BackgroundEval background_f0(const PotentialModel& m, double p, double theta);

// ---------------------------------------------------------------------------
// Full potential.
// ---------------------------------------------------------------------------

// Value and analytic partials of f(p, theta, phi). For the quartic model phi
// is unrestricted; for the logarithmic model phi must lie in (-1, 1) and a
// DomainError is thrown otherwise. At the quartic kink |phi| = u the
// second-order values are the inner-branch limits.
struct PotentialEval {
    double f;
    double f_p, f_theta, f_phi;
    double f_phiphi, f_thetatheta, f_thetaphi;
    double f_pphi, f_ptheta, f_pp;
};
PotentialEval potential_eval(const PotentialModel& m, double p, double theta, double phi);

// Specific-volume decomposition nu = nu0 + nu1 with nu0 the background part
// and nu1 the order-parameter part; the sum reproduces f_p exactly. Throws
// NonPositiveVolume when the total is not positive.
struct VolumeSplit {
    double nu0, nu1, nu;
};
VolumeSplit volume_split(const PotentialModel& m, double p, double theta, double phi);

// A state sample with its derived quantities, recomputed on construction.
struct ThermoPoint {
    double p, theta, phi;
    double nu;  // f_p
    double eta; // -f_theta
    double f;
};
ThermoPoint make_thermo_point(const PotentialModel& m, double p, double theta, double phi);

// True when phi is an admissible order-parameter value for the model.
bool phi_admissible(const PotentialModel& m, double phi);

} // namespace liqvap
