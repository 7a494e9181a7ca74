#include "liqvap/potentials.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace liqvap {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_positive_state(double p, double theta) {
    if (!(p > 0.0) || !(theta > 0.0))
        throw InvalidParams("state requires p > 0 and theta > 0, got p = " + std::to_string(p) +
                            ", theta = " + std::to_string(theta));
}

// Order-scale schedule of the logarithmic model together with its first two
// theta-derivatives: u = sgn(g) |g|^(2 beta) with g = (theta/theta_c)^q - 1.
// The signed power keeps u increasing through zero at theta_c for any beta.
struct Schedule {
    double u, du, d2u;
};

Schedule log_schedule(const ModelParams& ps, double theta) {
    const double t = std::pow(theta / ps.theta_c, ps.q);
    const double g = t - 1.0;
    const double dg = ps.q * t / theta;
    const double d2g = ps.q * (ps.q - 1.0) * t / (theta * theta);
    const double e = 2.0 * ps.beta;

    Schedule s{};
    if (g == 0.0) {
        s.u = 0.0;
        if (e == 1.0) {
            s.du = dg;
            s.d2u = d2g;
        } else if (e > 1.0) {
            s.du = 0.0;
            s.d2u = (e >= 2.0) ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            s.du = std::numeric_limits<double>::infinity();
            s.d2u = std::numeric_limits<double>::infinity();
        }
        return s;
    }
    const double ag = std::abs(g);
    s.u = sgn(g) * std::pow(ag, e);
    s.du = e * std::pow(ag, e - 1.0) * dg;
    s.d2u = e * (e - 1.0) * sgn(g) * std::pow(ag, e - 2.0) * dg * dg + e * std::pow(ag, e - 1.0) * d2g;
    return s;
}

// Quartic order scale (3 dnu(theta) / 4)^(1/3) with the volume-jump schedule
// dnu = dnu_ref (1 - theta/theta_c)^beta_q below theta_c and zero above.
// Derivatives at theta >= theta_c are the (vanishing) upper-branch values.
Schedule quartic_schedule(const ModelParams& ps, double theta) {
    Schedule s{0.0, 0.0, 0.0};
    if (theta >= ps.theta_c || ps.dnu_ref == 0.0)
        return s;
    const double amp = std::cbrt(0.75 * ps.dnu_ref);
    const double t = 1.0 - theta / ps.theta_c;
    const double e = ps.beta_q / 3.0;
    s.u = amp * std::pow(t, e);
    s.du = -amp * e * std::pow(t, e - 1.0) / ps.theta_c;
    s.d2u = amp * e * (e - 1.0) * std::pow(t, e - 2.0) / (ps.theta_c * ps.theta_c);
    return s;
}

Schedule schedule(const PotentialModel& m, double theta) {
    return m.kind == PotentialKind::Logarithmic ? log_schedule(m.params, theta)
                                                : quartic_schedule(m.params, theta);
}

} // namespace

void ModelParams::validate() const {
    auto check = [](double v, const char* name, bool strict) {
        if (strict ? !(v > 0.0) : !(v >= 0.0))
            throw InvalidParams(std::string(name) + (strict ? " must be > 0" : " must be >= 0") +
                                ", got " + std::to_string(v));
    };
    check(a, "a", true);
    check(tau, "tau", true);
    check(kappa, "kappa", false);
    check(theta_c, "theta_c", true);
    check(p_c, "p_c", true);
    check(q, "q", true);
    check(beta, "beta", true);
    check(A, "A", true);
    check(R, "R", true);
    check(c, "c", true);
    check(p_ref, "p_ref", true);
    check(theta_ref, "theta_ref", true);
    check(dnu_ref, "dnu_ref", false);
    check(beta_q, "beta_q", true);
}

double double_well(double x, double u) {
    const double x2 = x * x;
    return 0.25 * x2 * x2 - 0.5 * u * u * x2;
}

double double_well_dx(double x, double u) {
    return x * x * x - u * u * x;
}

double odd_coupling(double x, double u) {
    if (std::abs(x) <= u)
        return x * x * x / 3.0 - u * u * x;
    return -(2.0 / 3.0) * sgn(x) * u * u * u;
}

double odd_coupling_dx(double x, double u) {
    if (std::abs(x) <= u)
        return x * x - u * u;
    return 0.0;
}

double u_schedule(const PotentialModel& m, double theta) {
    if (!(theta > 0.0))
        throw InvalidParams("u_schedule requires theta > 0");
    return schedule(m, theta).u;
}

double u_schedule_dtheta(const PotentialModel& m, double theta) {
    if (!(theta > 0.0))
        throw InvalidParams("u_schedule_dtheta requires theta > 0");
    return schedule(m, theta).du;
}

double u_schedule_d2theta(const PotentialModel& m, double theta) {
    if (!(theta > 0.0))
        throw InvalidParams("u_schedule_d2theta requires theta > 0");
    return schedule(m, theta).d2u;
}

double coexistence_pressure(const PotentialModel& m, double theta) {
    const ModelParams& ps = m.params;
    return ps.p_c * std::exp(ps.A * (1.0 - ps.theta_c / theta));
}

double coexistence_pressure_dtheta(const PotentialModel& m, double theta) {
    return coexistence_pressure(m, theta) * m.params.A * m.params.theta_c / (theta * theta);
}

double coexistence_pressure_d2theta(const PotentialModel& m, double theta) {
    const double w = m.params.A * m.params.theta_c / (theta * theta);
    return coexistence_pressure(m, theta) * w * (w - 2.0 / theta);
}

double h_field(const PotentialModel& m, double p, double theta) {
    return p - coexistence_pressure(m, theta);
}

double h_field_dp(const PotentialModel&, double, double) {
    return 1.0;
}

double h_field_dtheta(const PotentialModel& m, double, double theta) {
    return -coexistence_pressure_dtheta(m, theta);
}

BackgroundEval background_f0(const PotentialModel& m, double p, double theta) {
    require_positive_state(p, theta);
    const ModelParams& ps = m.params;
    const double lp = std::log(p / ps.p_ref);
    const double lt = std::log(theta / ps.theta_ref);
    BackgroundEval b{};
    b.f0 = ps.R * theta * lp - ps.c * theta * (lt - 1.0);
    b.f0_p = ps.R * theta / p;
    b.f0_theta = ps.R * lp - ps.c * lt;
    b.f0_pp = -ps.R * theta / (p * p);
    b.f0_thetatheta = -ps.c / theta;
    b.f0_ptheta = ps.R / p;
    return b;
}

bool phi_admissible(const PotentialModel& m, double phi) {
    if (!std::isfinite(phi))
        return false;
    return m.kind == PotentialKind::Quartic || std::abs(phi) < 1.0;
}

PotentialEval potential_eval(const PotentialModel& m, double p, double theta, double phi) {
    require_positive_state(p, theta);
    if (!phi_admissible(m, phi))
        throw DomainError("phi = " + std::to_string(phi) +
                          " outside the admissible order-parameter domain");

    const BackgroundEval b = background_f0(m, p, theta);
    const Schedule sc = schedule(m, theta);
    const double u = sc.u, du = sc.du, d2u = sc.d2u;
    const double h = h_field(m, p, theta);
    const double h_th = h_field_dtheta(m, p, theta);
    const double h_thth = -coexistence_pressure_d2theta(m, theta);

    PotentialEval e{};
    e.f_pp = b.f0_pp;

    if (m.kind == PotentialKind::Logarithmic) {
        const double a = m.params.a;
        const double one = 1.0 - phi * phi;
        const double lg = std::log1p(-phi * phi);
        e.f = b.f0 - a * (u + 1.0) * lg - a * phi * phi - 2.0 * h * phi;
        e.f_p = b.f0_p - 2.0 * phi;
        e.f_theta = b.f0_theta - a * du * lg - 2.0 * h_th * phi;
        e.f_phi = 2.0 * a * (u + 1.0) * phi / one - 2.0 * a * phi - 2.0 * h;
        e.f_phiphi = 2.0 * a * (u + 1.0) * (1.0 + phi * phi) / (one * one) - 2.0 * a;
        e.f_thetatheta = b.f0_thetatheta - a * d2u * lg - 2.0 * h_thth * phi;
        e.f_thetaphi = 2.0 * a * du * phi / one - 2.0 * h_th;
        e.f_pphi = -2.0;
        e.f_ptheta = b.f0_ptheta;
        return e;
    }

    // Quartic branch. Inside |phi| <= u the coupling is cubic, outside it is
    // constant; second-order values at the joint are the inner-branch limits.
    const double F = double_well(phi, u);
    const double Fx = double_well_dx(phi, u);
    const double Fu = -u * phi * phi;
    const double Fxx = 3.0 * phi * phi - u * u;
    const double Fxu = -2.0 * u * phi;
    const double Fuu = -phi * phi;

    double G, Gx, Gu, Gxx, Gxu, Guu;
    if (std::abs(phi) <= u) {
        G = phi * phi * phi / 3.0 - u * u * phi;
        Gx = phi * phi - u * u;
        Gu = -2.0 * u * phi;
        Gxx = 2.0 * phi;
        Gxu = -2.0 * u;
        Guu = -2.0 * phi;
    } else {
        const double s = sgn(phi);
        G = -(2.0 / 3.0) * s * u * u * u;
        Gx = 0.0;
        Gu = -2.0 * s * u * u;
        Gxx = 0.0;
        Gxu = 0.0;
        Guu = -4.0 * s * u;
    }

    e.f = b.f0 + F + h * G;
    e.f_p = b.f0_p + G;
    e.f_theta = b.f0_theta + Fu * du + h_th * G + h * Gu * du;
    e.f_phi = Fx + h * Gx;
    e.f_phiphi = Fxx + h * Gxx;
    e.f_thetatheta = b.f0_thetatheta + Fuu * du * du + Fu * d2u + h_thth * G +
                     2.0 * h_th * Gu * du + h * (Guu * du * du + Gu * d2u);
    e.f_thetaphi = Fxu * du + h_th * Gx + h * Gxu * du;
    e.f_pphi = Gx;
    e.f_ptheta = b.f0_ptheta + Gu * du;
    return e;
}

VolumeSplit volume_split(const PotentialModel& m, double p, double theta, double phi) {
    require_positive_state(p, theta);
    if (!phi_admissible(m, phi))
        throw DomainError("phi = " + std::to_string(phi) +
                          " outside the admissible order-parameter domain");
    VolumeSplit v{};
    v.nu0 = background_f0(m, p, theta).f0_p;
    if (m.kind == PotentialKind::Logarithmic)
        v.nu1 = -2.0 * phi;
    else
        v.nu1 = odd_coupling(phi, schedule(m, theta).u);
    v.nu = v.nu0 + v.nu1;
    if (!(v.nu > 0.0))
        throw NonPositiveVolume("specific volume " + std::to_string(v.nu) + " at p = " +
                                std::to_string(p) + ", theta = " + std::to_string(theta) +
                                ", phi = " + std::to_string(phi));
    return v;
}

ThermoPoint make_thermo_point(const PotentialModel& m, double p, double theta, double phi) {
    const PotentialEval e = potential_eval(m, p, theta, phi);
    if (!(e.f_p > 0.0))
        throw NonPositiveVolume("specific volume " + std::to_string(e.f_p) + " at p = " +
                                std::to_string(p) + ", theta = " + std::to_string(theta) +
                                ", phi = " + std::to_string(phi));
    return ThermoPoint{p, theta, phi, e.f_p, -e.f_theta, e.f};
}

} // namespace liqvap
