#include "liqvap/equilibrium.hpp"

#include "liqvap/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace liqvap {

namespace {

constexpr double kPhiCap = 1.0 - 1e-12; // admissible root window of the logarithmic family
constexpr double kRootDedup = 1e-9;
constexpr double kTieTol = 1e-12;

// Slope and curvature of the phi-part of the logarithmic potential, divided
// by 2a; the field enters only as b = h/a.
double log_slope(double u, double b, double phi) {
    const double one = 1.0 - phi * phi;
    return (u + 1.0) * phi / one - phi - b;
}

double log_curv(double u, double phi) {
    const double one = 1.0 - phi * phi;
    return (u + 1.0) * (1.0 + phi * phi) / (one * one) - 1.0;
}

double log_core_f(double u, double b, double phi) {
    return -(u + 1.0) * std::log1p(-phi * phi) - phi * phi - 2.0 * b * phi;
}

PointKind classify(double f_phiphi) {
    if (std::abs(f_phiphi) < kInflectionTol)
        return PointKind::Inflection;
    return f_phiphi > 0.0 ? PointKind::Minimum : PointKind::Maximum;
}

// A single stationary point that is the argmin of a confining potential is a
// minimum even when its curvature underflows the classification tolerance
// (flat well at the critical point). Never touches saddle pairs: those always
// come with a properly curved minimum.
void promote_flat_argmin(std::vector<StationaryPoint>& pts) {
    for (const auto& pt : pts)
        if (pt.kind == PointKind::Minimum)
            return;
    if (pts.empty())
        return;
    auto best = std::min_element(pts.begin(), pts.end(),
                                 [](const auto& l, const auto& r) { return l.f_value < r.f_value; });
    if (best->f_phiphi >= -kInflectionTol)
        best->kind = PointKind::Minimum;
}

void mark_absolute_minima(std::vector<StationaryPoint>& pts) {
    double fmin = 0.0;
    bool any = false;
    for (const auto& pt : pts)
        if (pt.kind == PointKind::Minimum && (!any || pt.f_value < fmin)) {
            fmin = pt.f_value;
            any = true;
        }
    if (!any)
        return;
    const double tol = kTieTol * std::max(1.0, std::abs(fmin));
    for (auto& pt : pts)
        pt.is_absolute_min = (pt.kind == PointKind::Minimum) && (pt.f_value <= fmin + tol);
}

std::vector<StationaryPoint> core_stationary_points(const PotentialModel& m, double u, double h) {
    if (m.kind == PotentialKind::Logarithmic)
        return log_stationary_points(u, h / m.params.a);
    return quartic_stationary_points(u, h);
}

} // namespace

const StationaryPoint& PhaseEquilibrium::stable() const {
    for (const auto& pt : points)
        if (pt.is_absolute_min)
            return pt;
    // Unreachable for the shipped families; kept as a deterministic fallback.
    return *std::min_element(points.begin(), points.end(),
                             [](const auto& l, const auto& r) { return l.f_value < r.f_value; });
}

const StationaryPoint* PhaseEquilibrium::metastable() const {
    const StationaryPoint& s = stable();
    for (const auto& pt : points)
        if (pt.kind == PointKind::Minimum && &pt != &s)
            return &pt;
    return nullptr;
}

int PhaseEquilibrium::minima_count() const {
    int n = 0;
    for (const auto& pt : points)
        n += pt.kind == PointKind::Minimum;
    return n;
}

std::vector<StationaryPoint> log_stationary_points(double u, double b) {
    if (!(u > -1.0))
        throw DomainError("logarithmic stationary points require u > -1, got " + std::to_string(u));

    // f_phi = 0 on (-1, 1) is equivalent to the cubic
    // phi^3 + b phi^2 + u phi - b = 0; roots outside the interval are
    // artifacts of clearing the (1 - phi^2) denominator and get dropped.
    const CubicRoots roots = solve_cubic(b, u, -b);

    std::vector<StationaryPoint> pts;
    for (int k = 0; k < roots.count; ++k) {
        double phi = roots.x[k];
        if (!(std::abs(phi) < kPhiCap))
            continue;
        for (int it = 0; it < 2; ++it) {
            const double curv = log_curv(u, phi);
            if (std::abs(curv) < kInflectionTol)
                break;
            phi -= log_slope(u, b, phi) / curv;
            phi = std::clamp(phi, -kPhiCap, kPhiCap);
        }
        StationaryPoint pt;
        pt.phi = phi;
        pt.f_phiphi = 2.0 * log_curv(u, phi);
        pt.kind = classify(pt.f_phiphi);
        pt.f_value = log_core_f(u, b, phi);
        pt.f_phi_residual = std::abs(2.0 * log_slope(u, b, phi));
        pts.push_back(pt);
    }

    std::sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) { return l.phi < r.phi; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& l, const auto& r) { return std::abs(l.phi - r.phi) < kRootDedup; }),
              pts.end());

    promote_flat_argmin(pts);
    mark_absolute_minima(pts);
    return pts;
}

int log_minima_count(double u, double b) {
    int n = 0;
    for (const auto& pt : log_stationary_points(u, b))
        n += pt.kind == PointKind::Minimum;
    return n;
}

double log_spinodal_field(double u) {
    if (!(u < 0.0))
        throw DomainError("spinodal field requires u < 0, got " + std::to_string(u));
    double lo = 0.0;
    double hi = -u;
    // The transition is guaranteed inside (0, |u|); widen defensively in case
    // the count at |u| is still 2 for a borderline u.
    while (log_minima_count(u, hi) == 2) {
        hi *= 1.5;
        if (hi > 8.0)
            throw StepFailure("spinodal bracket expansion failed at u = " + std::to_string(u));
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (log_minima_count(u, mid) == 2)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<StationaryPoint> quartic_stationary_points(double u, double h) {
    if (!(u >= 0.0))
        throw DomainError("quartic stationary points require u >= 0, got " + std::to_string(u));

    std::vector<StationaryPoint> pts;
    auto push = [&](double phi, double curv) {
        StationaryPoint pt;
        pt.phi = phi;
        pt.f_phiphi = curv;
        pt.f_value = double_well(phi, u) + h * odd_coupling(phi, u);
        pt.f_phi_residual = std::abs(double_well_dx(phi, u) + h * odd_coupling_dx(phi, u));
        pt.kind = classify(curv);
        pts.push_back(pt);
    };

    if (u == 0.0) {
        push(0.0, 0.0);
    } else {
        // The wells sit at phi = -+u for every field value; each is a genuine
        // minimum while the inner-branch curvature 2u(u -+ h) stays positive
        // and degrades to a flexus beyond the spinodal |h| = u. An interior
        // maximum at phi = -h exists strictly between the wells.
        const double curv_minus = 2.0 * u * (u - h);
        const double curv_plus = 2.0 * u * (u + h);
        push(-u, curv_minus);
        if (curv_minus < -kInflectionTol)
            pts.back().kind = PointKind::Inflection; // one-sided minimum from outside
        push(u, curv_plus);
        if (curv_plus < -kInflectionTol)
            pts.back().kind = PointKind::Inflection;
        if (std::abs(h) < u && u - std::abs(h) > kRootDedup)
            push(-h, h * h - u * u);
    }

    std::sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) { return l.phi < r.phi; });
    promote_flat_argmin(pts);
    mark_absolute_minima(pts);
    return pts;
}

int quartic_minima_count(double u, double h) {
    int n = 0;
    for (const auto& pt : quartic_stationary_points(u, h))
        n += pt.kind == PointKind::Minimum;
    return n;
}

PhaseEquilibrium find_stationary_points(const PotentialModel& m, double p, double theta) {
    PhaseEquilibrium eq;
    eq.p = p;
    eq.theta = theta;
    eq.u = u_schedule(m, theta);
    eq.h = h_field(m, p, theta);
    eq.points = core_stationary_points(m, eq.u, eq.h);
    for (auto& pt : eq.points) {
        const PotentialEval ev = potential_eval(m, p, theta, pt.phi);
        pt.f_value = ev.f;
        pt.f_phiphi = ev.f_phiphi;
        pt.f_phi_residual = std::abs(ev.f_phi);
    }
    return eq;
}

std::vector<PhaseState> equilibrium_state(const PotentialModel& m, double p, double theta) {
    const PhaseEquilibrium eq = find_stationary_points(m, p, theta);
    std::vector<PhaseState> states;
    for (const auto& pt : eq.points) {
        if (pt.kind != PointKind::Minimum)
            continue;
        const ThermoPoint tp = make_thermo_point(m, p, theta, pt.phi);
        states.push_back(PhaseState{pt.phi, tp.nu, tp.eta, tp.f, pt.is_absolute_min});
    }
    return states;
}

const char* branch_name(Branch b) {
    switch (b) {
    case Branch::Liquid: return "liquid";
    case Branch::Vapour: return "vapour";
    case Branch::Supercritical: return "supercritical";
    }
    return "?";
}

IsothermCurve isotherm(const PotentialModel& m, double theta, double p_min, double p_max,
                       int n_samples, Exec exec) {
    if (!(p_min > 0.0) || !(p_max > p_min) || n_samples < 2)
        throw InvalidParams("isotherm requires 0 < p_min < p_max and n_samples >= 2");
    u_schedule(m, theta); // fail on a bad temperature before entering the scan

    IsothermCurve curve;
    curve.theta = theta;
    curve.samples.resize(static_cast<std::size_t>(n_samples));

    const bool subcritical = theta < m.params.theta_c;
    std::vector<double> bad_p(static_cast<std::size_t>(n_samples),
                              std::numeric_limits<double>::quiet_NaN());

    parallel_for(exec, static_cast<std::size_t>(n_samples), [&](std::size_t i) {
        const double p = p_min + (p_max - p_min) * static_cast<double>(i) / (n_samples - 1);
        try {
            const PhaseEquilibrium eq = find_stationary_points(m, p, theta);
            const StationaryPoint& s = eq.stable();
            const ThermoPoint tp = make_thermo_point(m, p, theta, s.phi);
            Branch br = Branch::Supercritical;
            if (subcritical)
                br = eq.h > 0.0 ? Branch::Liquid : Branch::Vapour;
            curve.samples[i] = IsothermSample{p, tp.nu, tp.phi, br};
        } catch (const NonPositiveVolume&) {
            bad_p[i] = p;
        }
    });

    for (double p : bad_p)
        if (!std::isnan(p))
            throw NonPositiveVolume("isotherm at theta = " + std::to_string(theta) +
                                    " hit a non-positive volume at p = " + std::to_string(p));

    if (subcritical) {
        const double p0 = coexistence_pressure(m, theta);
        if (p0 >= p_min && p0 <= p_max) {
            const PhaseEquilibrium eq0 = find_stationary_points(m, p0, theta);
            if (eq0.minima_count() == 2) {
                double nu[2], phi[2];
                int k = 0;
                for (const auto& pt : eq0.points)
                    if (pt.kind == PointKind::Minimum) {
                        nu[k] = make_thermo_point(m, p0, theta, pt.phi).nu;
                        phi[k] = pt.phi;
                        ++k;
                    }
                if (nu[0] != nu[1]) {
                    const int liq = nu[0] < nu[1] ? 0 : 1;
                    curve.plateau =
                        IsothermPlateau{p0, nu[liq], nu[1 - liq], phi[liq], phi[1 - liq]};
                }
            }
        }
    }
    return curve;
}

double volume_jump(const PotentialModel& m, double theta) {
    if (theta >= m.params.theta_c)
        return 0.0;
    const double p0 = coexistence_pressure(m, theta);
    const std::vector<PhaseState> states = equilibrium_state(m, p0, theta);
    if (states.size() < 2)
        return 0.0;
    return std::abs(states.back().nu - states.front().nu);
}

LatentHeatResult latent_heat_and_clapeyron(const PotentialModel& m, double theta) {
    if (!(theta > 0.0) || !(theta < m.params.theta_c))
        throw DomainError("latent heat is defined for 0 < theta < theta_c");
    const double p0 = coexistence_pressure(m, theta);
    const std::vector<PhaseState> states = equilibrium_state(m, p0, theta);
    if (states.size() != 2)
        throw DomainError("no two-phase coexistence at theta = " + std::to_string(theta));

    const PhaseState& liquid = states.front().nu < states.back().nu ? states.front() : states.back();
    const PhaseState& vapour = states.front().nu < states.back().nu ? states.back() : states.front();

    LatentHeatResult r{};
    r.latent_heat = theta * (vapour.eta - liquid.eta);
    const double clapeyron = theta * coexistence_pressure_dtheta(m, theta) * (vapour.nu - liquid.nu);
    r.clapeyron_residual = std::abs(r.latent_heat - clapeyron) / std::max(std::abs(r.latent_heat), 1e-300);
    return r;
}

std::optional<SpinodalField> spinodal(const PotentialModel& m, double theta) {
    const double u = u_schedule(m, theta);
    if (m.kind == PotentialKind::Logarithmic) {
        if (u >= 0.0)
            return std::nullopt;
        const double hbar = m.params.a * log_spinodal_field(u);
        return SpinodalField{-hbar, hbar};
    }
    if (u <= 0.0)
        return std::nullopt;
    return SpinodalField{-u, u};
}

std::vector<HysteresisSample> hysteresis_sweep(const PotentialModel& m, double theta,
                                               std::span<const double> path) {
    std::vector<HysteresisSample> out;
    if (path.empty())
        return out;
    const double u = u_schedule(m, theta);

    auto minima_at = [&](double b) {
        std::vector<StationaryPoint> pts = m.kind == PotentialKind::Logarithmic
                                               ? log_stationary_points(u, b)
                                               : quartic_stationary_points(u, b);
        std::erase_if(pts, [](const auto& pt) { return pt.kind != PointKind::Minimum; });
        return pts;
    };

    // Per-sample sweep direction: the sign of the step into the sample, with
    // flats inheriting the previous direction.
    std::vector<int> dir(path.size(), 0);
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double d = path[k] - path[k - 1];
        dir[k] = d > 0.0 ? 1 : (d < 0.0 ? -1 : dir[k - 1]);
    }
    dir[0] = path.size() > 1 ? dir[1] : 1;
    for (std::size_t k = 1; k < path.size(); ++k)
        if (dir[k] == 0)
            dir[k] = dir[k - 1] != 0 ? dir[k - 1] : 1;

    std::vector<StationaryPoint> first = minima_at(path[0]);
    double phi = first.front().phi;
    for (const auto& pt : first)
        if (pt.is_absolute_min) {
            phi = pt.phi;
            break;
        }

    out.reserve(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        const std::vector<StationaryPoint> pts = minima_at(path[k]);
        const StationaryPoint* nearest = &pts.front();
        for (const auto& pt : pts)
            if (std::abs(pt.phi - phi) < std::abs(nearest->phi - phi))
                nearest = &pt;
        phi = nearest->phi;
        out.push_back(HysteresisSample{path[k], phi, dir[k]});
    }
    return out;
}

StructureMap minima_structure_map(const PotentialModel& m, double u_min, double u_max, int n_u,
                                  double h_min, double h_max, int n_h, Exec exec) {
    if (n_u < 2 || n_h < 2 || !(u_max > u_min) || !(h_max > h_min))
        throw InvalidParams("structure map requires an at least 2x2 cell grid");

    StructureMap map;
    map.n_u = n_u;
    map.n_h = n_h;
    map.u_values.resize(static_cast<std::size_t>(n_u));
    map.h_values.resize(static_cast<std::size_t>(n_h));
    for (int i = 0; i < n_u; ++i)
        map.u_values[i] = u_min + (u_max - u_min) * (i + 0.5) / n_u;
    for (int j = 0; j < n_h; ++j)
        map.h_values[j] = h_min + (h_max - h_min) * (j + 0.5) / n_h;

    map.counts.assign(static_cast<std::size_t>(n_u) * n_h, 0);
    parallel_for(exec, map.counts.size(), [&](std::size_t idx) {
        const int iu = static_cast<int>(idx) / n_h;
        const int ih = static_cast<int>(idx) % n_h;
        map.counts[idx] = m.kind == PotentialKind::Logarithmic
                              ? log_minima_count(map.u_values[iu], map.h_values[ih])
                              : quartic_minima_count(std::max(map.u_values[iu], 0.0), map.h_values[ih]);
    });
    return map;
}

double state_equation_residual(const PotentialModel& m, double p, double theta, double nu) {
    if (m.kind != PotentialKind::Logarithmic)
        throw ModelMismatch("the cubic state equation belongs to the logarithmic model");
    const double a = m.params.a;
    const double h = h_field(m, p, theta);
    const double u = u_schedule(m, theta);
    const double x = background_f0(m, p, theta).f0_p - nu; // = 2 h_p phi on equilibria
    const double lhs = x * x * x + (2.0 * h / a) * x * x + 4.0 * u * x;
    const double rhs = 8.0 * h / a;
    return lhs - rhs;
}

} // namespace liqvap
