#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "liqvap/equilibrium.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace liqvap;

namespace {

PotentialModel log_model(ModelParams ps = {}) { return {PotentialKind::Logarithmic, ps}; }
PotentialModel quartic_model(ModelParams ps = {}) { return {PotentialKind::Quartic, ps}; }

// Background-free logarithmic well at unit energy scale, for the grid oracle.
double log_core(double u, double b, double phi) {
    return -(u + 1.0) * std::log1p(-phi * phi) - phi * phi - 2.0 * b * phi;
}

std::vector<double> solver_minima(double u, double b) {
    std::vector<double> out;
    for (const auto& pt : log_stationary_points(u, b))
        if (pt.kind == PointKind::Minimum)
            out.push_back(pt.phi);
    return out;
}

std::vector<double> oracle_minima(double u, double b, int n_grid = 200000) {
    return oracles::grid_minima([&](double phi) { return log_core(u, b, phi); }, -1.0 + 1e-9,
                                1.0 - 1e-9, n_grid);
}

} // namespace

TEST_CASE("logarithmic stationary points on the transition line") {
    // u = -0.4, no field: minima at +-sqrt(0.4), maximum at 0
    const auto pts = log_stationary_points(-0.4, 0.0);
    REQUIRE(pts.size() == 3);
    const double root = std::sqrt(0.4); // 0.63245553203367586
    CHECK(pts[0].phi == doctest::Approx(-root).epsilon(1e-12));
    CHECK(pts[0].kind == PointKind::Minimum);
    CHECK(pts[1].phi == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(pts[1].kind == PointKind::Maximum);
    CHECK(pts[2].phi == doctest::Approx(root).epsilon(1e-12));
    CHECK(pts[2].kind == PointKind::Minimum);

    // equal depth: both flagged absolute
    CHECK(pts[0].is_absolute_min);
    CHECK(pts[2].is_absolute_min);
    CHECK(std::abs(pts[0].f_value - pts[2].f_value) < 1e-12);

    for (const auto& pt : pts)
        CHECK(pt.f_phi_residual < 1e-10);
}

TEST_CASE("logarithmic single-minimum regimes") {
    // u > 0: one minimum whatever the field
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uh(-2.0, 2.0);
    for (int i = 0; i < 50; ++i)
        CHECK(log_minima_count(0.4, uh(rng)) == 1);

    // strong field with u < 0: single minimum, compared against the dense
    // grid oracle refined by golden section
    std::vector<double> mins = solver_minima(-0.4, 1.0);
    REQUIRE(mins.size() == 1);
    CHECK(mins[0] == doctest::Approx(0.8510).epsilon(5e-4));
    const auto oracle = oracle_minima(-0.4, 1.0, 2000000);
    REQUIRE(oracle.size() == 1);
    CHECK(std::abs(mins[0] - oracle[0]) < 1e-7);
}

TEST_CASE("solver minima match dense-grid minimization") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> uu(-0.95, 0.95), uh(-2.0, 2.0);
    for (int i = 0; i < 60; ++i) {
        const double u = uu(rng), b = uh(rng);
        const auto mine = solver_minima(u, b);
        const auto grid = oracle_minima(u, b);
        REQUIRE(mine.size() == grid.size());
        for (std::size_t k = 0; k < mine.size(); ++k)
            CHECK(std::abs(mine[k] - grid[k]) < 1e-6);
    }
}

TEST_CASE("quartic stationary structure") {
    // |h| < u: two minima and the interior maximum at -h
    {
        const auto pts = quartic_stationary_points(0.5, 0.2);
        REQUIRE(pts.size() == 3);
        CHECK(pts[0].phi == -0.5);
        CHECK(pts[0].kind == PointKind::Minimum);
        CHECK(pts[1].phi == doctest::Approx(-0.2).epsilon(1e-14));
        CHECK(pts[1].kind == PointKind::Maximum);
        CHECK(pts[2].phi == 0.5);
        CHECK(pts[2].kind == PointKind::Minimum);
        CHECK(pts[2].is_absolute_min); // h > 0 picks the right well
        CHECK(!pts[0].is_absolute_min);
        for (const auto& pt : pts)
            CHECK(pt.f_phi_residual < 1e-10);
    }
    // h = 0: equal depth
    {
        const auto pts = quartic_stationary_points(0.5, 0.0);
        CHECK(pts.front().is_absolute_min);
        CHECK(pts.back().is_absolute_min);
        CHECK(pts.front().f_value == pts.back().f_value);
    }
    // h < 0 mirrors
    CHECK(quartic_stationary_points(0.5, -0.2).front().is_absolute_min);
    // |h| > u: the abandoned well flattens to a flexus
    {
        const auto pts = quartic_stationary_points(0.5, 0.8);
        REQUIRE(pts.size() == 2);
        CHECK(pts[0].kind == PointKind::Inflection);
        CHECK(pts[1].kind == PointKind::Minimum);
        CHECK(pts[1].phi == 0.5);
    }
    // |h| = u exactly: degenerate joint
    {
        const auto pts = quartic_stationary_points(0.5, 0.5);
        REQUIRE(pts.size() == 2);
        CHECK(pts[0].kind == PointKind::Inflection);
        CHECK(pts[1].kind == PointKind::Minimum);
    }
    // u = 0: single flat well at the origin
    {
        const auto pts = quartic_stationary_points(0.0, 0.3);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].phi == 0.0);
        CHECK(pts[0].kind == PointKind::Minimum);
    }
}

TEST_CASE("classification is consistent with the stored curvature") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> uu(-0.9, 0.9), uh(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
        for (const auto& pt : log_stationary_points(uu(rng), uh(rng))) {
            if (pt.kind == PointKind::Minimum && std::abs(pt.f_phiphi) >= kInflectionTol)
                CHECK(pt.f_phiphi > 0.0);
            if (pt.kind == PointKind::Maximum)
                CHECK(pt.f_phiphi < 0.0);
        }
    }
}

TEST_CASE("model-level equilibrium and argmin invariance") {
    const double theta = 0.6;
    const PotentialModel m = log_model();
    const double p0 = coexistence_pressure(m, theta);
    const PhaseEquilibrium eq = find_stationary_points(m, p0, theta);
    CHECK(eq.u == doctest::Approx(-0.4).epsilon(1e-15));
    CHECK(eq.h == 0.0);
    REQUIRE(eq.minima_count() == 2);
    CHECK(std::abs(eq.points.front().f_value - eq.points.back().f_value) < 1e-12);
    CHECK(eq.stable().phi == eq.points.front().phi); // tie reports the lower-phi phase first
    CHECK(eq.metastable() != nullptr);

    // adding any background g(p, theta) leaves the stationary set in place
    ModelParams shifted;
    shifted.R = 2.7;
    shifted.c = 0.4;
    shifted.p_ref = 0.3;
    shifted.theta_ref = 1.9;
    const PhaseEquilibrium eq2 = find_stationary_points(log_model(shifted), p0, theta);
    REQUIRE(eq2.points.size() == eq.points.size());
    for (std::size_t i = 0; i < eq.points.size(); ++i)
        CHECK(std::abs(eq.points[i].phi - eq2.points[i].phi) < 1e-10);

    // scaling the well and the field together: a -> s a with the pressure
    // offset from the transition line scaled by s leaves phi-bar unchanged
    const double s = 3.0;
    ModelParams scaled;
    scaled.a = s;
    const double p1 = p0 + 0.04;
    const double p2 = p0 + s * (p1 - p0);
    const PhaseEquilibrium eq_base = find_stationary_points(m, p1, theta);
    const PhaseEquilibrium eq_scaled = find_stationary_points(log_model(scaled), p2, theta);
    REQUIRE(eq_base.points.size() == eq_scaled.points.size());
    for (std::size_t i = 0; i < eq_base.points.size(); ++i)
        CHECK(std::abs(eq_base.points[i].phi - eq_scaled.points[i].phi) < 1e-10);
}

TEST_CASE("equilibrium entropies match the closed forms") {
    // quartic: eta at the wells from the schedule and field derivatives
    ModelParams qs;
    qs.dnu_ref = 1.1;
    qs.beta_q = 1.0;
    const PotentialModel qm = quartic_model(qs);
    for (double theta : {0.45, 0.7, 0.9}) {
        for (double dp : {-0.05, 0.0, 0.08}) {
            const double p = coexistence_pressure(qm, theta) + dp;
            if (p <= 0.0)
                continue;
            const double u = u_schedule(qm, theta);
            const double du = u_schedule_dtheta(qm, theta);
            const double h = h_field(qm, p, theta);
            const double h_th = h_field_dtheta(qm, p, theta);
            const double eta0 = -background_f0(qm, p, theta).f0_theta;
            for (double sgn : {-1.0, 1.0}) {
                const double expected = eta0 + du * u * u * u + sgn * (2.0 / 3.0) * h_th * u * u * u +
                                        sgn * 2.0 * h * u * u * du;
                const double eta = make_thermo_point(qm, p, theta, sgn * u).eta;
                CHECK(eta == doctest::Approx(expected).epsilon(1e-10));
            }
        }
    }

    // logarithmic: eta-bar = -(f0)_theta + a u' ln(1 - phi^2) + 2 h_theta phi
    const PotentialModel lm = log_model();
    for (double theta : {0.5, 0.7, 0.9}) {
        const double p = coexistence_pressure(lm, theta) * 1.05;
        for (const PhaseState& st : equilibrium_state(lm, p, theta)) {
            const double du = u_schedule_dtheta(lm, theta);
            const double h_th = h_field_dtheta(lm, p, theta);
            const double expected = -background_f0(lm, p, theta).f0_theta +
                                    lm.params.a * du * std::log1p(-st.phi * st.phi) +
                                    2.0 * h_th * st.phi;
            CHECK(st.eta == doctest::Approx(expected).epsilon(1e-10));
        }
    }

    // quartic at the critical temperature: the volume jump is gone and the
    // well entropy collapses onto the background value
    {
        const double theta = qs.theta_c;
        const double p0c = coexistence_pressure(qm, theta);
        const auto states = equilibrium_state(qm, p0c, theta);
        REQUIRE(states.size() == 1);
        const double eta0 = -background_f0(qm, p0c, theta).f0_theta;
        CHECK(states[0].eta == doctest::Approx(eta0).epsilon(1e-12));
    }
}

TEST_CASE("isotherm plateau and supercritical continuity") {
    // logarithmic: plateau length 4 h_p sqrt(|u|)
    const PotentialModel lm = log_model();
    for (double theta : {0.55, 0.7, 0.85}) {
        const double p0 = coexistence_pressure(lm, theta);
        const IsothermCurve c = isotherm(lm, theta, 0.6 * p0, 1.6 * p0, 101);
        REQUIRE(c.plateau.has_value());
        const double u = u_schedule(lm, theta);
        CHECK(c.plateau->nu_vapour - c.plateau->nu_liquid ==
              doctest::Approx(4.0 * std::sqrt(-u)).epsilon(1e-10));
        CHECK(c.plateau->p0 == p0);
        for (const auto& s : c.samples) {
            CHECK(s.nu > 0.0);
            CHECK((s.branch == Branch::Liquid || s.branch == Branch::Vapour));
        }
    }

    // quartic: plateau length (4/3) u^3
    ModelParams qs;
    qs.dnu_ref = 8.0 / 3.0;
    qs.beta_q = 1.0;
    const PotentialModel qm = quartic_model(qs);
    {
        const double theta = 0.5;
        const double p0 = coexistence_pressure(qm, theta);
        const IsothermCurve c = isotherm(qm, theta, 0.5 * p0, 2.0 * p0, 64);
        REQUIRE(c.plateau.has_value());
        const double u = u_schedule(qm, theta); // = 1 by construction
        CHECK(u == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.plateau->nu_vapour - c.plateau->nu_liquid ==
              doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    }

    // above theta_c: no plateau, nu continuous in p
    {
        const double theta = 1.2;
        const IsothermCurve c = isotherm(lm, theta, 0.5, 2.5, 400);
        CHECK(!c.plateau.has_value());
        for (std::size_t i = 1; i < c.samples.size(); ++i) {
            CHECK(c.samples[i].branch == Branch::Supercritical);
            CHECK(std::abs(c.samples[i].nu - c.samples[i - 1].nu) <
                  0.2 * std::abs(c.samples[i - 1].nu));
        }
    }

    // crushing pressures drive the liquid volume negative
    CHECK_THROWS_AS(isotherm(lm, 0.2, 0.2, 0.5, 16), NonPositiveVolume);

    // serial and parallel scans agree exactly
    {
        const double theta = 0.6;
        const double p0 = coexistence_pressure(lm, theta);
        const IsothermCurve a = isotherm(lm, theta, 0.5 * p0, 1.5 * p0, 97, Exec::Serial);
        const IsothermCurve b = isotherm(lm, theta, 0.5 * p0, 1.5 * p0, 97, Exec::Parallel);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            CHECK(a.samples[i].nu == b.samples[i].nu);
            CHECK(a.samples[i].phi == b.samples[i].phi);
        }
    }
}

TEST_CASE("volume jump") {
    ModelParams qs;
    qs.dnu_ref = 8.0 / 3.0;
    qs.beta_q = 1.0;
    const PotentialModel qm = quartic_model(qs);
    CHECK(volume_jump(qm, 0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(volume_jump(qm, qs.theta_c) == 0.0);
    CHECK(volume_jump(qm, 1.4) == 0.0);

    const PotentialModel lm = log_model();
    CHECK(volume_jump(lm, 0.6) == doctest::Approx(2.5298221281347035).epsilon(1e-10));
    // agrees with the closed form over a temperature sweep
    for (double theta : oracles::linspace(0.45, 0.95, 6)) {
        const double u = u_schedule(lm, theta);
        CHECK(volume_jump(lm, theta) == doctest::Approx(4.0 * std::sqrt(-u)).epsilon(1e-10));
    }
}

TEST_CASE("latent heat and the coexistence-slope identity") {
    const PotentialModel lm = log_model();
    ModelParams qs;
    qs.dnu_ref = 1.3;
    qs.beta_q = 0.5;
    const PotentialModel qm = quartic_model(qs);

    for (double theta : oracles::linspace(0.45, 0.95, 10)) {
        for (const PotentialModel& m : {lm, qm}) {
            const LatentHeatResult lh = latent_heat_and_clapeyron(m, theta);
            CHECK(lh.clapeyron_residual < 1e-8);
            CHECK(lh.latent_heat > 0.0);
        }
    }

    // mean-field vanishing of the latent heat approaching theta_c: past the
    // peak the decay follows sqrt(theta_c - theta)
    double prev = 1e300;
    for (int k = 5; k <= 20; ++k) {
        const double theta = 1.0 - std::pow(2.0, -k);
        const double L = latent_heat_and_clapeyron(lm, theta).latent_heat;
        CHECK(L < prev);
        prev = L;
    }
    CHECK(prev < 0.03); // ~ 4 A sqrt(2^-20)
    const double L14 = latent_heat_and_clapeyron(lm, 1.0 - std::pow(2.0, -14)).latent_heat;
    const double L20 = latent_heat_and_clapeyron(lm, 1.0 - std::pow(2.0, -20)).latent_heat;
    CHECK(L20 / L14 == doctest::Approx(std::pow(2.0, -3)).epsilon(0.02));

    // quartic with a square-root jump: L stays finite while the schedule
    // slope blows up
    CHECK(std::isfinite(latent_heat_and_clapeyron(qm, 1.0 - 1e-6).latent_heat));
    CHECK(std::abs(u_schedule_dtheta(qm, 1.0 - 1e-6)) > 1e3);

    CHECK_THROWS_AS(latent_heat_and_clapeyron(lm, 1.1), DomainError);
}

TEST_CASE("spinodal field location and bounds") {
    for (double u = -0.1; u > -0.95; u -= 0.1) {
        const double hbar = log_spinodal_field(u);
        const double lower = 2.0 * std::pow(std::abs(u) / 3.0, 1.5);
        CHECK(hbar > lower);
        CHECK(hbar < std::abs(u));
        // minima count flips across the located field
        CHECK(log_minima_count(u, hbar - 1e-6) == 2);
        CHECK(log_minima_count(u, hbar + 1e-6) == 1);
    }
    CHECK_THROWS_AS(log_spinodal_field(0.0), DomainError);

    const PotentialModel lm = log_model();
    const auto sp = spinodal(lm, 0.6);
    REQUIRE(sp.has_value());
    CHECK(sp->h_plus == doctest::Approx(log_spinodal_field(-0.4)).epsilon(1e-12));
    CHECK(sp->h_minus == -sp->h_plus);
    CHECK(!spinodal(lm, 1.0).has_value());
    CHECK(!spinodal(lm, 1.3).has_value());

    ModelParams qps;
    qps.dnu_ref = 1.7;
    const PotentialModel qm = quartic_model(qps);
    const double u = u_schedule(qm, 0.55);
    const auto qsp = spinodal(qm, 0.55);
    REQUIRE(qsp.has_value());
    CHECK(qsp->h_plus == u);
    CHECK(qsp->h_minus == -u);
    CHECK(!spinodal(qm, 1.2).has_value());
}

TEST_CASE("hysteresis sweeps reproduce the three field-response curves") {
    const PotentialModel lm = log_model();
    const int n = 400;
    std::vector<double> path;
    for (int k = 0; k <= n; ++k)
        path.push_back(-1.0 + 2.0 * k / n);
    for (int k = 1; k <= n; ++k)
        path.push_back(1.0 - 2.0 * k / n);

    // u = -0.4 (theta = 0.6): a two-branch loop jumping at the spinodal
    {
        const auto sweep = hysteresis_sweep(lm, 0.6, path);
        const double hbar = log_spinodal_field(-0.4);
        const double step = 2.0 / n;
        double up_jump = 0.0, down_jump = 0.0;
        for (std::size_t i = 1; i < sweep.size(); ++i) {
            if (std::abs(sweep[i].phi - sweep[i - 1].phi) > 0.5) {
                if (sweep[i].direction > 0)
                    up_jump = sweep[i].h_over_a;
                else
                    down_jump = sweep[i].h_over_a;
            }
        }
        CHECK(std::abs(up_jump - hbar) <= step + 1e-12);
        CHECK(std::abs(down_jump + hbar) <= step + 1e-12);
        // between the spinodals the two branches disagree (the loop is open)
        const auto branch_at = [&](double h, int dir) {
            for (const auto& s : sweep)
                if (s.direction == dir && std::abs(s.h_over_a - h) < 1e-9)
                    return s.phi;
            return 0.0;
        };
        CHECK(std::abs(branch_at(0.0, 1) - branch_at(0.0, -1)) > 1.0);
        // and no jump happens at zero field
        for (std::size_t i = 1; i < sweep.size(); ++i)
            if (std::abs(sweep[i].h_over_a) < 0.05)
                CHECK(std::abs(sweep[i].phi - sweep[i - 1].phi) < 0.3);
    }

    // u = 0 (theta = theta_c): single-valued odd curve through the origin
    {
        const auto sweep = hysteresis_sweep(lm, 1.0, path);
        for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
            const auto& fwd = sweep[i];         // at h
            const auto& bwd = sweep[2 * n - i]; // same h on the return sweep
            CHECK(std::abs(fwd.phi - bwd.phi) < 1e-9);
            const auto& mirror = sweep[n - i]; // at -h
            CHECK(std::abs(fwd.phi + mirror.phi) < 1e-9);
        }
    }

    // u = 0.4 (theta = 1.4): single-valued, monotone, no jumps
    {
        const auto sweep = hysteresis_sweep(lm, 1.4, path);
        for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) {
            CHECK(sweep[i].phi > sweep[i - 1].phi);
            CHECK(std::abs(sweep[i].phi - sweep[i - 1].phi) < 0.1);
        }
        for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i)
            CHECK(std::abs(sweep[i].phi - sweep[2 * n - i].phi) < 1e-9);
    }
}

TEST_CASE("minima structure map") {
    const PotentialModel lm = log_model();

    // u > 0 half-plane: always a single minimum
    const StructureMap pos = minima_structure_map(lm, 0.01, 0.9, 12, -1.5, 1.5, 12);
    for (int c : pos.counts)
        CHECK(c == 1);

    // u < 0 with the field under the lower spinodal bound: always two
    StructureMap neg = minima_structure_map(lm, -0.9, -0.1, 12, -0.001, 0.001, 4);
    for (int iu = 0; iu < neg.n_u; ++iu) {
        const double u = neg.u_values[iu];
        const double lower = 2.0 * std::pow(std::abs(u) / 3.0, 1.5);
        for (int ih = 0; ih < neg.n_h; ++ih) {
            CHECK(std::abs(neg.h_values[ih]) < lower);
            CHECK(neg.at(iu, ih) == 2);
        }
    }

    // mirror symmetry in the field and serial/parallel agreement
    const StructureMap a = minima_structure_map(lm, -0.8, 0.8, 16, -1.0, 1.0, 16, Exec::Serial);
    const StructureMap b = minima_structure_map(lm, -0.8, 0.8, 16, -1.0, 1.0, 16, Exec::Parallel);
    CHECK(a.counts == b.counts);
    for (int iu = 0; iu < a.n_u; ++iu)
        for (int ih = 0; ih < a.n_h; ++ih)
            CHECK(a.at(iu, ih) == a.at(iu, a.n_h - 1 - ih));

    // quartic map: two wells strictly inside |h| < u
    ModelParams qs;
    qs.dnu_ref = 2.0;
    const StructureMap qmap =
        minima_structure_map(quartic_model(qs), 0.05, 0.95, 10, -1.2, 1.2, 10);
    for (int iu = 0; iu < qmap.n_u; ++iu)
        for (int ih = 0; ih < qmap.n_h; ++ih) {
            const int expect = std::abs(qmap.h_values[ih]) < qmap.u_values[iu] ? 2 : 1;
            CHECK(qmap.at(iu, ih) == expect);
        }
}

TEST_CASE("cubic volume state equation") {
    const PotentialModel lm = log_model();

    // identically zero on every equilibrium branch
    std::mt19937 rng(57);
    std::uniform_real_distribution<double> ut(0.45, 0.95), uf(-0.4, 0.4);
    for (int i = 0; i < 100; ++i) {
        const double theta = ut(rng);
        const double p = coexistence_pressure(lm, theta) * (1.0 + 0.3 * uf(rng));
        for (const PhaseState& st : equilibrium_state(lm, p, theta))
            CHECK(std::abs(state_equation_residual(lm, p, theta, st.nu)) < 1e-10);
    }

    // h = 0 with the background volume: the trivial branch
    const double theta = 0.7;
    const double p0 = coexistence_pressure(lm, theta);
    const double nu0 = background_f0(lm, p0, theta).f0_p;
    CHECK(state_equation_residual(lm, p0, theta, nu0) == 0.0);

    // off-equilibrium volumes do not satisfy the cubic
    CHECK(std::abs(state_equation_residual(lm, p0, theta, nu0 + 0.37)) > 1e-6);

    CHECK_THROWS_AS(state_equation_residual(quartic_model(), 1.0, 0.5, 1.0), ModelMismatch);
}

TEST_CASE("absolute-minimum estimate and decoupling bound") {
    // |u|(1-|u|)/(|h|/a+|u|) <= 1 - phi^2 <= (1-|u|)/(|h|/a+1), and the
    // looser bound 1 - phi^2 < (a/|h|)(1-|u|)
    for (int i = 0; i < 20; ++i) {
        const double u = -1.0 + (i + 0.5) / 20.0;
        for (int j = 0; j < 20; ++j) {
            const double b = -2.0 + 4.0 * (j + 0.5) / 20.0;
            const auto pts = log_stationary_points(u, b);
            const StationaryPoint* best = nullptr;
            for (const auto& pt : pts)
                if (pt.is_absolute_min)
                    best = &pt;
            REQUIRE(best != nullptr);
            const double one = 1.0 - best->phi * best->phi;
            const double au = std::abs(u), ab = std::abs(b);
            CHECK(one >= au * (1.0 - au) / (ab + au) - 1e-12);
            CHECK(one <= (1.0 - au) / (ab + 1.0) + 1e-12);
            CHECK(one < (1.0 - au) / ab);
        }
    }
}

TEST_CASE("coexistence degeneracy across temperatures") {
    const PotentialModel lm = log_model();
    ModelParams qs;
    qs.dnu_ref = 1.4;
    const PotentialModel qm = quartic_model(qs);
    for (double theta : oracles::linspace(0.45, 0.95, 8)) {
        for (const PotentialModel& m : {lm, qm}) {
            const PhaseEquilibrium eq =
                find_stationary_points(m, coexistence_pressure(m, theta), theta);
            REQUIRE(eq.minima_count() == 2);
            double f[2];
            int k = 0;
            for (const auto& pt : eq.points)
                if (pt.kind == PointKind::Minimum)
                    f[k++] = pt.f_value;
            CHECK(std::abs(f[0] - f[1]) < 1e-12 * std::max(1.0, std::abs(f[0])));
        }
    }
}
