#pragma once

#include "liqvap/parallel.hpp"
#include "liqvap/potentials.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace liqvap {

enum class PointKind { Minimum, Maximum, Inflection };

// Curvature magnitude below which a stationary point is reported as a flexus
// (degenerate spinodal point, critical point).
inline constexpr double kInflectionTol = 1e-9;

struct StationaryPoint {
    double phi = 0.0;
    PointKind kind = PointKind::Inflection;
    double f_value = 0.0;        // free-energy density at the point
    double f_phiphi = 0.0;       // curvature used for the classification
    double f_phi_residual = 0.0; // |f_phi| after polish
    bool is_absolute_min = false;
};

// Classified stationary set of f in phi at fixed (p, theta), sorted by phi.
struct PhaseEquilibrium {
    double p = 0.0, theta = 0.0;
    double u = 0.0; // order-scale value at theta
    double h = 0.0; // field value at (p, theta)
    std::vector<StationaryPoint> points;

    // Absolute minimum. At an exact coexistence tie both minima carry the
    // absolute flag and the lower-phi one is returned here.
    const StationaryPoint& stable() const;
    // Second local minimum when present.
    const StationaryPoint* metastable() const;
    int minima_count() const;
};

// --------------------------------------------------------------------------
// (u, h) level: stationary structure of the phi-dependent part alone. Used by
// the model-level operations, the structure maps and the sweep tests; f
// values are background-free with unit energy scale.
// --------------------------------------------------------------------------

// Logarithmic family on phi in (-1, 1); the field enters as h/a.
std::vector<StationaryPoint> log_stationary_points(double u, double h_over_a);
int log_minima_count(double u, double h_over_a);

// Field magnitude (in h/a units) at which the metastable logarithmic minimum
// disappears; bisection on the minima count, absolute tolerance 1e-10.
// Requires u < 0.
double log_spinodal_field(double u);

// Quartic family with schedule value u >= 0 and field coefficient h.
std::vector<StationaryPoint> quartic_stationary_points(double u, double h);
int quartic_minima_count(double u, double h);

// --------------------------------------------------------------------------
// Model level.
// --------------------------------------------------------------------------

PhaseEquilibrium find_stationary_points(const PotentialModel& m, double p, double theta);

// Volume, entropy and free energy of every locally stable phase at (p, theta),
// ordered by phi.
struct PhaseState {
    double phi, nu, eta, gibbs;
    bool is_absolute_min;
};
std::vector<PhaseState> equilibrium_state(const PotentialModel& m, double p, double theta);

enum class Branch { Liquid, Vapour, Supercritical };
const char* branch_name(Branch b);

struct IsothermSample {
    double p, nu, phi;
    Branch branch;
};
struct IsothermPlateau {
    double p0, nu_liquid, nu_vapour;
    double phi_liquid, phi_vapour;
};
struct IsothermCurve {
    double theta = 0.0;
    std::vector<IsothermSample> samples; // ascending p, stable branch only
    std::optional<IsothermPlateau> plateau;
};

// Stable-branch isotherm over [p_min, p_max]; below theta_c the two-phase
// plateau at p0(theta) is reported separately. The per-pressure solves are
// independent and partitioned under exec.
IsothermCurve isotherm(const PotentialModel& m, double theta, double p_min, double p_max,
                       int n_samples, Exec exec = Exec::Parallel);

// nu(vapour) - nu(liquid) on the transition line; zero at and above theta_c.
double volume_jump(const PotentialModel& m, double theta);

struct LatentHeatResult {
    double latent_heat;       // theta * (eta_vapour - eta_liquid)
    double clapeyron_residual; // |L - theta p0' dnu| / max(|L|, eps)
};
LatentHeatResult latent_heat_and_clapeyron(const PotentialModel& m, double theta);

// Field values +-h at which the metastable phase disappears; empty when the
// temperature admits no metastability.
struct SpinodalField {
    double h_minus, h_plus;
};
std::optional<SpinodalField> spinodal(const PotentialModel& m, double theta);

// Branch-following sweep: continues on the nearest local minimum and jumps
// only when the tracked minimum vanishes. Path values are h/a for the
// logarithmic model and the bare field for the quartic one.
struct HysteresisSample {
    double h_over_a;
    double phi;
    int direction; // +1 up-sweep, -1 down-sweep
};
std::vector<HysteresisSample> hysteresis_sweep(const PotentialModel& m, double theta,
                                               std::span<const double> h_over_a_path);

// Local-minima count over a (u, h) rectangle, cell centers, row-major
// [iu * n_h + ih]. Cells are independent and partitioned under exec.
struct StructureMap {
    std::vector<double> u_values, h_values;
    int n_u = 0, n_h = 0;
    std::vector<int> counts;
    int at(int iu, int ih) const { return counts[static_cast<std::size_t>(iu) * n_h + ih]; }
};
StructureMap minima_structure_map(const PotentialModel& m, double u_min, double u_max, int n_u,
                                  double h_min, double h_max, int n_h,
                                  Exec exec = Exec::Parallel);

// Defect of the cubic volume state equation of the logarithmic model at
// (p, theta, nu); zero exactly on equilibrium branches. ModelMismatch for the
// quartic model.
double state_equation_residual(const PotentialModel& m, double p, double theta, double nu);

} // namespace liqvap
