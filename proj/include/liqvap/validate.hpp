#pragma once

#include "liqvap/dynamics.hpp"
#include "liqvap/equilibrium.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace liqvap {

// Outcome of one machine-checkable audit. pass is equivalent to every error
// staying below the check's declared tolerance; failures report the worst
// offending point instead of throwing.
struct AuditReport {
    std::string check;
    std::string grid; // human-readable description of the sample set
    std::size_t n_points = 0;
    std::size_t n_skipped = 0;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string offending; // worst point, also filled on pass for reference
};

// Every analytic partial against central (one-sided at kinks and near
// theta_c) finite differences over randomized admissible points. Deterministic
// for a fixed seed; points are generated up front and scanned under exec.
AuditReport check_derivatives(const PotentialModel& m, int n_samples, std::uint64_t seed,
                              Exec exec = Exec::Parallel);

// Envelope relations at equilibria: the p- and theta-derivatives of the
// per-phase equilibrium free energy, with the minimum re-solved at every
// perturbed point, against f_p and f_theta at the unperturbed minimum.
// Points whose tracked phase dies under perturbation are skipped and counted.
AuditReport check_gibbs_envelope(const PotentialModel& m, std::span<const double> theta_grid,
                                 std::span<const double> p_grid);

// Second-Law content of a stored trajectory: dissipation >= 0 everywhere and
// the balance-residual column within 10x the integrator tolerance.
AuditReport check_dissipation(const Trajectory& traj);

struct EntropyScanResult {
    AuditReport report;
    double fitted_exponent = 0.0; // slope of log|excess entropy| vs log(theta_c - theta)
    double sup_excess = 0.0;
    bool bounded = false; // no divergence as theta -> theta_c
};

// Equilibrium entropy along the transition line on the dyadic grid
// theta = theta_c (1 - 2^-k), k = 1..k_max; the exponent is fitted on the
// last 10 points. eta0_correction(p, theta), when given, is added to the
// background entropy before the excess is formed.
EntropyScanResult entropy_regularity_scan(const PotentialModel& m, int k_max = 20,
                                          const std::function<double(double, double)>& eta0_correction = {});

} // namespace liqvap
