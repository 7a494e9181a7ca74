#pragma once

#include "liqvap/errors.hpp"
#include "liqvap/potentials.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace liqvap {

struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& reason)
        : Error("ParseError", "line " + std::to_string(line_) + ": " + reason), line(line_) {}
};

struct ValidationError : Error {
    std::string key, constraint;
    ValidationError(std::string key_, std::string constraint_)
        : Error("ValidationError", key_ + " must be " + constraint_),
          key(std::move(key_)), constraint(std::move(constraint_)) {}
};

// Fully validated run description: model block plus one parameter block per
// command, all keys defaulted. Parsing is total; a returned RunConfig is
// ready to run as-is.
struct RunConfig {
    PotentialKind kind = PotentialKind::Logarithmic;
    ModelParams params;
    std::uint64_t seed = 0;

    struct Isotherm {
        double theta = 0.8;
        double p_min = 0.0, p_max = 0.0; // 0 selects [p0/2, 3 p0 / 2] at theta
        int n = 201;
    } isotherm;

    struct PhaseDiagram {
        double theta_min = 0.5, theta_max = 0.99;
        int n = 25;
    } phase_diagram;

    struct Minima {
        double u_min = -0.9, u_max = 0.9;
        int n_u = 60;
        double h_min = -1.0, h_max = 1.0;
        int n_h = 60;
    } minima;

    struct Spinodal {
        double theta_min = 0.5, theta_max = 0.99;
        int n = 25;
    } spinodal;

    struct Hysteresis {
        double theta = 0.6;
        double h_amplitude = 1.0;
        int n_steps = 400;
    } hysteresis;

    struct Relax {
        double phi0 = 0.1;
        double theta = 0.6;
        double p = 0.0; // 0 selects the coexistence pressure at theta
        std::vector<std::pair<double, double>> schedule; // overrides p when non-empty
        double t_end = 20.0;
        double abs_tol = 1e-10, rel_tol = 1e-8;
        int record_every = 1;
    } relax;

    struct Thermal {
        // vapour-side start at a moderate temperature: with the default
        // parameters theta*eta_theta stays positive along the whole run,
        // which the liquid branch near theta_c does not guarantee
        double phi0 = -0.1;
        double theta0 = 0.4;

        double p = 0.0;
        std::vector<std::pair<double, double>> schedule;
        double r = 0.0;
        double t_end = 10.0;
        double abs_tol = 1e-10, rel_tol = 1e-8;
        int record_every = 1;
    } thermal;

    struct Pde1d {
        int n = 401;
        double dx = 0.05;
        double x_min = std::numeric_limits<double>::quiet_NaN(); // NaN centers the domain
        std::string bc = "noflux"; // or "dirichlet"
        double phi_left = -0.6, phi_right = 0.6;
        double theta = 0.6;
        double p = 0.0; // 0 selects the coexistence pressure at theta
        double dt = 0.0;
        double t_end = 50.0;
        int record_every = 100;
        std::string init = "step"; // step | kink | uniform
        double init_value = 0.0;
        std::string density = "constant"; // constant | frozen
        std::string scheme = "explicit";  // explicit | semi_implicit
        double steady_tol = 0.0;
    } pde1d;

    struct Validate {
        int n_samples = 200;
        int k_max = 20;
        int n_theta = 5;
        int n_p = 5;
    } validate;
};

// Parses the sectioned key-value document ([model], [run.<command>]; one
// "name = value" per line; '#' comments). Unknown sections or keys, duplicate
// keys and malformed values raise ParseError with line numbers; out-of-range
// values raise ValidationError with the key and violated constraint.
RunConfig parse_config(const std::string& text);

// Applies one "section.key=value" override (the --set flag).
void apply_override(RunConfig& cfg, const std::string& assignment);

// Effective settings relevant to a command, for the CSV metadata echo.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg,
                                                             const std::string& command);

} // namespace liqvap
