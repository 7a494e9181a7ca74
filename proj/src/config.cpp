#include "liqvap/config.hpp"

#include "liqvap/csv.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <map>
#include <sstream>

namespace liqvap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ValidationError(key, "a number (got '" + t + "')");
    }
    if (used != t.size())
        throw ValidationError(key, "a number (got '" + t + "')");
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9)
        throw ValidationError(key, "an integer (got '" + trim(v) + "')");
    return static_cast<int>(d);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ValidationError(key, "an unsigned integer (got '" + t + "')");
    return out;
}

double positive(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (!(d > 0.0))
        throw ValidationError(key, "> 0");
    return d;
}

double non_negative(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (!(d >= 0.0))
        throw ValidationError(key, ">= 0");
    return d;
}

int at_least(const std::string& key, const std::string& v, int bound) {
    const int n = parse_int(key, v);
    if (n < bound)
        throw ValidationError(key, ">= " + std::to_string(bound));
    return n;
}

std::string keyword(const std::string& key, const std::string& v,
                    std::initializer_list<const char*> allowed) {
    const std::string t = trim(v);
    for (const char* a : allowed)
        if (t == a)
            return t;
    std::string msg = "one of {";
    bool first = true;
    for (const char* a : allowed) {
        if (!first)
            msg += ", ";
        msg += a;
        first = false;
    }
    msg += "}";
    throw ValidationError(key, msg);
}

// "t:p; t:p; ..." with strictly increasing times and positive pressures.
std::vector<std::pair<double, double>> parse_schedule(const std::string& key, const std::string& v) {
    std::vector<std::pair<double, double>> knots;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty())
            continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ValidationError(key, "a 't:p; t:p; ...' list");
        const double t = parse_double(key, item.substr(0, colon));
        const double p = parse_double(key, item.substr(colon + 1));
        if (!(p > 0.0))
            throw ValidationError(key, "a schedule with pressures > 0");
        if (!knots.empty() && !(t > knots.back().first))
            throw ValidationError(key, "a schedule with strictly increasing times");
        knots.emplace_back(t, p);
    }
    if (knots.empty())
        throw ValidationError(key, "a non-empty 't:p; t:p; ...' list");
    return knots;
}

// Applies one key in one section. Returns false when the key is unknown.
bool apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
    const std::string full = section + "." + key;
    ModelParams& ps = cfg.params;

    if (section == "model") {
        if (key == "kind") {
            cfg.kind = keyword(full, value, {"logarithmic", "quartic"}) == "quartic"
                           ? PotentialKind::Quartic
                           : PotentialKind::Logarithmic;
        } else if (key == "a") ps.a = positive(full, value);
        else if (key == "tau") ps.tau = positive(full, value);
        else if (key == "kappa") ps.kappa = non_negative(full, value);
        else if (key == "theta_c") ps.theta_c = positive(full, value);
        else if (key == "p_c") ps.p_c = positive(full, value);
        else if (key == "q") ps.q = positive(full, value);
        else if (key == "beta") ps.beta = positive(full, value);
        else if (key == "A") ps.A = positive(full, value);
        else if (key == "R") ps.R = positive(full, value);
        else if (key == "c") ps.c = positive(full, value);
        else if (key == "p_ref") ps.p_ref = positive(full, value);
        else if (key == "theta_ref") ps.theta_ref = positive(full, value);
        else if (key == "dnu_ref") ps.dnu_ref = non_negative(full, value);
        else if (key == "beta_q") ps.beta_q = positive(full, value);
        else if (key == "seed") cfg.seed = parse_u64(full, value);
        else return false;
        return true;
    }

    if (section == "run.isotherm") {
        auto& b = cfg.isotherm;
        if (key == "theta") b.theta = positive(full, value);
        else if (key == "p_min") b.p_min = non_negative(full, value);
        else if (key == "p_max") b.p_max = non_negative(full, value);
        else if (key == "n") b.n = at_least(full, value, 2);
        else return false;
        return true;
    }

    if (section == "run.phase-diagram") {
        auto& b = cfg.phase_diagram;
        if (key == "theta_min") b.theta_min = positive(full, value);
        else if (key == "theta_max") b.theta_max = positive(full, value);
        else if (key == "n") b.n = at_least(full, value, 2);
        else return false;
        return true;
    }

    if (section == "run.minima") {
        auto& b = cfg.minima;
        if (key == "u_min") b.u_min = parse_double(full, value);
        else if (key == "u_max") b.u_max = parse_double(full, value);
        else if (key == "n_u") b.n_u = at_least(full, value, 2);
        else if (key == "h_min") b.h_min = parse_double(full, value);
        else if (key == "h_max") b.h_max = parse_double(full, value);
        else if (key == "n_h") b.n_h = at_least(full, value, 2);
        else return false;
        return true;
    }

    if (section == "run.spinodal") {
        auto& b = cfg.spinodal;
        if (key == "theta_min") b.theta_min = positive(full, value);
        else if (key == "theta_max") b.theta_max = positive(full, value);
        else if (key == "n") b.n = at_least(full, value, 2);
        else return false;
        return true;
    }

    if (section == "run.hysteresis") {
        auto& b = cfg.hysteresis;
        if (key == "theta") b.theta = positive(full, value);
        else if (key == "h_amplitude") b.h_amplitude = positive(full, value);
        else if (key == "n_steps") b.n_steps = at_least(full, value, 8);
        else return false;
        return true;
    }

    if (section == "run.relax" || section == "run.thermal") {
        const bool thermal = section == "run.thermal";
        auto set_common = [&](auto& b) -> bool {
            if (key == "phi0") b.phi0 = parse_double(full, value);
            else if (key == "p") b.p = non_negative(full, value);
            else if (key == "schedule") b.schedule = parse_schedule(full, value);
            else if (key == "t_end") b.t_end = positive(full, value);
            else if (key == "abs_tol") b.abs_tol = positive(full, value);
            else if (key == "rel_tol") b.rel_tol = positive(full, value);
            else if (key == "record_every") b.record_every = at_least(full, value, 1);
            else return false;
            return true;
        };
        if (thermal) {
            if (key == "theta0") { cfg.thermal.theta0 = positive(full, value); return true; }
            if (key == "r") { cfg.thermal.r = non_negative(full, value); return true; }
            return set_common(cfg.thermal);
        }
        if (key == "theta") { cfg.relax.theta = positive(full, value); return true; }
        return set_common(cfg.relax);
    }

    if (section == "run.pde1d") {
        auto& b = cfg.pde1d;
        if (key == "n") b.n = at_least(full, value, 3);
        else if (key == "dx") b.dx = positive(full, value);
        else if (key == "x_min") b.x_min = parse_double(full, value);
        else if (key == "bc") b.bc = keyword(full, value, {"noflux", "dirichlet"});
        else if (key == "phi_left") b.phi_left = parse_double(full, value);
        else if (key == "phi_right") b.phi_right = parse_double(full, value);
        else if (key == "theta") b.theta = positive(full, value);
        else if (key == "p") b.p = non_negative(full, value);
        else if (key == "dt") b.dt = non_negative(full, value);
        else if (key == "t_end") b.t_end = positive(full, value);
        else if (key == "record_every") b.record_every = at_least(full, value, 1);
        else if (key == "init") b.init = keyword(full, value, {"step", "kink", "uniform"});
        else if (key == "init_value") b.init_value = parse_double(full, value);
        else if (key == "density") b.density = keyword(full, value, {"constant", "frozen"});
        else if (key == "scheme") b.scheme = keyword(full, value, {"explicit", "semi_implicit"});
        else if (key == "steady_tol") b.steady_tol = non_negative(full, value);
        else return false;
        return true;
    }

    if (section == "run.validate") {
        auto& b = cfg.validate;
        if (key == "n_samples") b.n_samples = at_least(full, value, 1);
        else if (key == "k_max") b.k_max = at_least(full, value, 4);
        else if (key == "n_theta") b.n_theta = at_least(full, value, 1);
        else if (key == "n_p") b.n_p = at_least(full, value, 1);
        else return false;
        return true;
    }

    return false;
}

const char* kKnownSections[] = {"model",         "run.isotherm", "run.phase-diagram",
                                "run.minima",    "run.spinodal", "run.hysteresis",
                                "run.relax",     "run.thermal",  "run.pde1d",
                                "run.validate"};

bool known_section(const std::string& s) {
    return std::find(std::begin(kKnownSections), std::end(kKnownSections), s) !=
           std::end(kKnownSections);
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, int> first_line;
    std::string section;

    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section))
                throw ParseError(lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(lineno, "expected 'key = value'");
        if (section.empty())
            throw ParseError(lineno, "key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(lineno, "empty key");

        const std::string full = section + "." + key;
        if (auto it = first_line.find(full); it != first_line.end())
            throw ParseError(lineno, "duplicate key '" + full + "' (lines " +
                                         std::to_string(it->second) + " and " +
                                         std::to_string(lineno) + ")");
        first_line[full] = lineno;

        if (!apply_key(cfg, section, key, value))
            throw ParseError(lineno, "unknown key '" + key + "' in section [" + section + "]");
    }

    cfg.params.validate(); // belt-and-braces; per-key checks already ran
    return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ValidationError(assignment, "of the form section.key=value");
    const std::string path = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    const auto dot = path.rfind('.');
    if (dot == std::string::npos)
        throw ValidationError(assignment, "of the form section.key=value");
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    if (!known_section(section))
        throw ValidationError(path, "in a known section");
    if (!apply_key(cfg, section, key, value))
        throw ValidationError(path, "a known key");
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg,
                                                             const std::string& command) {
    std::vector<std::pair<std::string, std::string>> kv;
    auto num = [&](const std::string& k, double v) { kv.emplace_back(k, format_double(v)); };
    auto str = [&](const std::string& k, const std::string& v) { kv.emplace_back(k, v); };

    str("command", command);
    str("model.kind", cfg.kind == PotentialKind::Quartic ? "quartic" : "logarithmic");
    const ModelParams& ps = cfg.params;
    num("model.a", ps.a);
    num("model.tau", ps.tau);
    num("model.kappa", ps.kappa);
    num("model.theta_c", ps.theta_c);
    num("model.p_c", ps.p_c);
    num("model.q", ps.q);
    num("model.beta", ps.beta);
    num("model.A", ps.A);
    num("model.R", ps.R);
    num("model.c", ps.c);
    num("model.p_ref", ps.p_ref);
    num("model.theta_ref", ps.theta_ref);
    num("model.dnu_ref", ps.dnu_ref);
    num("model.beta_q", ps.beta_q);
    str("model.seed", std::to_string(cfg.seed));

    auto schedule_str = [](const std::vector<std::pair<double, double>>& knots) {
        std::string s;
        for (const auto& [t, p] : knots) {
            if (!s.empty())
                s += "; ";
            s += format_double(t) + ":" + format_double(p);
        }
        return s;
    };

    if (command == "isotherm") {
        num("run.isotherm.theta", cfg.isotherm.theta);
        num("run.isotherm.p_min", cfg.isotherm.p_min);
        num("run.isotherm.p_max", cfg.isotherm.p_max);
        num("run.isotherm.n", cfg.isotherm.n);
    } else if (command == "phase-diagram") {
        num("run.phase-diagram.theta_min", cfg.phase_diagram.theta_min);
        num("run.phase-diagram.theta_max", cfg.phase_diagram.theta_max);
        num("run.phase-diagram.n", cfg.phase_diagram.n);
    } else if (command == "minima") {
        num("run.minima.u_min", cfg.minima.u_min);
        num("run.minima.u_max", cfg.minima.u_max);
        num("run.minima.n_u", cfg.minima.n_u);
        num("run.minima.h_min", cfg.minima.h_min);
        num("run.minima.h_max", cfg.minima.h_max);
        num("run.minima.n_h", cfg.minima.n_h);
    } else if (command == "spinodal") {
        num("run.spinodal.theta_min", cfg.spinodal.theta_min);
        num("run.spinodal.theta_max", cfg.spinodal.theta_max);
        num("run.spinodal.n", cfg.spinodal.n);
    } else if (command == "hysteresis") {
        num("run.hysteresis.theta", cfg.hysteresis.theta);
        num("run.hysteresis.h_amplitude", cfg.hysteresis.h_amplitude);
        num("run.hysteresis.n_steps", cfg.hysteresis.n_steps);
    } else if (command == "relax") {
        num("run.relax.phi0", cfg.relax.phi0);
        num("run.relax.theta", cfg.relax.theta);
        num("run.relax.p", cfg.relax.p);
        if (!cfg.relax.schedule.empty())
            str("run.relax.schedule", schedule_str(cfg.relax.schedule));
        num("run.relax.t_end", cfg.relax.t_end);
        num("run.relax.abs_tol", cfg.relax.abs_tol);
        num("run.relax.rel_tol", cfg.relax.rel_tol);
        num("run.relax.record_every", cfg.relax.record_every);
    } else if (command == "thermal") {
        num("run.thermal.phi0", cfg.thermal.phi0);
        num("run.thermal.theta0", cfg.thermal.theta0);
        num("run.thermal.p", cfg.thermal.p);
        if (!cfg.thermal.schedule.empty())
            str("run.thermal.schedule", schedule_str(cfg.thermal.schedule));
        num("run.thermal.r", cfg.thermal.r);
        num("run.thermal.t_end", cfg.thermal.t_end);
        num("run.thermal.abs_tol", cfg.thermal.abs_tol);
        num("run.thermal.rel_tol", cfg.thermal.rel_tol);
        num("run.thermal.record_every", cfg.thermal.record_every);
    } else if (command == "pde1d") {
        num("run.pde1d.n", cfg.pde1d.n);
        num("run.pde1d.dx", cfg.pde1d.dx);
        num("run.pde1d.x_min", cfg.pde1d.x_min);
        str("run.pde1d.bc", cfg.pde1d.bc);
        num("run.pde1d.phi_left", cfg.pde1d.phi_left);
        num("run.pde1d.phi_right", cfg.pde1d.phi_right);
        num("run.pde1d.theta", cfg.pde1d.theta);
        num("run.pde1d.p", cfg.pde1d.p);
        num("run.pde1d.dt", cfg.pde1d.dt);
        num("run.pde1d.t_end", cfg.pde1d.t_end);
        num("run.pde1d.record_every", cfg.pde1d.record_every);
        str("run.pde1d.init", cfg.pde1d.init);
        num("run.pde1d.init_value", cfg.pde1d.init_value);
        str("run.pde1d.density", cfg.pde1d.density);
        str("run.pde1d.scheme", cfg.pde1d.scheme);
        num("run.pde1d.steady_tol", cfg.pde1d.steady_tol);
    } else if (command == "validate") {
        num("run.validate.n_samples", cfg.validate.n_samples);
        num("run.validate.k_max", cfg.validate.k_max);
        num("run.validate.n_theta", cfg.validate.n_theta);
        num("run.validate.n_p", cfg.validate.n_p);
    }
    return kv;
}

} // namespace liqvap
