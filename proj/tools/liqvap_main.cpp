#include "liqvap/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw liqvap::Error("IoError", "cannot read " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

std::string defaults_footer() {
    const liqvap::RunConfig defaults;
    auto compact = [](const std::string& v) {
        char* end = nullptr;
        const double d = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            return v;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", d);
        return std::string(buf);
    };
    std::string out = "Configuration keys and defaults (config file sections or --set paths):\n";
    std::string model_block;
    for (const std::string& cmd : liqvap::command_names()) {
        std::string block;
        for (const auto& [k, v] : liqvap::config_echo(defaults, cmd)) {
            if (k == "command")
                continue;
            if (k.rfind("model.", 0) == 0) {
                if (cmd == "isotherm")
                    model_block += "  " + k + " = " + compact(v) + "\n";
            } else {
                block += "  " + k + " = " + compact(v) + "\n";
            }
        }
        if (cmd == "isotherm")
            out += model_block;
        out += block;
    }
    out += "Pressure keys equal to 0 select the transition-line pressure p0(theta).";
    return out;
}

int main(int argc, char** argv) {
    CLI::App app{"liqvap: liquid-vapour phase-field thermodynamics and relaxation dynamics"};
    app.require_subcommand(1);
    app.footer(defaults_footer());

    std::string config_path, out_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool quiet = false;

    app.add_option("--config", config_path, "configuration file ([model], [run.<command>] sections)");
    app.add_option("--out", out_path, "output CSV path (default <command>.csv)");
    app.add_option("--set", overrides, "override, e.g. --set model.a=2.0")->take_all();
    app.add_option("--seed", seed, "seed for randomized audits")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_flag("--quiet", quiet, "suppress progress output");

    for (const std::string& name : liqvap::command_names())
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    liqvap::RunConfig cfg;
    try {
        if (!config_path.empty())
            cfg = liqvap::parse_config(slurp(config_path));
        for (const std::string& ov : overrides)
            liqvap::apply_override(cfg, ov);
        if (seed_given)
            cfg.seed = seed;
    } catch (const liqvap::Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 1;
    }

    if (out_path.empty())
        out_path = cmd + ".csv";
    return liqvap::run_command(cmd, cfg, out_path, quiet, std::cout, std::cerr);
}
