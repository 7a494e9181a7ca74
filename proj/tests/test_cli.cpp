#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "liqvap/cli.hpp"
#include "liqvap/csv.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace liqvap;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "liqvap_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

CsvTable read_table(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return read_csv(is);
}

int run(const std::string& cmd, const RunConfig& cfg, const fs::path& out) {
    std::ostringstream info, diag;
    const int code = run_command(cmd, cfg, out.string(), true, info, diag);
    INFO(diag.str());
    return code;
}

} // namespace

TEST_CASE("config parsing applies defaults and validates") {
    const RunConfig cfg = parse_config("[model]\nkind = logarithmic\na = 1.0\n");
    CHECK(cfg.kind == PotentialKind::Logarithmic);
    CHECK(cfg.params.a == 1.0);
    CHECK(cfg.params.tau == 1.0); // untouched defaults
    CHECK(cfg.params.A == 7.0);
    CHECK(cfg.isotherm.n == 201);

    CHECK_THROWS_AS(parse_config("[model]\na = -1\n"), ValidationError);
    try {
        parse_config("[model]\na = -1\n");
    } catch (const ValidationError& e) {
        CHECK(e.key == "model.a");
        CHECK(e.constraint == "> 0");
    }
}

TEST_CASE("config parsing reports malformed documents with line numbers") {
    try {
        parse_config("[model]\na = 1.0\nq = 2\na = 3.0\n");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
        CHECK(std::string(e.what()).find("lines 2 and 4") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("[model]\nbogus = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[nonsense]\n"), ParseError);
    CHECK_THROWS_AS(parse_config("a = 1\n"), ParseError);        // key outside any section
    CHECK_THROWS_AS(parse_config("[model\na = 1\n"), ParseError); // unterminated header
    CHECK_THROWS_AS(parse_config("[model]\nനa\n"), ParseError);   // no '='
    CHECK_THROWS_AS(parse_config("[model]\na = zz\n"), ValidationError);

    // comments and blank lines pass through
    const RunConfig cfg = parse_config("# top note\n\n[model]\n; alt comment\nq = 2.0\n");
    CHECK(cfg.params.q == 2.0);
}

TEST_CASE("set-style overrides reuse the key table") {
    RunConfig cfg;
    apply_override(cfg, "model.a=2.5");
    CHECK(cfg.params.a == 2.5);
    apply_override(cfg, "run.isotherm.theta=0.75");
    CHECK(cfg.isotherm.theta == 0.75);
    apply_override(cfg, "run.pde1d.bc=dirichlet");
    CHECK(cfg.pde1d.bc == "dirichlet");
    CHECK_THROWS_AS(apply_override(cfg, "model.a"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "model.zz=1"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "model.a=-3"), ValidationError);
}

TEST_CASE("csv writer quotes and the reader round-trips") {
    std::ostringstream os;
    CsvWriter w(os);
    w.comment("alpha = 1");
    w.header(std::vector<std::string>{"x", "label"});
    w.row(std::vector<CsvValue>{1.5, std::string("plain")});
    w.row(std::vector<CsvValue>{-0.25, std::string("quoted, \"inner\"")});

    std::istringstream is(os.str());
    const CsvTable t = read_csv(is);
    CHECK(t.comments.size() == 1);
    CHECK(t.columns == std::vector<std::string>{"x", "label"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.number(0, 0) == 1.5);
    CHECK(t.rows[1][1] == "quoted, \"inner\"");
    CHECK(!t.incomplete);

    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("isotherm command emits the documented schema") {
    const fs::path out = work_dir() / "isotherm.csv";
    RunConfig cfg;
    cfg.isotherm.theta = 0.6;
    REQUIRE(run("isotherm", cfg, out) == 0);

    const CsvTable t = read_table(out);
    CHECK(t.columns == std::vector<std::string>{"p", "nu", "phi", "branch"});
    CHECK(!t.incomplete);
    CHECK(t.rows.size() >= 200);

    int plateau_rows = 0;
    bool saw_liquid = false, saw_vapour = false;
    const int branch = t.column_index("branch");
    for (const auto& r : t.rows) {
        if (r[branch].rfind("plateau", 0) == 0)
            ++plateau_rows;
        saw_liquid = saw_liquid || r[branch] == "liquid";
        saw_vapour = saw_vapour || r[branch] == "vapour";
    }
    CHECK(plateau_rows == 2);
    CHECK(saw_liquid);
    CHECK(saw_vapour);

    // echo makes the artifact self-describing
    bool has_kind = false;
    for (const auto& c : t.comments)
        has_kind = has_kind || c.find("model.kind = logarithmic") != std::string::npos;
    CHECK(has_kind);
}

TEST_CASE("supercritical isotherm carries no plateau rows") {
    const fs::path out = work_dir() / "isotherm_super.csv";
    RunConfig cfg;
    cfg.isotherm.theta = 1.2;
    cfg.isotherm.p_min = 0.5;
    cfg.isotherm.p_max = 2.0;
    REQUIRE(run("isotherm", cfg, out) == 0);
    const CsvTable t = read_table(out);
    const int branch = t.column_index("branch");
    for (const auto& r : t.rows)
        CHECK(r[branch] == "supercritical");
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    RunConfig cfg;
    cfg.seed = 99;
    for (const std::string cmd : {"isotherm", "hysteresis", "validate", "phase-diagram"}) {
        const fs::path a = work_dir() / (cmd + "_a.csv");
        const fs::path b = work_dir() / (cmd + "_b.csv");
        REQUIRE(run(cmd, cfg, a) == 0);
        REQUIRE(run(cmd, cfg, b) == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK(!slurp(a).empty());
    }
}

TEST_CASE("trajectory commands emit the documented schemas") {
    RunConfig cfg;
    {
        const fs::path out = work_dir() / "relax.csv";
        REQUIRE(run("relax", cfg, out) == 0);
        const CsvTable t = read_table(out);
        CHECK(t.columns == std::vector<std::string>{"t", "phi", "p", "nu", "f", "dissipation",
                                                    "balance_residual"});
        CHECK(t.rows.size() > 10);
        // terminal state sits at the positive well of u = -0.4
        CHECK(t.number(t.rows.size() - 1, 1) == doctest::Approx(std::sqrt(0.4)).epsilon(1e-6));
    }
    {
        const fs::path out = work_dir() / "thermal.csv";
        RunConfig tc;
        tc.params.c = 20.0;
        tc.params.R = 20.0;
        REQUIRE(run("thermal", tc, out) == 0);
        const CsvTable t = read_table(out);
        CHECK(t.columns == std::vector<std::string>{"t", "phi", "p", "nu", "f", "dissipation",
                                                    "balance_residual", "theta", "eta"});
    }
}

TEST_CASE("hysteresis command emits the loop") {
    const fs::path out = work_dir() / "hyst.csv";
    RunConfig cfg;
    cfg.hysteresis.theta = 0.6;
    cfg.hysteresis.n_steps = 64;
    REQUIRE(run("hysteresis", cfg, out) == 0);
    const CsvTable t = read_table(out);
    CHECK(t.columns == std::vector<std::string>{"h_over_a", "phi", "branch"});
    CHECK(t.rows.size() == 129);
    CHECK(t.rows.front()[2] == "up");
    CHECK(t.rows.back()[2] == "down");
}

TEST_CASE("minima and spinodal commands") {
    RunConfig cfg;
    cfg.minima.n_u = 8;
    cfg.minima.n_h = 8;
    const fs::path mout = work_dir() / "minima.csv";
    REQUIRE(run("minima", cfg, mout) == 0);
    const CsvTable mt = read_table(mout);
    CHECK(mt.columns == std::vector<std::string>{"u", "h_over_a", "n_minima"});
    CHECK(mt.rows.size() == 64);

    const fs::path sout = work_dir() / "spinodal.csv";
    REQUIRE(run("spinodal", cfg, sout) == 0);
    const CsvTable st = read_table(sout);
    CHECK(st.columns == std::vector<std::string>{"theta", "u", "h_minus", "h_plus"});
    for (std::size_t i = 0; i < st.rows.size(); ++i) {
        CHECK(st.number(i, 3) > 0.0);
        CHECK(st.number(i, 2) == -st.number(i, 3));
    }
}

TEST_CASE("pde1d command writes the profile and the energy series") {
    const fs::path out = work_dir() / "pde.csv";
    RunConfig cfg;
    cfg.pde1d.n = 101;
    cfg.pde1d.dx = 0.1;
    cfg.pde1d.t_end = 1.0;
    cfg.pde1d.bc = "dirichlet";
    cfg.pde1d.phi_left = -0.6;
    cfg.pde1d.phi_right = 0.6;
    cfg.pde1d.init = "kink";
    REQUIRE(run("pde1d", cfg, out) == 0);

    const CsvTable prof = read_table(out);
    CHECK(prof.columns == std::vector<std::string>{"x", "phi"});
    CHECK(prof.rows.size() == 101);

    const CsvTable energy = read_table(work_dir() / "pde.energy.csv");
    CHECK(energy.columns == std::vector<std::string>{"t", "energy"});
    CHECK(energy.rows.size() >= 2);
    for (std::size_t i = 1; i < energy.rows.size(); ++i)
        CHECK(energy.number(i, 1) <= energy.number(i - 1, 1) * (1.0 + 1e-12) + 1e-12);
}

TEST_CASE("validate command reports all checks and exits zero") {
    const fs::path out = work_dir() / "validate.csv";
    RunConfig cfg;
    cfg.validate.n_samples = 120;
    std::ostringstream info, diag;
    const int code = run_command("validate", cfg, out.string(), false, info, diag);
    CHECK(code == 0);
    CHECK(info.str().find("PASS check_derivatives") != std::string::npos);
    CHECK(info.str().find("all checks passed") != std::string::npos);

    const CsvTable t = read_table(out);
    CHECK(t.columns.size() == 9);
    CHECK(t.rows.size() == 4);
    const int pass = t.column_index("pass");
    for (const auto& r : t.rows)
        CHECK(r[pass] == "true");
}

TEST_CASE("runtime failures exit 2 and mark the artifact incomplete") {
    const fs::path out = work_dir() / "broken.csv";
    RunConfig cfg;
    cfg.isotherm.theta = 0.2; // vapour well at a pressure that crushes the volume
    cfg.isotherm.p_min = 0.2;
    cfg.isotherm.p_max = 0.5;
    std::ostringstream info, diag;
    const int code = run_command("isotherm", cfg, out.string(), true, info, diag);
    CHECK(code == 2);
    CHECK(diag.str().find("NonPositiveVolume") != std::string::npos);
    const CsvTable t = read_table(out);
    CHECK(t.incomplete);

    CHECK(run_command("no-such-command", cfg, (work_dir() / "x.csv").string(), true, info, diag) == 1);
}
