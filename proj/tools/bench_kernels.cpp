// Timing harness for the data-parallel kernels against their serial
// reference paths: the explicit gradient-flow sweep, the minima structure
// scan and the isotherm batch solve.

#include "liqvap/dynamics.hpp"
#include "liqvap/equilibrium.hpp"
#include "liqvap/parallel.hpp"
#include "liqvap/validate.hpp"

#include <chrono>
#include <cstdio>

using namespace liqvap;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <class F>
double timed(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return seconds(t0, std::chrono::steady_clock::now());
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-24s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name, serial,
                parallel, serial / parallel);
}

} // namespace

int main() {
    std::printf("threads available: %d\n", max_threads());

    PotentialModel quartic(PotentialKind::Quartic, ModelParams{});
    PotentialModel logm(PotentialKind::Logarithmic, ModelParams{});

    {
        // the logarithmic force is the expensive per-node case
        const double theta = 0.6;
        Profile1D prof;
        prof.dx = 0.01;
        prof.x0 = -2000.0 * prof.dx;
        prof.phi.resize(400001);
        prof.theta = theta;
        prof.p = coexistence_pressure(logm, theta);
        for (std::size_t i = 0; i < prof.phi.size(); ++i)
            prof.phi[i] = prof.x(i) < 0 ? -0.5 : 0.5;
        PdeOptions opts;
        opts.record_every = 1 << 30;
        const double t_end = 200 * 0.4 * prof.dx * prof.dx; // 200 steps

        opts.exec = Exec::Serial;
        const double ts = timed([&] { run_pde1d(logm, prof, t_end, opts); });
        opts.exec = Exec::Parallel;
        const double tp = timed([&] { run_pde1d(logm, prof, t_end, opts); });
        report("pde1d explicit sweep", ts, tp);
    }

    {
        const double ts = timed([&] { check_derivatives(quartic, 4000, 1, Exec::Serial); });
        const double tp = timed([&] { check_derivatives(quartic, 4000, 1, Exec::Parallel); });
        report("derivative audit", ts, tp);
    }

    {
        const double ts = timed(
            [&] { minima_structure_map(logm, -0.95, 0.95, 384, -1.0, 1.0, 384, Exec::Serial); });
        const double tp = timed(
            [&] { minima_structure_map(logm, -0.95, 0.95, 384, -1.0, 1.0, 384, Exec::Parallel); });
        report("minima structure map", ts, tp);
    }

    {
        const double theta = 0.6;
        const double p0 = coexistence_pressure(logm, theta);
        const double ts =
            timed([&] { isotherm(logm, theta, 0.5 * p0, 1.5 * p0, 200000, Exec::Serial); });
        const double tp =
            timed([&] { isotherm(logm, theta, 0.5 * p0, 1.5 * p0, 200000, Exec::Parallel); });
        report("isotherm batch", ts, tp);
    }

    return 0;
}
