#include "liqvap/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace liqvap {

// Closed-form real-root extraction on the depressed cubic: trigonometric
// method when all three roots are real, Cardano with a cancellation-safe
// branch otherwise. One Newton step on the original polynomial tightens each
// root against the depression round-off.
CubicRoots solve_cubic(double c2, double c1, double c0) {
    CubicRoots r{};
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = c0 + c2 * (2.0 * c2 * c2 - 9.0 * c1) / 27.0;

    const double p3 = p / 3.0;
    const double q2 = q / 2.0;
    const double disc = q2 * q2 + p3 * p3 * p3;

    if (disc > 0.0) {
        // One real root. Pick the large-magnitude cube root first so the
        // subtraction never cancels.
        const double s = std::sqrt(disc);
        double big;
        if (q2 >= 0.0)
            big = -std::cbrt(q2 + s);
        else
            big = std::cbrt(-q2 + s);
        const double small = (big == 0.0) ? 0.0 : -p3 / big;
        r.x[0] = big + small - shift;
        r.count = 1;
    } else if (p == 0.0) {
        // disc <= 0 with p = 0 forces q = 0: triple root.
        r.x = {-shift, -shift, -shift};
        r.count = 3;
    } else {
        const double mm = 2.0 * std::sqrt(-p3);
        const double arg = std::clamp(3.0 * q / (p * mm), -1.0, 1.0);
        const double alpha = std::acos(arg) / 3.0;
        constexpr double two_pi_3 = 2.0943951023931953;
        for (int k = 0; k < 3; ++k)
            r.x[k] = mm * std::cos(alpha - two_pi_3 * k) - shift;
        std::sort(r.x.begin(), r.x.end());
        r.count = 3;
    }

    for (int k = 0; k < r.count; ++k) {
        const double x = r.x[k];
        const double fx = ((x + c2) * x + c1) * x + c0;
        const double dfx = (3.0 * x + 2.0 * c2) * x + c1;
        if (dfx != 0.0) {
            const double step = fx / dfx;
            if (std::isfinite(step) && std::abs(step) < 1e-3 * (1.0 + std::abs(x)))
                r.x[k] = x - step;
        }
    }
    if (r.count == 3)
        std::sort(r.x.begin(), r.x.end());
    return r;
}

} // namespace liqvap
