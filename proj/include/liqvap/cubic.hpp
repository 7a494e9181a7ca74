#pragma once

#include <array>

namespace liqvap {

// Real roots of x^3 + c2 x^2 + c1 x + c0 in ascending order. count is 1 or 3;
// a double root shows up as two (near-)equal entries of a 3-root result.
struct CubicRoots {
    std::array<double, 3> x{};
    int count = 0;
};

CubicRoots solve_cubic(double c2, double c1, double c0);

} // namespace liqvap
