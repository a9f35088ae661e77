#pragma once

#include <span>
#include <vector>

#include "cubicurve/series.hpp"

namespace cubicurve {

// Center c of a period-r hyperbolic component: 0 -> c_1 -> ... -> c_{r-1} -> 0 under z^2 + c.
struct QuadraticCenter {
    cplx c;
    int r = 1;
    std::vector<cplx> orbit;  // 0, c_1, ..., c_{r-1}

    // c_1 .. c_{r-1}
    std::vector<cplx> critical_orbit() const { return {orbit.begin() + 1, orbit.end()}; }
    // psi_r(2c_1, ..., 2c_{r-1})
    cplx psi() const;
};

// All centers of exact period r, sorted by real part then imaginary part.
std::vector<QuadraticCenter> centers(int r);
QuadraticCenter make_center(cplx c, int r);

// psi_1() = 1, psi_{j+1}(X_1..X_j) = psi_j(X_1..X_{j-1}) X_j + 1.
cplx psi_eval(std::span<const cplx> xs);

}  // namespace cubicurve
