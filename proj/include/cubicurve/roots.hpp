#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cubicurve/series.hpp"

namespace cubicurve {

// Value and derivative of a polynomial at a point.
struct ValueSlope {
    cplx f;
    cplx df;
};
using PolyEvaluator = std::function<ValueSlope(cplx)>;

struct AberthOptions {
    double radius = 1.0;  // initial circle
    int max_iter = 2000;
    double tol = 1e-13;   // relative step size for convergence
    std::uint64_t seed = 0;  // 0: fixed start angles, otherwise a random rotation of the start circle
};

// All roots of a degree-n polynomial given only point evaluations (Aberth-Ehrlich).
// Throws RootFindingStalled when the iteration does not settle.
std::vector<cplx> aberth(const PolyEvaluator& f, int degree, const AberthOptions& opt = {});

// Newton steps until the correction is below tol relative to |z|.
cplx newton_polish(const PolyEvaluator& f, cplx z, int max_iter = 50, double tol = 1e-15);

// Dense coefficient evaluation, c[0] + c[1] z + ...
ValueSlope horner(const std::vector<cplx>& c, cplx z);

}  // namespace cubicurve
