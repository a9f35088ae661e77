#include "cubicurve/roots.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cubicurve/errors.hpp"

namespace cubicurve {

ValueSlope horner(const std::vector<cplx>& c, cplx z) {
    cplx f{}, df{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        df = df * z + f;
        f = f * z + *it;
    }
    return {f, df};
}

std::vector<cplx> aberth(const PolyEvaluator& f, int degree, const AberthOptions& opt) {
    if (degree < 0) throw InvalidArgument("negative degree");
    std::vector<cplx> z(degree);
    double offset = 0.4;
    if (opt.seed != 0) {
        std::mt19937_64 rng(opt.seed);
        offset = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    }
    for (int k = 0; k < degree; ++k)
        z[k] = std::polar(opt.radius, 2.0 * std::numbers::pi * k / degree + offset);
    std::vector<bool> done(degree, false);
    for (int it = 0; it < opt.max_iter; ++it) {
        bool all = true;
        for (int k = 0; k < degree; ++k) {
            if (done[k]) continue;
            auto [v, dv] = f(z[k]);
            if (v == cplx{}) {
                done[k] = true;
                continue;
            }
            cplx ratio = v / dv;
            cplx s{};
            for (int j = 0; j < degree; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            cplx step = ratio / (1.0 - ratio * s);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
            z[k] -= step;
            if (std::abs(step) <= opt.tol * std::max(1.0, std::abs(z[k]))) done[k] = true;
            else all = false;
        }
        if (all) return z;
    }
    throw RootFindingStalled("simultaneous iteration did not converge for degree " + std::to_string(degree));
}

cplx newton_polish(const PolyEvaluator& f, cplx z, int max_iter, double tol) {
    for (int i = 0; i < max_iter; ++i) {
        auto [v, dv] = f(z);
        if (v == cplx{} || dv == cplx{}) break;
        cplx step = v / dv;
        z -= step;
        if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

}  // namespace cubicurve
