#include "cubicurve/quadratic.hpp"

#include <algorithm>
#include <cmath>

#include "cubicurve/errors.hpp"
#include "cubicurve/roots.hpp"

namespace cubicurve {

namespace {

// Q_c^r(0) and its c-derivative.
ValueSlope critical_iterate(cplx c, int r) {
    cplx z{}, dz{};
    for (int k = 0; k < r; ++k) {
        dz = 2.0 * z * dz + 1.0;
        z = z * z + c;
    }
    return {z, dz};
}

}  // namespace

cplx psi_eval(std::span<const cplx> xs) {
    cplx psi = 1.0;
    for (cplx x : xs) psi = psi * x + 1.0;
    return psi;
}

cplx QuadraticCenter::psi() const {
    std::vector<cplx> xs;
    for (size_t j = 1; j < orbit.size(); ++j) xs.push_back(2.0 * orbit[j]);
    return psi_eval(xs);
}

QuadraticCenter make_center(cplx c, int r) {
    QuadraticCenter q{c, r, {0.0}};
    for (int k = 1; k < r; ++k) q.orbit.push_back(q.orbit.back() * q.orbit.back() + c);
    return q;
}

std::vector<QuadraticCenter> centers(int r) {
    if (r < 1) throw InvalidArgument("period must be positive");
    auto eval = [r](cplx c) { return critical_iterate(c, r); };
    int degree = 1 << (r - 1);
    auto roots = aberth(eval, degree, {.radius = 2.0, .max_iter = 5000, .tol = 1e-14});
    std::vector<QuadraticCenter> out;
    for (cplx c : roots) {
        c = newton_polish(eval, c);
        if (std::abs(critical_iterate(c, r).f) > 1e-10) throw RootFindingStalled("center polish failed");
        bool lower = false;
        for (int s = 1; s < r && !lower; ++s)
            if (r % s == 0 && std::abs(critical_iterate(c, s).f) < 1e-8) lower = true;
        if (lower) continue;
        if (std::any_of(out.begin(), out.end(), [&](const auto& q) { return std::abs(q.c - c) < 1e-8; })) continue;
        out.push_back(make_center(c, r));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.c.real() - b.c.real()) > 1e-9) return a.c.real() < b.c.real();
        return a.c.imag() < b.c.imag();
    });
    return out;
}

}  // namespace cubicurve
