#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cubicurve/grid.hpp"
#include "cubicurve/roots.hpp"
#include "cubicurve/series.hpp"
#include "cubicurve/solver.hpp"

namespace cubicurve {

// F(z) = z^3 - 3a^2 z + (2a^3 + v) = (z - a)^2 (z + 2a) + v, critical points a and -a.
struct CubicMap {
    cplx a;
    cplx v;

    cplx operator()(cplx z) const { return (z - a) * (z - a) * (z + 2.0 * a) + v; }
    cplx derivative(cplx z) const { return 3.0 * (z * z - a * a); }
    cplx cocritical() const { return 2.0 * a; }
};

inline constexpr double kOverflow = 1e150;

cplx evaluate(const CubicMap& f, cplx z);
// z, F(z), ..., F^n(z). Throws Overflow once a point exceeds 1e150 in modulus.
std::vector<cplx> orbit(const CubicMap& f, cplx z, int n);
// max(1e3, 10|a|)^3
double escape_radius(const CubicMap& f);
// Iteration count until |F^n(z)| exceeds the escape radius, or nullopt within max_iter.
std::optional<int> escape_time(const CubicMap& f, cplx z, int max_iter = 500);

double green(const CubicMap& f, cplx z);
// Boettcher coordinate of the co-critical point 2a.
cplx bottcher_cocritical(const CubicMap& f);

struct OrbitClassification {
    std::optional<int> marked_period;
    bool free_escapes = false;
    std::optional<int> escape_time;
    std::optional<Kneading> kneading;
};

// sigma_j = 0 iff |a_j - a| < |a_j + 2a|, for 0 < j < p. Throws AmbiguousKneading
// when some a_j is within a ratio of 1e-3 of equidistant.
Kneading orbit_kneading(const CubicMap& f, int p);
OrbitClassification classify(const CubicMap& f, int p);
// u_j = (a - a_j) / (3a) for 0 < j < p.
std::vector<cplx> normalized_orbit(const CubicMap& f, int p);

// F^p(a) - a and its derivative in v at fixed a.
ValueSlope marked_return(int p, cplx a, cplx v);
cplx polish_fiber_root(int p, cplx a, cplx v);
// Roots v of F^p(a) - a at a = a_hat, sorted by real then imaginary part; with
// exact_period only those of minimal period p. seed rotates the root-finder starts.
std::vector<cplx> fiber_roots(int p, cplx a_hat, bool exact_period = true, std::uint64_t seed = 0);

// a_1 .. a_{p-1} of the marked cycle through a, polished by Newton on the cycle equations.
std::vector<cplx> marked_cycle(int p, cplx a, cplx v);
// The same cycle continued along the segment from a0 to a1. Throws UnmatchedRoot.
std::vector<cplx> continue_cycle(cplx a0, cplx a1, const std::vector<cplx>& cycle);

struct EnumerateOptions {
    double r1 = 10.0;
    double r2 = 40.0;
    int intermediate = 8;   // geometric radii strictly between r1 and r2
    int loop_steps = 720;   // continuation steps once around |a| = r2
    std::uint64_t seed = 0;
};

// Regions of S_p found numerically from fibers over real a, with orders and leading
// coefficients estimated from the growth of u_j between the radii.
std::vector<RegionDescriptor> enumerate_regions(int p, const EnumerateOptions& opt = {});

}  // namespace cubicurve
