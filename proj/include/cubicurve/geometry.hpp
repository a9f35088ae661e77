#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cubicurve/dynamics.hpp"

namespace cubicurve {

// A point of S_p: Phi_p(a, v) = F^p(a) - a = 0.
struct CurvePoint {
    cplx a;
    cplx v;
    int p = 1;
};

cplx curve_value(const CurvePoint& pt);

struct Partials {
    cplx da;  // total derivative of Phi_p in a
    cplx dv;  // Y_p
};
Partials partials(const CurvePoint& pt);
// Y_p from X_j = 3(a_j^2 - a^2) by Y_1 = 1, Y_{j+1} = Y_j X_j + 1.
cplx y_recurrence(const CurvePoint& pt);

// Newton along the gradient direction back onto Phi_p = 0. Throws StepCollapse when
// both partials vanish, NoProgress when Newton does not settle.
CurvePoint project(const CurvePoint& pt);

// Hamiltonian flow da/dt = dPhi/dv, dv/dt = -dPhi/da along the segment 0 -> t_target.
// steps <= 0 picks 512 per unit |t|, at least 16.
CurvePoint flow(const CurvePoint& base, cplx t_target, int steps = 0);

// Leading behaviour of t near the ideal point: t ~ coeff xi^exp. For trivial kneading
// t has a pole, t ~ a / psi_p(2c), recorded in pole_coefficient = 1 / psi_p(2c).
struct TLeading {
    Monomial t;
    bool pole = false;
    cplx pole_coefficient;
};
TLeading t_leading(const RegionDescriptor& r);

struct ResidueResult {
    cplx residue;
    int turns = 0;  // full turns of |a| = R before the marked cycle closed up
};
// (1/2 pi i) of the loop integral of da / Y_p over mu turns of |a| = R, starting from
// the series of the region. Throws SheetMismatch when the cycle closes after a number
// of turns other than mu.
ResidueResult residue_at_ideal(const RegionDescriptor& r, double radius = 40.0, int samples = 720);

long long degree(int p);
long long euler_affine(int p);
long long euler_compact(int p, long long regions);
// Sum over regions of 1 - nu.
long long euler_from_windings(const std::vector<RegionDescriptor>& regions);
long long genus_if_connected(long long chi_compact);

struct EulerRow {
    int p = 1;
    long long d = 0;
    long long chi_affine = 0;
    long long regions = 0;
    long long chi_compact = 0;
    long long genus_if_connected = 0;
};
// N_p from the series solver (enumerate = false) or from fiber enumeration.
EulerRow euler_row(int p, bool enumerate = false);
nlohmann::ordered_json to_json(const EulerRow& row);
inline constexpr const char* kConnectivityCaveat = "genus assumes S_p is connected";

// prod_k (a_hat - F^j(a_hat)) over the d_p fiber points at a_hat and at a_hat2.
std::pair<cplx, cplx> sym_product_check(int p, cplx a_hat, cplx a_hat2, int j);

struct TPlaneView {
    int width = 1;
    int height = 1;
    cplx center;
    double scale = 1.0;  // t units per pixel
    int steps_per_unit = 512;
};

// Pixel codes: 0 connectedness locus, 1..kEscapeBuckets escape-time buckets of -a,
// kFlowFailed where the flow from the base point broke down.
inline constexpr std::uint8_t kEscapeBuckets = 16;
inline constexpr std::uint8_t kFlowFailed = 255;

struct TPlaneImage {
    TPlaneView view;
    CurvePoint base;
    std::vector<std::uint8_t> pixels;  // row-major, row 0 on top
};

TPlaneImage render(const CurvePoint& base, const TPlaneView& view, int threads = 1);
std::uint8_t classify_code(const CurvePoint& pt);
// Binary P6 with the base point in a header comment.
std::string to_ppm(const TPlaneImage& img);
// RGB of a pixel code.
std::array<std::uint8_t, 3> palette(std::uint8_t code);

}  // namespace cubicurve
