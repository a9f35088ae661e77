#include "cubicurve/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "cubicurve/errors.hpp"
#include "cubicurve/finder.hpp"
#include "cubicurve/quadratic.hpp"

namespace cubicurve {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_period(int p) {
    if (p < 1) throw InvalidArgument("period must be positive");
}

// |Phi| this small is indistinguishable from zero given the rounding of a and v.
double curve_tolerance(const CurvePoint& pt, const Partials& d) {
    return 1e-9 * std::max(1.0, std::abs(pt.a)) +
           8.0 * kEps * (std::abs(d.da) * std::abs(pt.a) + std::abs(d.dv) * std::max(1.0, std::abs(pt.v)));
}

}  // namespace

cplx curve_value(const CurvePoint& pt) {
    check_period(pt.p);
    CubicMap f{pt.a, pt.v};
    cplx z = pt.a;
    for (int k = 0; k < pt.p; ++k) z = f(z);
    return z - pt.a;
}

Partials partials(const CurvePoint& pt) {
    check_period(pt.p);
    const cplx a = pt.a;
    CubicMap f{a, pt.v};
    cplx z = a, da = 1.0, dv = 0.0;
    for (int k = 0; k < pt.p; ++k) {
        cplx x = f.derivative(z);
        da = x * da + (-6.0 * a * z + 6.0 * a * a);
        dv = x * dv + 1.0;
        z = f(z);
    }
    return {da - 1.0, dv};
}

cplx y_recurrence(const CurvePoint& pt) {
    check_period(pt.p);
    CubicMap f{pt.a, pt.v};
    std::vector<cplx> xs;
    cplx z = pt.a;
    for (int j = 1; j < pt.p; ++j) {
        z = f(z);
        xs.push_back(3.0 * (z * z - pt.a * pt.a));
    }
    return psi_eval(xs);
}

CurvePoint project(const CurvePoint& pt) {
    CurvePoint q = pt;
    for (int it = 0; it < 40; ++it) {
        cplx phi = curve_value(q);
        Partials d = partials(q);
        double g2 = std::norm(d.da) + std::norm(d.dv);
        if (std::sqrt(g2) < 1e-12) throw StepCollapse("both partial derivatives vanish");
        if (std::abs(phi) <= curve_tolerance(q, d)) return q;
        q.a -= phi * std::conj(d.da) / g2;
        q.v -= phi * std::conj(d.dv) / g2;
        if (!std::isfinite(std::abs(q.a)) || !std::isfinite(std::abs(q.v))) break;
    }
    throw NoProgress("projection onto the curve did not settle");
}

namespace {

struct Velocity {
    cplx a, v;
};

Velocity hamiltonian(const CurvePoint& pt) {
    Partials d = partials(pt);
    if (std::abs(d.da) < 1e-12 && std::abs(d.dv) < 1e-12) throw StepCollapse("both partial derivatives vanish");
    return {d.dv, -d.da};
}

CurvePoint rk4(const CurvePoint& y, cplx h) {
    auto shift = [&](const Velocity& k, cplx s) { return CurvePoint{y.a + s * k.a, y.v + s * k.v, y.p}; };
    Velocity k1 = hamiltonian(y);
    Velocity k2 = hamiltonian(shift(k1, 0.5 * h));
    Velocity k3 = hamiltonian(shift(k2, 0.5 * h));
    Velocity k4 = hamiltonian(shift(k3, h));
    return {y.a + h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a),
            y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v), y.p};
}

// One step of length h, accepted when a full step and two half steps agree; halved otherwise.
CurvePoint step(const CurvePoint& y, cplx h, int depth = 0) {
    if (depth > 30) throw StepCollapse("flow step shrank below resolution");
    try {
        CurvePoint full = project(rk4(y, h));
        CurvePoint half = project(rk4(project(rk4(y, 0.5 * h)), 0.5 * h));
        double err = std::abs(full.a - half.a) + std::abs(full.v - half.v);
        if (err <= 1e-11 * (1.0 + std::abs(half.a) + std::abs(half.v))) return half;
    } catch (const NoProgress&) {
    }
    return step(step(y, 0.5 * h, depth + 1), 0.5 * h, depth + 1);
}

}  // namespace

CurvePoint flow(const CurvePoint& base, cplx t_target, int steps) {
    if (t_target == cplx{}) return base;
    if (steps <= 0) steps = std::max(16, static_cast<int>(std::ceil(512.0 * std::abs(t_target))));
    CurvePoint y = project(base);
    const cplx h = t_target / static_cast<double>(steps);
    for (int s = 0; s < steps; ++s) y = step(y, h);
    return y;
}

// ------------------------------------------------------------------ t near ideal points

TLeading t_leading(const RegionDescriptor& r) {
    TLeading out;
    if (r.kneading.trivial()) {
        if (!r.quad_center) throw InvalidArgument("trivial kneading region without a quadratic center");
        cplx psi = make_center(*r.quad_center, r.p).psi();
        out.pole = true;
        out.pole_coefficient = 1.0 / psi;
        out.t = {1.0 / (3.0 * psi), Rational(-1)};
        return out;
    }
    const int n = r.grid.period();
    const int rr = r.p / n;
    cplx psi = 1.0;
    if (rr > 1) {
        if (!r.quad_center) throw InvalidArgument("satellite region without a quadratic center");
        psi = make_center(*r.quad_center, rr).psi();
    }
    // da/dt ~ psi prod m_j* / xi^2, integrated against da = -dxi / (3 xi^2)
    cplx c = psi;
    Rational e(-2 * (n - 1));
    for (int j = 1; j < n; ++j) {
        c *= static_cast<double>(3 * r.kneading.sigma(j) - 2) * r.monomials[j - 1].coeff;
        e += r.monomials[j - 1].exp;
    }
    Rational q = -e - Rational(1);
    out.t = {-1.0 / (3.0 * c * boost::rational_cast<double>(q)), q};
    return out;
}

ResidueResult residue_at_ideal(const RegionDescriptor& r, double radius, int samples) {
    if (!(radius > 0.0) || samples < 8) throw InvalidArgument("need a positive radius and at least 8 samples");
    ResidueResult out;
    if (r.p == 1) {
        // dt = da exactly
        out.turns = 1;
        return out;
    }
    if (r.series.p() != r.p) throw InvalidArgument("residue needs the solved series of the region");
    const int mu = r.mu;
    const double xi = 1.0 / (3.0 * radius);
    auto start = find_w({.a = radius, .kneading = r.kneading}, series_start(r.series, std::pow(xi, 1.0 / r.series.mu())));
    if (start.status != FinderStatus::Converged)
        throw SheetMismatch("no fiber point of " + r.label + " near its series at |a| = " + std::to_string(radius));
    const std::vector<cplx> x0 = marked_cycle(r.p, radius, start.v);

    auto scale = [](const std::vector<cplx>& x) {
        double s = 1.0;
        for (cplx z : x) s = std::max(s, std::abs(z));
        return s;
    };
    auto y_of = [](cplx a, const std::vector<cplx>& x) {
        cplx y = 1.0;
        for (cplx z : x) y = y * 3.0 * (z * z - a * a) + 1.0;
        return y;
    };

    std::vector<cplx> x = x0;
    cplx sum{};
    const int max_turns = std::max(mu, 1) + 2;
    for (int turn = 1; turn <= max_turns; ++turn) {
        for (int k = 0; k < samples; ++k) {
            double th0 = 2.0 * std::numbers::pi * k / samples, th1 = 2.0 * std::numbers::pi * (k + 1) / samples;
            cplx a0 = std::polar(radius, th0), a1 = std::polar(radius, th1);
            sum += a0 / y_of(a0, x);
            x = continue_cycle(a0, a1, x);
        }
        double gap = 0.0;
        for (size_t j = 0; j < x.size(); ++j) gap = std::max(gap, std::abs(x[j] - x0[j]));
        if (gap <= 1e-7 * scale(x0)) {
            out.turns = turn;
            break;
        }
    }
    if (out.turns != mu)
        throw SheetMismatch(r.label + ": cycle closed after " + std::to_string(out.turns) + " turns, expected " +
                            std::to_string(mu));
    out.residue = sum / static_cast<double>(samples);
    return out;
}

// ------------------------------------------------------------------ Euler characteristic

long long degree(int p) {
    check_period(p);
    std::vector<long long> d(p + 1, 0);
    long long power = 1;
    for (int n = 1; n <= p; ++n) {
        if (n > 1) power *= 3;
        d[n] = power;
        for (int m = 1; m < n; ++m)
            if (n % m == 0) d[n] -= d[m];
    }
    return d[p];
}

long long euler_affine(int p) { return (2 - p) * degree(p); }

long long euler_compact(int p, long long regions) { return regions + euler_affine(p); }

long long euler_from_windings(const std::vector<RegionDescriptor>& regions) {
    long long chi = 0;
    for (const auto& r : regions) chi += 1 - r.nu;
    return chi;
}

long long genus_if_connected(long long chi_compact) { return 1 - chi_compact / 2; }

EulerRow euler_row(int p, bool enumerate) {
    EulerRow row;
    row.p = p;
    row.d = degree(p);
    row.chi_affine = euler_affine(p);
    row.regions = static_cast<long long>(enumerate ? enumerate_regions(p).size() : solved_regions(p).size());
    row.chi_compact = euler_compact(p, row.regions);
    row.genus_if_connected = genus_if_connected(row.chi_compact);
    return row;
}

nlohmann::ordered_json to_json(const EulerRow& row) {
    nlohmann::ordered_json j;
    j["d"] = row.d;
    j["chi_affine"] = row.chi_affine;
    j["N"] = row.regions;
    j["chi_compact"] = row.chi_compact;
    j["genus_if_connected"] = row.genus_if_connected;
    return j;
}

std::pair<cplx, cplx> sym_product_check(int p, cplx a_hat, cplx a_hat2, int j) {
    if (j <= 0 || j >= p) throw InvalidArgument("need 0 < j < p");
    auto product = [p, j](cplx a) {
        cplx prod = 1.0;
        for (cplx v : fiber_roots(p, a)) prod *= a - marked_cycle(p, a, v)[j - 1];
        return prod;
    };
    return {product(a_hat), product(a_hat2)};
}

// ------------------------------------------------------------------ t-plane rendering

std::uint8_t classify_code(const CurvePoint& pt) {
    auto n = escape_time(CubicMap{pt.a, pt.v}, -pt.a, 500);
    if (!n) return 0;
    return static_cast<std::uint8_t>(1 + std::min(*n, kEscapeBuckets - 1));
}

TPlaneImage render(const CurvePoint& base, const TPlaneView& view, int threads) {
    if (view.width < 1 || view.height < 1 || !(view.scale > 0.0)) throw InvalidArgument("bad view");
    TPlaneImage img{view, base, std::vector<std::uint8_t>(static_cast<size_t>(view.width) * view.height, 0)};
    auto pixel = [&](int row, int col) {
        cplx offset{col - 0.5 * (view.width - 1), 0.5 * (view.height - 1) - row};
        cplx t = view.center + view.scale * offset;
        int steps = std::max(16, static_cast<int>(std::ceil(view.steps_per_unit * std::abs(t))));
        try {
            return classify_code(flow(base, t, steps));
        } catch (const Error&) {
            return kFlowFailed;
        }
    };
    auto rows = [&](int first, int stride) {
        for (int row = first; row < view.height; row += stride)
            for (int col = 0; col < view.width; ++col) img.pixels[static_cast<size_t>(row) * view.width + col] = pixel(row, col);
    };
    threads = std::clamp(threads, 1, view.height);
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(rows, k, threads);
    rows(0, threads);
    for (auto& t : pool) t.join();
    return img;
}

std::array<std::uint8_t, 3> palette(std::uint8_t code) {
    if (code == 0) return {0, 0, 0};
    if (code == kFlowFailed) return {255, 0, 255};
    // escape buckets: light for fast escape, darker blue for slow
    int k = std::min<int>(code, kEscapeBuckets) - 1;
    return {static_cast<std::uint8_t>(255 - 14 * k), static_cast<std::uint8_t>(255 - 12 * k),
            static_cast<std::uint8_t>(255 - 4 * k)};
}

std::string to_ppm(const TPlaneImage& img) {
    std::ostringstream out;
    out.precision(12);
    out << "P6\n# base a=" << img.base.a.real() << "," << img.base.a.imag() << " v=" << img.base.v.real() << ","
        << img.base.v.imag() << " p=" << img.base.p << "\n# center=" << img.view.center.real() << ","
        << img.view.center.imag() << " scale=" << img.view.scale << "\n"
        << img.view.width << " " << img.view.height << "\n255\n";
    for (std::uint8_t code : img.pixels) {
        auto rgb = palette(code);
        out.write(reinterpret_cast<const char*>(rgb.data()), 3);
    }
    return out.str();
}

}  // namespace cubicurve
