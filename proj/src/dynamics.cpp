#include "cubicurve/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "cubicurve/errors.hpp"
#include "cubicurve/quadratic.hpp"

namespace cubicurve {

cplx evaluate(const CubicMap& f, cplx z) { return f(z); }

std::vector<cplx> orbit(const CubicMap& f, cplx z, int n) {
    if (n < 0) throw InvalidArgument("orbit length must be nonnegative");
    std::vector<cplx> out{z};
    for (int k = 0; k < n; ++k) {
        z = f(z);
        if (!(std::abs(z) <= kOverflow)) throw Overflow("orbit left the disk of radius 1e150 at step " + std::to_string(k + 1));
        out.push_back(z);
    }
    return out;
}

double escape_radius(const CubicMap& f) {
    double r = std::max(1e3, 10.0 * std::abs(f.a));
    return r * r * r;
}

std::optional<int> escape_time(const CubicMap& f, cplx z, int max_iter) {
    const double r = escape_radius(f);
    for (int n = 0; n <= max_iter; ++n) {
        if (std::abs(z) > r) return n;
        z = f(z);
    }
    return std::nullopt;
}

double green(const CubicMap& f, cplx z) {
    double scale = 1.0, g = 0.0;
    const double r = escape_radius(f);
    for (int n = 0; n < 200; ++n) {
        double m = std::abs(z);
        double next = m > 1.0 ? scale * std::log(m) : 0.0;
        if (m > 1e100) return next;
        if (m > r && std::abs(next - g) < 1e-12 * std::max(1.0, next)) return next;
        g = next;
        z = f(z);
        scale /= 3.0;
    }
    return std::abs(z) > r ? g : 0.0;
}

cplx bottcher_cocritical(const CubicMap& f) {
    if (!escape_time(f, -f.a)) throw NotEscaping("the free critical point -a has a bounded orbit");
    cplx z = f.cocritical();
    if (z == cplx{}) throw NotEscaping("a = 0 has no escaping critical point");
    // log B = log z_0 + sum 3^{-(n+1)} Log(z_{n+1} / z_n^3)
    cplx log_b = std::log(z);
    double scale = 1.0 / 3.0;
    for (int n = 0; n < 200 && std::abs(z) < 1e100; ++n) {
        cplx next = f(z);
        cplx term = scale * std::log(next / (z * z * z));
        log_b += term;
        z = next;
        scale /= 3.0;
        if (std::abs(term) < 1e-17) break;
    }
    return std::exp(log_b);
}

// ------------------------------------------------------------ classification

std::vector<cplx> normalized_orbit(const CubicMap& f, int p) {
    if (p < 1) throw InvalidArgument("period must be positive");
    auto pts = orbit(f, f.a, p - 1);
    std::vector<cplx> u;
    for (int j = 1; j < p; ++j) u.push_back((f.a - pts[j]) / (3.0 * f.a));
    return u;
}

Kneading orbit_kneading(const CubicMap& f, int p) {
    if (p < 1) throw InvalidArgument("period must be positive");
    auto pts = orbit(f, f.a, p - 1);
    std::vector<int> bits(p, 0);
    for (int j = 1; j < p; ++j) {
        double near = std::abs(pts[j] - f.a), far = std::abs(pts[j] + 2.0 * f.a);
        if (std::abs(near - far) <= 1e-3 * std::max(near, far))
            throw AmbiguousKneading("a_" + std::to_string(j) + " is nearly equidistant from a and -2a");
        bits[j - 1] = near < far ? 0 : 1;
    }
    return Kneading(std::move(bits));
}

OrbitClassification classify(const CubicMap& f, int p) {
    if (p < 1) throw InvalidArgument("period must be positive");
    OrbitClassification out;
    const double tol = 1e-9 * std::max(1.0, std::abs(f.a));
    const double ulp = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f.v));
    cplx z = f.a, dz = 0.0;
    for (int k = 1; k <= p; ++k) {
        dz = f.derivative(z) * dz + 1.0;
        z = f(z);
        if (std::abs(z) > escape_radius(f)) break;
        // rounding of v alone moves F^k(a) by |dF^k/dv| ulp(v)
        if (std::abs(z - f.a) < tol + std::abs(dz) * ulp) {
            out.marked_period = k;
            break;
        }
    }
    out.escape_time = escape_time(f, -f.a);
    out.free_escapes = out.escape_time.has_value();
    if (out.free_escapes && out.marked_period == p) out.kneading = orbit_kneading(f, p);
    return out;
}

// -------------------------------------------------------------------- fibers

ValueSlope marked_return(int p, cplx a, cplx v) {
    CubicMap f{a, v};
    cplx z = a, dz = 0.0;
    for (int k = 0; k < p; ++k) {
        dz = f.derivative(z) * dz + 1.0;
        z = f(z);
    }
    return {z - a, dz};
}

cplx polish_fiber_root(int p, cplx a, cplx v) {
    return newton_polish([p, a](cplx x) { return marked_return(p, a, x); }, v, 60, 1e-15);
}

namespace {

bool has_lower_period(int p, cplx a, cplx v) {
    const double tol = 1e-9 * std::max(1.0, std::abs(a));
    CubicMap f{a, v};
    cplx z = a;
    for (int n = 1; n < p; ++n) {
        z = f(z);
        if (p % n == 0 && std::abs(z - a) < tol) return true;
    }
    return false;
}

}  // namespace

std::vector<cplx> fiber_roots(int p, cplx a_hat, bool exact_period, std::uint64_t seed) {
    if (p < 1) throw InvalidArgument("period must be positive");
    if (a_hat == cplx{}) throw InvalidArgument("the fiber over a = 0 is degenerate");
    int degree = 1;
    for (int k = 1; k < p; ++k) degree *= 3;
    auto eval = [p, a_hat](cplx v) { return marked_return(p, a_hat, v); };
    auto roots = aberth(eval, degree, {.radius = 2.0 * std::abs(a_hat) + 2.0, .max_iter = 5000, .tol = 1e-14, .seed = seed});
    std::vector<cplx> out;
    for (cplx v : roots) {
        v = newton_polish(eval, v, 60, 1e-15);
        auto [f, df] = eval(v);
        if (std::abs(f) > 1e-8 * std::abs(df) * std::max(1.0, std::abs(v)))
            throw RootFindingStalled("fiber root polish left residual " + std::to_string(std::abs(f)));
        if (exact_period && has_lower_period(p, a_hat, v)) continue;
        out.push_back(v);
    }
    std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return out;
}

// --------------------------------------------------------------- enumeration

namespace {

// Orbit coordinates x_1 .. x_{p-1} of a marked cycle a -> x_1 -> ... -> x_{p-1} -> a,
// with residuals G_j = F(x_j) - x_{j+1} (x_p = a) and v = x_1. Tracking the whole
// cycle keeps the branches of one region apart; their v values can agree to 1e-8.
using OrbitVec = Eigen::VectorXcd;

OrbitVec cycle_residual(cplx a, const OrbitVec& x) {
    const auto n = x.size();
    OrbitVec g(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        cplx next = j + 1 < n ? x[j + 1] : a;
        g[j] = (x[j] - a) * (x[j] - a) * (x[j] + 2.0 * a) + x[0] - next;
    }
    return g;
}

Eigen::MatrixXcd cycle_jacobian(cplx a, const OrbitVec& x) {
    const auto n = x.size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        m(j, j) += 3.0 * (x[j] * x[j] - a * a);
        m(j, 0) += 1.0;
        if (j + 1 < n) m(j, j + 1) -= 1.0;
    }
    return m;
}

// d/da of the residuals at fixed x.
OrbitVec cycle_da(cplx a, const OrbitVec& x) {
    const auto n = x.size();
    OrbitVec g(n);
    for (Eigen::Index j = 0; j < n; ++j) g[j] = -6.0 * a * (x[j] - a) - (j + 1 < n ? 0.0 : 1.0);
    return g;
}

double sup(const OrbitVec& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

std::optional<OrbitVec> cycle_newton(cplx a, OrbitVec x, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        OrbitVec dx = cycle_jacobian(a, x).partialPivLu().solve(cycle_residual(a, x));
        x -= dx;
        if (!std::isfinite(sup(x))) return std::nullopt;
        if (sup(dx) <= 1e-11 * std::max(1.0, sup(x))) return x;
    }
    return std::nullopt;
}

OrbitVec cycle_from_root(int p, cplx a, cplx v) {
    auto pts = orbit(CubicMap{a, v}, a, p - 1);
    OrbitVec x(p - 1);
    for (int j = 1; j < p; ++j) x[j - 1] = pts[j];
    auto polished = cycle_newton(a, x, 60);
    if (!polished) throw RootFindingStalled("cycle polish did not converge");
    return *polished;
}

// One continuation step from a0 to a1: tangent predictor, Newton corrector, and
// subdivision whenever the corrector moves the point noticeably.
OrbitVec track(cplx a0, cplx a1, const OrbitVec& x, int depth = 0) {
    if (depth > 30) throw UnmatchedRoot("continuation step collapsed");
    OrbitVec guess = x - cycle_jacobian(a0, x).partialPivLu().solve(cycle_da(a0, x)) * (a1 - a0);
    auto z = cycle_newton(a1, guess, 8);
    if (z && sup(*z - guess) <= 1e-10 * std::max(1.0, sup(*z))) return *z;
    cplx mid = 0.5 * (a0 + a1);
    if (std::abs(mid) > 0) mid *= 0.5 * (std::abs(a0) + std::abs(a1)) / std::abs(mid);
    return track(mid, a1, track(a0, mid, x, depth + 1), depth + 1);
}

OrbitVec follow(const std::function<cplx(double)>& path, OrbitVec x, int steps) {
    cplx a = path(0.0);
    for (int s = 1; s <= steps; ++s) {
        cplx next = path(static_cast<double>(s) / steps);
        x = track(a, next, x);
        a = next;
    }
    return x;
}

size_t snap(const std::vector<OrbitVec>& pts, const OrbitVec& x) {
    size_t best = 0;
    for (size_t i = 1; i < pts.size(); ++i)
        if (sup(pts[i] - x) < sup(pts[best] - x)) best = i;
    if (sup(pts[best] - x) > 1e-7 * std::max(1.0, sup(x))) throw UnmatchedRoot("continued cycle is not a fiber point");
    return best;
}

// Least squares fit y(x) = c0 + c1 x + c2 x^2; returns c0.
template <typename T>
T extrapolate(const std::vector<double>& x, const std::vector<T>& y) {
    std::array<std::array<double, 3>, 3> m{};
    std::array<T, 3> rhs{};
    for (size_t i = 0; i < x.size(); ++i) {
        std::array<double, 3> b{1.0, x[i], x[i] * x[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += b[r] * b[c];
            rhs[r] += b[r] * y[i];
        }
    }
    for (int c = 0; c < 3; ++c) {
        for (int r = c + 1; r < 3; ++r) {
            double f = m[r][c] / m[c][c];
            for (int k = c; k < 3; ++k) m[r][k] -= f * m[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    std::array<T, 3> sol{};
    for (int r = 2; r >= 0; --r) {
        T s = rhs[r];
        for (int k = r + 1; k < 3; ++k) s -= m[r][k] * sol[k];
        sol[r] = s / m[r][r];
    }
    return sol[0];
}

Rational dyadic_round(double q) {
    double r = std::round(q * 16.0) / 16.0;
    if (std::abs(q - r) > 0.05) throw OrdRoundingAmbiguous("slope " + std::to_string(q) + " is not near a dyadic rational");
    return Rational(static_cast<long long>(std::lround(r * 16.0)), 16);
}

std::optional<cplx> snap_center(cplx c, int r) {
    auto cs = centers(r);
    const QuadraticCenter* best = nullptr;
    for (const auto& q : cs)
        if (!best || std::abs(q.c - c) < std::abs(best->c - c)) best = &q;
    if (!best || std::abs(best->c - c) > 0.05) return std::nullopt;
    return best->c;
}

}  // namespace

std::vector<cplx> marked_cycle(int p, cplx a, cplx v) {
    if (p < 1) throw InvalidArgument("period must be positive");
    if (p == 1) return {};
    OrbitVec x = cycle_from_root(p, a, v);
    return {x.data(), x.data() + x.size()};
}

std::vector<cplx> continue_cycle(cplx a0, cplx a1, const std::vector<cplx>& cycle) {
    if (cycle.empty()) return {};
    OrbitVec x = Eigen::Map<const OrbitVec>(cycle.data(), static_cast<Eigen::Index>(cycle.size()));
    x = track(a0, a1, x);
    return {x.data(), x.data() + x.size()};
}

std::vector<RegionDescriptor> enumerate_regions(int p, const EnumerateOptions& opt) {
    if (p < 1) throw InvalidArgument("period must be positive");
    if (!(opt.r1 > 0 && opt.r1 < opt.r2)) throw InvalidArgument("radii must satisfy 0 < r1 < r2");
    if (opt.intermediate < 1 || opt.loop_steps < 8) throw InvalidArgument("too few continuation steps");
    const int count = opt.intermediate + 2;
    std::vector<double> radii(count);
    for (int k = 0; k < count; ++k) radii[k] = opt.r1 * std::pow(opt.r2 / opt.r1, static_cast<double>(k) / (count - 1));

    if (p == 1) {
        RegionDescriptor r;
        r.p = 1;
        r.kneading = Kneading({0});
        r.quad_center = cplx{};
        r.self_dual = true;
        r.label = r.kneading.str();
        return {r};
    }

    // Fiber cycles over a = r1, continued along the real axis through every radius.
    std::vector<std::vector<OrbitVec>> family;
    for (cplx v : fiber_roots(p, radii[0], true, opt.seed)) family.push_back({cycle_from_root(p, radii[0], v)});
    const size_t d = family.size();
    auto check_distinct = [&](int k) {
        for (size_t i = 0; i < d; ++i)
            for (size_t j = i + 1; j < d; ++j)
                if (sup(family[i][k] - family[j][k]) < 1e-6 * std::max(1.0, sup(family[i][k])))
                    throw UnmatchedRoot("two fiber cycles coincide at radius " + std::to_string(radii[k]));
        for (const auto& f : family)
            if (has_lower_period(p, radii[k], f[k][0]))
                throw UnmatchedRoot("a fiber cycle collapsed onto a lower period at radius " + std::to_string(radii[k]));
    };
    check_distinct(0);
    for (int k = 1; k < count; ++k) {
        const double r0 = radii[k - 1], r1 = radii[k];
        for (auto& f : family) f.push_back(follow([&](double t) { return cplx(r0 + t * (r1 - r0)); }, f.back(), 16));
        check_distinct(k);
    }

    // Monodromy around |a| = r2 groups the families into regions.
    const double r2 = radii.back();
    std::vector<OrbitVec> ends(d);
    for (size_t i = 0; i < d; ++i) ends[i] = family[i].back();
    auto circle = [r2](double t) { return std::polar(r2, 2.0 * std::numbers::pi * t); };
    std::vector<size_t> perm(d);
    std::vector<bool> hit(d, false);
    for (size_t i = 0; i < d; ++i) {
        perm[i] = snap(ends, follow(circle, ends[i], opt.loop_steps));
        if (hit[perm[i]]) throw UnmatchedRoot("monodromy is not a permutation");
        hit[perm[i]] = true;
    }
    std::vector<int> cycle_of(d, -1);
    std::vector<std::vector<size_t>> cycles;
    for (size_t i = 0; i < d; ++i) {
        if (cycle_of[i] >= 0) continue;
        cycles.emplace_back();
        for (size_t j = i; cycle_of[j] < 0; j = perm[j]) {
            cycle_of[j] = static_cast<int>(cycles.size() - 1);
            cycles.back().push_back(j);
        }
    }

    std::vector<RegionDescriptor> out;
    for (const auto& cyc : cycles) {
        const size_t rep = cyc.front();
        const int mu = static_cast<int>(cyc.size());
        RegionDescriptor r;
        r.p = p;
        r.mu = mu;
        r.kneading = orbit_kneading(CubicMap{r2, ends[rep][0]}, p);

        std::vector<OrbitVec> u(count);
        std::vector<double> xi(count), t(count);
        for (int k = 0; k < count; ++k) {
            u[k] = ((cplx(radii[k]) - family[rep][k].array()) / cplx(3.0 * radii[k])).matrix();
            xi[k] = 1.0 / (3.0 * radii[k]);
            t[k] = std::pow(xi[k], 1.0 / mu);
        }
        std::vector<Rational> orders;
        for (int j = 1; j < p; ++j) {
            std::vector<double> slope, x;
            for (int k = 0; k + 1 < count; ++k) {
                slope.push_back((std::log(std::abs(u[k + 1][j - 1])) - std::log(std::abs(u[k][j - 1]))) /
                                (std::log(xi[k + 1]) - std::log(xi[k])));
                x.push_back(std::sqrt(t[k] * t[k + 1]));
            }
            Rational q = dyadic_round(extrapolate(x, slope));
            std::vector<cplx> coeff;
            for (int k = 0; k < count; ++k)
                coeff.push_back(u[k][j - 1] / std::pow(xi[k], boost::rational_cast<double>(q)));
            orders.push_back(q);
            r.monomials.push_back({extrapolate(t, coeff), q});
        }
        r.grid = grid_from_orders(orders, r.kneading);
        r.nu = winding_number(r.grid, mu);
        const int n = r.grid.period();
        if (r.kneading.trivial()) {
            r.quad_center = snap_center(p == 1 ? cplx{} : -r.monomials[0].coeff, p);
        } else if (n < p) {
            int rr = p / n;
            cplx c1 = rr == 2 ? cplx(-1.0) : r.monomials[2 * n - 1].coeff / r.monomials[n - 1].coeff - 1.0;
            r.quad_center = snap_center(c1, rr);
        }
        r.label = region_label(r.kneading, r.monomials);

        // The involution (a, v) -> (-a, -v) fixes the region when the root continued to
        // a = -r2 returns, after negation, to the same monodromy cycle.
        OrbitVec half = follow([r2](double s) { return std::polar(r2, std::numbers::pi * s); }, ends[rep],
                               opt.loop_steps / 2);
        r.self_dual = cycle_of[snap(ends, -half)] == cycle_of[rep];
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace cubicurve
