#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "cubicurve/errors.hpp"
#include "cubicurve/geometry.hpp"
#include "cubicurve/quadratic.hpp"

using namespace cubicurve;

namespace {

const std::vector<RegionDescriptor>& regions(int p) {
    static std::map<int, std::vector<RegionDescriptor>> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, solved_regions(p)).first;
    return it->second;
}

CurvePoint random_point(std::mt19937& rng, int p, double rmin, double rmax) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    cplx a = std::polar(rmin + (rmax - rmin) * u(rng), 2.0 * std::numbers::pi * u(rng));
    auto roots = fiber_roots(p, a);
    return {a, roots[rng() % roots.size()], p};
}

}  // namespace

TEST_CASE("partials") {
    CHECK(partials({5.0, 5.0, 1}).dv == cplx{1.0, 0.0});
    CHECK(partials({5.0, 5.0, 1}).da == cplx{-1.0, 0.0});

    std::mt19937 rng(11);
    for (int n = 0; n < 200; ++n) {
        CurvePoint pt = random_point(rng, 1 + n % 4, 0.5, 3.0);
        Partials d = partials(pt);
        CHECK(std::abs(y_recurrence(pt) - d.dv) < 1e-10 * std::abs(d.dv));
        const double h = 1e-6;
        cplx fa = (curve_value({pt.a + h, pt.v, pt.p}) - curve_value({pt.a - h, pt.v, pt.p})) / (2.0 * h);
        cplx fv = (curve_value({pt.a, pt.v + h, pt.p}) - curve_value({pt.a, pt.v - h, pt.p})) / (2.0 * h);
        CHECK(std::abs(fa - d.da) < 1e-5 * std::abs(d.da));
        CHECK(std::abs(fv - d.dv) < 1e-5 * std::abs(d.dv));
    }
}

TEST_CASE("dt does not vanish on the curve") {
    std::mt19937 rng(5);
    for (int p = 1; p <= 4; ++p) {
        int samples = 0;
        while (samples < 10000) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            cplx a = std::polar(0.2 + 20.0 * u(rng), 2.0 * std::numbers::pi * u(rng));
            for (cplx v : fiber_roots(p, a)) {
                CHECK(std::abs(partials({a, v, p}).dv) > 0.0);
                ++samples;
            }
        }
    }
}

TEST_CASE("hamiltonian flow") {
    CurvePoint base{3.0, fiber_roots(3, 3.0).front(), 3};
    CurvePoint same = flow(base, 0.0);
    CHECK(same.a == base.a);
    CHECK(same.v == base.v);

    for (int p = 2; p <= 4; ++p) {
        CurvePoint b{3.0, fiber_roots(p, 3.0).front(), p};
        // t scaled so that a moves by a fixed fraction of |a|
        const double unit = std::abs(b.a) / std::abs(partials(b).dv);
        for (cplx s : {cplx(0.05, 0.0), cplx(0.0, 0.05), cplx(0.3, 0.2)}) {
            cplx t = s * unit;
            CAPTURE(p);
            CurvePoint out = flow(b, t);
            CHECK(project(out).v == out.v);
            CurvePoint back = flow(out, -t);
            CHECK(std::abs(back.a - b.a) + std::abs(back.v - b.v) < 1e-6 * std::abs(s) * (std::abs(b.a) + std::abs(b.v)));
        }
    }

    // p = 1: da/dt = 1
    CurvePoint one = flow({2.0, 2.0, 1}, cplx(0.5, 0.25));
    CHECK(std::abs(one.a - cplx(2.5, 0.25)) < 1e-12);
    CHECK(std::abs(one.v - one.a) < 1e-12);
}

TEST_CASE("boettcher coordinate varies smoothly along the flow") {
    CurvePoint base{10.0, fiber_roots(2, 10.0).front(), 2};
    // da/dt = Y_2 is near 900 here, so h = 1e-5 moves a by about 0.01
    const double h = 1e-5;
    std::vector<cplx> b;
    for (int k = 0; k < 4; ++k) {
        CurvePoint pt = flow(base, cplx(k * h, 0.0));
        b.push_back(bottcher_cocritical(CubicMap{pt.a, pt.v}));
    }
    cplx q1 = (b[1] - b[0]) / h, q2 = (b[2] - b[1]) / h, q3 = (b[3] - b[2]) / h;
    CHECK(std::abs(q2 - q1) < 0.01 * std::abs(q1));
    CHECK(std::abs(q3 - q2) < 0.01 * std::abs(q2));
    // second differences shrink with the step
    CHECK(std::abs((q3 - q2) - (q2 - q1)) < 0.1 * std::abs(q2 - q1));
}

TEST_CASE("slit at an ideal point with winding number 3") {
    const RegionDescriptor* r110 = nullptr;
    for (const auto& r : regions(3))
        if (r.label == "110") r110 = &r;
    REQUIRE(r110);
    cplx v;
    for (cplx x : fiber_roots(3, 10.0))
        if (orbit_kneading(CubicMap{10.0, x}, 3).str() == "110") v = x;
    CurvePoint base{10.0, v, 3};
    // the ideal point sits near t0 = -beta xi^3 relative to the base point
    cplx t0 = -t_leading(*r110).t.coeff * std::pow(1.0 / 30.0, 3.0);
    cplx up = t0 + cplx(0.0, std::abs(t0)), down = t0 - cplx(0.0, std::abs(t0));
    CurvePoint above = flow(flow(base, up), 2.0 * t0 - up);
    CurvePoint below = flow(flow(base, down), 2.0 * t0 - down);
    CHECK(std::abs(above.a - below.a) > 1.0);
    // going around once more on the same side gives the same point
    CurvePoint again = flow(flow(base, up), 2.0 * t0 - up);
    CHECK(std::abs(again.a - above.a) < 1e-9);
}

TEST_CASE("leading term of t") {
    using C = std::complex<double>;
    const C i{0.0, 1.0};
    auto is_fourth_root_of_minus_one = [](C z) { return std::abs(z * z * z * z + 1.0) < 1e-6; };
    std::map<std::string, std::vector<C>> seen;
    std::map<std::string, Rational> exponent;
    for (int p = 2; p <= 4; ++p) {
        for (const auto& r : regions(p)) {
            auto tl = t_leading(r);
            if (r.kneading.trivial()) {
                CHECK(tl.pole);
                CHECK(tl.t.exp == Rational(-1));
                CHECK(r.nu == -1);
                continue;
            }
            CHECK_FALSE(tl.pole);
            CHECK(tl.t.exp == Rational(r.nu, r.mu));
            seen[r.label].push_back(tl.t.coeff);
            exponent[r.label] = tl.t.exp;
        }
    }
    auto near = [](C a, C b) { return std::abs(a - b) < 1e-6; };
    CHECK(near(seen["10"].at(0), -1.0 / 3.0));
    CHECK(near(seen["110"].at(0), -1.0 / 9.0));
    CHECK(near(seen["1010"].at(0), 1.0 / 3.0));
    CHECK(near(seen["1110"].at(0), -1.0 / 15.0));
    CHECK(exponent["1110"] == Rational(5));
    auto pm = [&](const std::string& label, C value) {
        REQUIRE(seen[label].size() == 2);
        std::multiset<std::pair<double, double>> got, want{{value.real(), value.imag()}, {-value.real(), -value.imag()}};
        for (C z : seen[label]) got.insert({std::round(z.real() * 1e6) / 1e6, std::round(z.imag() * 1e6) / 1e6});
        std::multiset<std::pair<double, double>> rounded;
        for (auto [x, y] : want) rounded.insert({std::round(x * 1e6) / 1e6, std::round(y * 1e6) / 1e6});
        CHECK(got == rounded);
    };
    pm("100", 1.0 / 12.0);
    pm("010", -i / 12.0);
    pm("1100", 1.0 / 24.0);
    pm("0110", -i / 24.0);
    for (C z : seen["1000s"]) CHECK(near(z, 1.0 / 36.0));
    for (C z : seen["1000t"]) CHECK(near(z, -1.0 / 36.0));
    for (const char* label : {"0100", "0010"}) {
        REQUIRE(seen[label].size() == 2);
        for (C z : seen[label]) CHECK(is_fourth_root_of_minus_one(-30.0 * z));
        CHECK(exponent[label] == Rational(5, 2));
    }

    // trivial kneading: lim a / t = psi_p(2c)
    std::vector<cplx> limits;
    for (const auto& r : regions(3))
        if (r.kneading.trivial()) limits.push_back(1.0 / t_leading(r).pole_coefficient);
    bool airplane = false;
    for (cplx l : limits) airplane = airplane || std::abs(l - -5.649) < 1e-3;
    CHECK(airplane);
    CHECK(t_leading(solved_regions(1).front()).pole_coefficient == cplx{1.0, 0.0});
}

TEST_CASE("residue at ideal points") {
    for (int p = 1; p <= 4; ++p) {
        for (const auto& r : regions(p)) {
            CAPTURE(r.label);
            auto res = residue_at_ideal(r);
            CHECK(std::abs(res.residue) < 1e-6);
            CHECK(res.turns == r.mu);
        }
    }
    // a wrong multiplicity is caught by the closure count
    RegionDescriptor bad;
    for (const auto& r : regions(4))
        if (r.mu == 2) bad = r;
    bad.mu = 1;
    CHECK_THROWS_AS(residue_at_ideal(bad), SheetMismatch);
    CHECK_THROWS_AS(residue_at_ideal(RegionDescriptor{.p = 3, .kneading = Kneading::parse("110")}), InvalidArgument);
}

TEST_CASE("euler characteristic") {
    const long long d[] = {0, 1, 2, 8, 24};
    const long long chi[] = {0, 2, 2, 0, -28};
    const long long n[] = {0, 1, 2, 8, 20};
    for (int p = 1; p <= 4; ++p) {
        CHECK(degree(p) == d[p]);
        EulerRow row = euler_row(p);
        CHECK(row.regions == n[p]);
        CHECK(row.chi_compact == chi[p]);
        CHECK(euler_from_windings(regions(p)) == row.chi_compact);
        long long nu = 0;
        for (const auto& r : regions(p)) nu += r.nu;
        CHECK(nu == (p - 2) * d[p]);
    }
    CHECK(degree(6) == 232);
    CHECK(euler_row(3).genus_if_connected == 1);
    CHECK(euler_row(4).genus_if_connected == 15);
    CHECK(to_json(euler_row(4)).dump() == R"({"d":24,"chi_affine":-48,"N":20,"chi_compact":-28,"genus_if_connected":15})");
    CHECK_THROWS_AS(degree(0), InvalidArgument);
}

TEST_CASE("symmetric product over a fiber") {
    for (auto [p, j] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 2}}) {
        CAPTURE(p);
        CAPTURE(j);
        auto [c1, c2] = sym_product_check(p, 7.0, cplx(-3.0, 5.0), j);
        CHECK(std::abs(c1 - c2) < 1e-6 * std::abs(c1));
        MESSAGE("p=" << p << " j=" << j << " constant " << c1);
    }
    CHECK_THROWS_AS(sym_product_check(3, 7.0, 8.0, 3), InvalidArgument);
}

TEST_CASE("t-plane rendering") {
    CurvePoint base{10.0, fiber_roots(2, 10.0).front(), 2};
    auto one = render(base, {.width = 1, .height = 1, .center = 0.0, .scale = 1e-3});
    REQUIRE(one.pixels.size() == 1);
    CHECK(one.pixels[0] == classify_code(base));
    CHECK(one.pixels[0] >= 1);

    CurvePoint quad{0.1, 0.0, 1};
    CHECK(classify_code(quad) == 0);

    TPlaneView view{.width = 6, .height = 4, .center = 0.0, .scale = 0.01};
    auto first = render(base, view, 1), second = render(base, view, 3);
    CHECK(first.pixels == second.pixels);
    std::string ppm = to_ppm(first);
    CHECK(ppm.rfind("P6\n# base a=10,0", 0) == 0);
    CHECK(ppm.size() == ppm.find("255\n") + 4 + 6 * 4 * 3);
    CHECK(palette(0) == std::array<std::uint8_t, 3>{0, 0, 0});
    CHECK(palette(kFlowFailed) == std::array<std::uint8_t, 3>{255, 0, 255});
    CHECK_THROWS_AS(render(base, {.width = 0}), InvalidArgument);
}
