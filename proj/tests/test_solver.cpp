#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cubicurve/errors.hpp"
#include "cubicurve/solver.hpp"
#include "test_util.hpp"

using namespace cubicurve;
using testutil::poly;

namespace {

const cplx I{0.0, 1.0};

bool close(cplx a, cplx b, double tol = 1e-9) { return std::abs(a - b) < tol; }

// The series agrees with the listed terms below the given order.
bool starts_with(const PuiseuxSeries& u, const std::vector<std::pair<Rational, cplx>>& terms) {
    for (const auto& [e, c] : terms)
        if (!close(u.coeff(e), c)) return false;
    return true;
}

}  // namespace

TEST_CASE("error vector by direct substitution") {
    CHECK(error_vector(SolutionVector(1, {})).empty());
    auto e = error_vector(SolutionVector(2, {PuiseuxSeries::constant(1.0)}));
    REQUIRE(e.size() == 1);
    CHECK(e[0] == poly({{2, -1.0}}));
    auto w = SolutionVector(2, {poly({{0, 1.0}, {2, -1.0}, {4, -1.0}, {6, -2.0}})});
    CHECK(*error_vector(w)[0].ord() >= Rational(8));
}

TEST_CASE("star weights") {
    auto a = star({1.0, Rational(0)}, 1);
    CHECK(a.coeff == cplx(1.0));
    auto b = star({I, Rational(1)}, 0);
    CHECK(b.coeff == -2.0 * I);
    CHECK(b.exp == Rational(1));
    CHECK_THROWS_AS(star({I, Rational(1)}, 1), InconsistentSeed);
}

TEST_CASE("diagonal refinement of the period two seed") {
    SolutionVector w(2, {PuiseuxSeries::constant(1.0, 1, 12)});
    auto w1 = refine_diagonal(w);
    CHECK(starts_with(w1.u(1), {{Rational(0), 1.0}, {Rational(2), -1.0}}));
    auto w2 = refine_diagonal(w1);
    CHECK(starts_with(w2.u(1), {{Rational(0), 1.0}, {Rational(2), -1.0}, {Rational(4), -1.0}}));
    CHECK(leading_monomial(w2.u(1)).coeff == cplx(1.0));
    CHECK(residual_order(w2) > residual_order(w1));

    auto solved = solve_graded(w, 12);
    auto again = refine_diagonal(solved);
    CHECK(testutil::distance(again.u(1), solved.u(1)) < 1e-12);
}

TEST_CASE("seed validation") {
    std::vector<Monomial> all_one{{1.0, Rational(0)}, {1.0, Rational(0)}, {1.0, Rational(0)}};
    auto s = seed_from_monomials(all_one, Kneading::parse("1110"));
    auto u = solve_graded(s);
    for (int j = 1; j < 4; ++j) {
        CHECK(close(u.u(j).coeff(Rational(0)), 1.0));
        CHECK(close(u.u(j).coeff(Rational(2 * (4 - j))), -1.0));
        CHECK(u.m(j).exp == Rational(0));
    }
    const Monomial one{1.0, Rational(0)}, xi{1.0, Rational(1)}, mxi{-1.0, Rational(1)};
    CHECK_NOTHROW(seed_from_monomials(std::vector<Monomial>{one, xi, mxi}, Kneading::parse("1000")));
    CHECK_NOTHROW(seed_from_monomials(std::vector<Monomial>{one, xi, xi}, Kneading::parse("1000")));
    try {
        seed_from_monomials(std::vector<Monomial>{xi, {2.0, Rational(0)}}, Kneading::parse("010"));
        FAIL("expected rejection");
    } catch (const SeedRejected& e) {
        CHECK(e.index() == 2);
    }
}

TEST_CASE("trivial kneading") {
    auto u = solve_trivial_kneading(-1.0, 2);
    CHECK(starts_with(u.u(1), {{Rational(0), 0.0}, {Rational(2), 1.0}, {Rational(4), 1.0}, {Rational(6), 2.0}}));
    CHECK(solve_trivial_kneading(0.0, 1).interior().empty());
    auto air = solve_trivial_kneading(-1.75488, 3);
    CHECK(close(air.m(1).coeff, 1.75488, 1e-4));
    CHECK(air.m(1).exp == Rational(2));
    CHECK(residual_order(air) >= air.trunc() - 2);
    CHECK_THROWS_AS(solve_trivial_kneading(-1.0, 3), NotACenter);
    CHECK_THROWS_AS(solve_trivial_kneading(0.3, 2), NotACenter);
}

TEST_CASE("satellite of the period two region") {
    auto base = solve_primitive(Kneading::parse("10"));
    REQUIRE(base.size() == 1);
    std::vector<cplx> orbit{-1.0};
    auto m = satellite_monomials(base[0], orbit);
    REQUIRE(m.size() == 3);
    CHECK(close(m[1].coeff, 1.0));
    CHECK(m[1].exp == Rational(4));
    // (m1*/xi^2)(m2*/xi^2) = 2 c_1
    cplx prod = star(m[0], 1).coeff * star(m[1], 0).coeff;
    CHECK(m[0].exp + m[1].exp - Rational(4) == Rational(0));
    CHECK(close(prod, -2.0));

    auto sol = solve_graded(seed_from_monomials(m, Kneading::parse("1010")));
    CHECK(sol.kneading() == Kneading::parse("1010"));
    CHECK(residual_order(sol) >= sol.trunc() - 2);
    CHECK(close(sol.m(2).coeff, 1.0));
    CHECK(sol.m(2).exp == Rational(4));

    auto same = satellite_monomials(base[0], std::vector<cplx>{});
    REQUIRE(same.size() == 1);
    CHECK(close(same[0].coeff, base[0].m(1).coeff));
}

TEST_CASE("primitive orbits of periods 2, 3 and 4") {
    // kneading, expected number of classes, multiplicity
    struct Row {
        const char* k;
        size_t count;
        int mu;
    };
    for (Row r : {Row{"10", 1, 1}, {"110", 1, 1}, {"100", 2, 1}, {"010", 2, 1}, {"1110", 1, 1}, {"1100", 2, 1},
                  {"0110", 2, 1}, {"1000", 4, 1}, {"0100", 2, 2}, {"0010", 2, 2}}) {
        std::string name = r.k;
        CAPTURE(name);
        auto sols = solve_primitive(Kneading::parse(r.k));
        CHECK(sols.size() == r.count);
        for (const auto& s : sols) {
            CHECK(s.mu() == r.mu);
            CHECK(residual_order(s) >= s.trunc() - 2);
            CHECK(s.kneading() == Kneading::parse(r.k));
            CHECK(galois_orbit(s).size() == static_cast<size_t>(r.mu));
        }
    }
}

TEST_CASE("listed two-term expansions") {
    auto one = solve_primitive(Kneading::parse("110"));
    REQUIRE(one.size() == 1);
    CHECK(starts_with(one[0].u(1), {{Rational(0), 1.0}, {Rational(4), -1.0}}));
    CHECK(starts_with(one[0].u(2), {{Rational(0), 1.0}, {Rational(2), -1.0}}));

    auto s100 = solve_primitive(Kneading::parse("100"));
    for (const auto& s : s100) {
        cplx b = s.m(2).coeff;
        CHECK((close(b, 1.0) || close(b, -1.0)));
        CHECK(starts_with(s.u(2), {{Rational(2), 0.5}}));
        CHECK(starts_with(s.u(1), {{Rational(0), 1.0}, {Rational(2), -1.0}}));
    }

    for (const auto& s : solve_primitive(Kneading::parse("010"))) {
        cplx b = s.m(1).coeff;
        CHECK((close(b, I) || close(b, -I)));
        CHECK(starts_with(s.u(1), {{Rational(4), 0.5}}));
        CHECK(starts_with(s.u(2), {{Rational(0), 1.0}, {Rational(3), -b}}));
    }

    for (const auto& s : solve_primitive(Kneading::parse("0110"))) {
        cplx b = s.m(1).coeff;
        CHECK((close(b, I) || close(b, -I)));
        CHECK(starts_with(s.u(1), {{Rational(3), b / 2.0}}));
        CHECK(starts_with(s.u(2), {{Rational(0), 1.0}, {Rational(2), 1.0}}));
        CHECK(starts_with(s.u(3), {{Rational(0), 1.0}, {Rational(3), -b}}));
    }

    int s_type = 0, t_type = 0;
    for (const auto& s : solve_primitive(Kneading::parse("1000"))) {
        cplx b2 = s.m(2).coeff, b3 = s.m(3).coeff;
        CHECK(starts_with(s.u(1), {{Rational(0), 1.0}, {Rational(2), -1.0}}));
        if (close(b2, -b3)) {
            ++s_type;
            CHECK(starts_with(s.u(2), {{Rational(2), 1.0}}));
            CHECK(starts_with(s.u(3), {{Rational(2), 0.5}}));
        } else {
            ++t_type;
            CHECK(close(b2, b3));
            CHECK(starts_with(s.u(2), {{Rational(2), 0.0}, {Rational(3), -0.75 * b2}}));
            CHECK(starts_with(s.u(3), {{Rational(2), 0.5}}));
        }
    }
    CHECK(s_type == 2);
    CHECK(t_type == 2);

    for (const auto& s : solve_primitive(Kneading::parse("0100"))) {
        cplx w2 = s.m(1).coeff;  // omega^2
        CHECK(close(w2 * w2, -1.0));
        cplx omega = -s.m(3).coeff;
        CHECK(close(omega * omega, w2));
        CHECK(s.m(3).exp == Rational(3, 2));
        CHECK(starts_with(s.u(1), {{Rational(4), 0.5}}));
        CHECK(starts_with(s.u(2), {{Rational(0), 1.0}, {Rational(3), -w2}}));
        CHECK(starts_with(s.u(3), {{Rational(3), w2 / 2.0}}));
    }

    for (const auto& s : solve_primitive(Kneading::parse("0010"))) {
        cplx omega = s.m(1).coeff;
        CHECK(close(std::pow(omega, 4), -1.0));
        CHECK(s.m(1).exp == Rational(3, 2));
        CHECK(starts_with(s.u(1), {{Rational(2), 0.5}}));
        CHECK(starts_with(s.u(2), {{Rational(1), -omega * omega}, {Rational(2), -0.5}}));
        CHECK(starts_with(s.u(3), {{Rational(0), 1.0}, {Rational(7, 2), -omega}}));
    }
}

TEST_CASE("galois conjugates share orders and the dual swaps odd regions") {
    auto sols = solve_primitive(Kneading::parse("0100"));
    REQUIRE(sols.size() == 2);
    auto orbit = galois_orbit(sols[0]);
    REQUIRE(orbit.size() == 2);
    CHECK(orbit[0].orders() == orbit[1].orders());
    CHECK(close(orbit[1].m(3).coeff, -orbit[0].m(3).coeff));
    CHECK(galois_conjugate(orbit[0], orbit[1]));

    auto s100 = solve_primitive(Kneading::parse("100"));
    REQUIRE(s100.size() == 2);
    auto d = dual(s100[0]);
    CHECK(residual_order(d) >= d.trunc() - 2);
    CHECK(galois_conjugate(d, s100[1]));
    CHECK_FALSE(galois_conjugate(d, s100[0]));
}

TEST_CASE("even integer family") {
    for (const char* k : {"10", "110", "1110", "11110"}) {
        auto sols = solve_primitive(Kneading::parse(k));
        REQUIRE(sols.size() == 1);
        for (const auto& u : sols[0].interior()) {
            for (const auto& [i, c] : u.terms()) {
                CHECK(std::abs(c.imag()) < 1e-9);
                CHECK(std::abs(c.real() - std::round(c.real())) < 1e-9);
                if (i % 2 != 0) CHECK(std::abs(c) < 1e-9);
            }
        }
    }
}
