#include <doctest.h>

#include <algorithm>
#include <map>

#include "cubicurve/errors.hpp"
#include "cubicurve/grid.hpp"

using namespace cubicurve;

namespace {

constexpr int inf = kInfiniteDepth;

const std::vector<RegionDescriptor>& regions(int p) {
    static std::map<int, std::vector<RegionDescriptor>> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, solved_regions(p)).first;
    return it->second;
}

const RegionDescriptor& by_label(int p, const std::string& label) {
    for (const auto& r : regions(p))
        if (r.label == label) return r;
    throw std::runtime_error("no region " + label);
}

Rational R(long long n, long long d = 1) { return Rational(n, d); }

}  // namespace

TEST_CASE("mod_level") {
    MarkedGrid fig3({inf, 0, 1, 1});
    MarkedGrid all({inf, inf, inf});
    for (const auto* g : {&fig3, &all}) CHECK(mod_level(*g, 1) == R(1));
    for (int l = 1; l <= 10; ++l) CHECK(mod_level(all, l) == R(1, 1LL << (l - 1)));
    CHECK(mod_level(fig3, 2) == R(1));
    CHECK_THROWS_AS(mod_level(fig3, 0), InvalidArgument);
}

TEST_CASE("ord_from_grid") {
    MarkedGrid all({inf, inf, inf, inf});
    for (int j = 1; j < 4; ++j) CHECK(ord_from_grid(all, j) == R(2));
    MarkedGrid fig3({inf, 0, 1, 1});
    CHECK(ord_from_grid(fig3, 1) == R(0));
    CHECK(ord_from_grid(fig3, 2) == R(1));
    CHECK(ord_from_grid(fig3, 3) == R(1));
    auto g = grid_from_orders({R(1), R(0), R(3, 2)}, Kneading::parse("0100"));
    CHECK(ord_from_grid(g, 3) == R(3, 2));
    // satellite of the period-2 escape region: column 2 marked at every level
    MarkedGrid sat({inf, 0, inf, 0});
    CHECK(ord_from_grid(sat, 2) == R(4));
}

TEST_CASE("multiplicity and winding number") {
    CHECK(multiplicity({R(0), R(1), R(1)}) == 1);
    CHECK(multiplicity({R(1), R(0), R(3, 2)}) == 2);
    CHECK(multiplicity({R(2), R(5), R(7)}) == 1);
    CHECK_THROWS_AS(multiplicity({R(1, 3)}), NotPowerOfTwo);

    auto g110 = grid_from_orders({R(0), R(0)}, Kneading::parse("110"));
    CHECK(winding_number(g110, 1) == 3);
    CHECK(winding_number(MarkedGrid({inf, inf, inf}), 1) == -1);
    auto g0100 = grid_from_orders({R(1), R(0), R(3, 2)}, Kneading::parse("0100"));
    CHECK(winding_number(g0100, 2) == 5);
}

TEST_CASE("grid rules") {
    CHECK(validate_rules(MarkedGrid({inf, 0, 1, 1})).ok);
    CHECK(validate_rules(MarkedGrid({inf, inf})).ok);
    auto bad = validate_rules(std::vector<std::vector<int>>{{1, 1}, {1, 0}, {1, 1}});
    CHECK_FALSE(bad.ok);
    CHECK(bad.rule == "R1");
    CHECK(bad.level == 2);
    CHECK(bad.column == 1);
    CHECK(validate_rules(std::vector<std::vector<int>>{{1, 1, 1, 1}, {1, 0, 1, 1}, {1, 0, 0, 0}}).ok);
    // a_2 deeper than a_1 allows while column 1 stays empty breaks the shift rule
    CHECK_FALSE(validate_rules(MarkedGrid({inf, 0, 3})).ok);
}

TEST_CASE("grid_from_orders") {
    auto all = grid_from_orders({R(2), R(2), R(2)}, Kneading::parse("0000"));
    CHECK(all == MarkedGrid({inf, inf, inf, inf}));
    auto fig3 = grid_from_orders({R(0), R(1), R(1)}, Kneading::parse("1000"));
    CHECK(fig3 == MarkedGrid({inf, 0, 1, 1}));
    CHECK_THROWS_AS(grid_from_orders({R(1, 2), R(0), R(0)}, Kneading::parse("1000")), Inconsistent);
}

TEST_CASE("ascii rendering") {
    auto art = render_ascii(MarkedGrid({inf, 0, 1, 1}), 2);
    CHECK(art.rfind("o---o---o---o---o", 0) == 0);
    CHECK(art.find("|       |   |   |") != std::string::npos);
}

TEST_CASE("region counts and winding sums") {
    const size_t expect[] = {0, 1, 2, 8, 20};
    for (int p = 1; p <= 4; ++p) CHECK(regions(p).size() == expect[p]);
    int total = 0;
    std::map<std::string, int> nu;
    for (const auto& r : regions(4)) {
        total += r.nu;
        nu[r.label] += r.nu;
    }
    CHECK(total == 48);
    CHECK(nu["1000s"] + nu["1000t"] == 12);
    CHECK(nu["0100"] == 10);
    CHECK(nu["0010"] == 10);
    CHECK(nu["1010"] == 1);
}

TEST_CASE("regions round-trip through their grids") {
    for (int p = 1; p <= 4; ++p) {
        for (const auto& r : regions(p)) {
            CAPTURE(r.label);
            auto orders = r.series.orders();
            for (int j = 1; j < p; ++j) CHECK(ord_from_grid(r.grid, j) == orders[j - 1]);
            CHECK(r.mu == r.series.mu());
            CHECK(validate_rules(r.grid).ok);
            CHECK(p % r.grid.period() == 0);
            CHECK(r.grid.kneading() == r.kneading);
            if (!r.kneading.trivial()) CHECK(r.nu > 0);
            const int n = r.grid.period();
            Rational partial(0);
            for (int k = 1; k < p; ++k) {
                partial += Rational(2) - orders[k - 1];
                CHECK(partial >= Rational(0));
                CHECK((partial == Rational(0)) == (k % n == 0));
            }
        }
    }
}

TEST_CASE("satellite multiplicity matches its base") {
    for (const auto& r : regions(4)) {
        if (r.grid.period() == 2) {
            CHECK(r.mu == 1);
            CHECK(r.kneading.str() == "1010");
        }
    }
}

TEST_CASE("period six grids pass the rules") {
    const std::map<std::string, std::vector<int>> depths{{"100100", {inf, 0, 1, 3, 0, 1}},
                                                         {"010010", {inf, 1, 0, 2, 1, 0}}};
    for (const auto& [k, expect] : depths) {
        CAPTURE(k);
        auto sigma = Kneading::parse(k);
        auto sols = solve_primitive(sigma);
        REQUIRE_FALSE(sols.empty());
        for (const auto& s : sols) {
            auto g = grid_from_orders(s.orders(), sigma);
            CHECK(validate_rules(g).ok);
            CHECK(g.period() == 6);
            CHECK(g.depths() == expect);
        }
    }
}

TEST_CASE("orbit pseudometric") {
    const auto& s = by_label(4, "1000s");
    const auto& t = by_label(4, "1000t");
    auto ds = orbit_pseudometric(s);
    auto dt = orbit_pseudometric(t);
    CHECK(ds[2][3] == R(1, 2));
    CHECK(dt[2][3] == R(1, 4));
    const std::vector<Rational> row0{R(0), R(1), R(1, 2), R(1, 2)};
    for (const auto* d : {&ds, &dt}) {
        CHECK((*d)[0] == row0);
        for (int j = 0; j < 4; ++j)
            if (j != 1) CHECK((*d)[1][j] == R(1));
    }
}

TEST_CASE("pseudometric properties on small periods") {
    for (int p = 2; p <= 4; ++p) {
        for (const auto& r : regions(p)) {
            CAPTURE(r.label);
            auto d = orbit_pseudometric(r);
            for (int i = 0; i < p; ++i) {
                CHECK(d[i][i] == R(0));
                for (int j = 0; j < p; ++j) {
                    CHECK(d[i][j] == d[j][i]);
                    CHECK(d[(i + 1) % p][(j + 1) % p] <= Rational(2) * d[i][j]);
                    for (int k = 0; k < p; ++k) CHECK(d[i][k] <= std::max(d[i][j], d[j][k]));
                }
                if (d[0][i] < R(1)) CHECK(d[1][(i + 1) % p] == Rational(2) * d[0][i]);
            }
        }
    }
}

TEST_CASE("region json") {
    auto j = to_json(by_label(4, "0100"));
    CHECK(j["p"] == 4);
    CHECK(j["kneading"] == "0100");
    CHECK(j["mu"] == 2);
    CHECK(j["nu"] == 5);
    CHECK(j["depths"][0].is_null());
    CHECK(j["quad_center"].is_null());
    CHECK(j["series"].size() == 3);
}

TEST_CASE("regions of a single kneading") {
    for (int p = 1; p <= 4; ++p) {
        auto all = solved_regions(p);
        for (const auto& k : all_kneadings(p)) {
            std::vector<std::string> want, got;
            for (const auto& r : all)
                if (r.kneading == k) want.push_back(r.label + to_json(r).dump());
            for (const auto& r : solved_regions(k)) got.push_back(r.label + to_json(r).dump());
            std::sort(want.begin(), want.end());
            std::sort(got.begin(), got.end());
            CHECK_MESSAGE(want == got, k.str());
        }
    }
    CHECK(solved_regions(Kneading::parse("1000"), 4).size() == 4);
}
