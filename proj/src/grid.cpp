#include "cubicurve/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cubicurve/errors.hpp"
#include "cubicurve/quadratic.hpp"

namespace cubicurve {

namespace {

Rational pow2_inv(int k) {
    if (k < 0 || k > 60) throw InvalidArgument("level count out of range");
    return Rational(1, 1LL << k);
}

bool is_power_of_two(long long x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

// -------------------------------------------------------------- MarkedGrid

MarkedGrid::MarkedGrid(std::vector<int> depth) : depth_(std::move(depth)) {
    if (depth_.empty()) throw InvalidArgument("grid needs at least one column");
    if (depth_[0] != kInfiniteDepth) throw InvalidArgument("column 0 must be marked at every level");
    for (int d : depth_)
        if (d < 0) throw InvalidArgument("negative column depth");
}

int MarkedGrid::depth(int k) const {
    int m = ((k % p()) + p()) % p();
    return depth_[m];
}

int MarkedGrid::period() const {
    for (int n = 1; n <= p(); ++n)
        if (depth(n) == kInfiniteDepth) return n;
    return p();
}

Kneading MarkedGrid::kneading() const {
    std::vector<int> bits(p(), 0);
    for (int j = 1; j < p(); ++j) bits[j - 1] = depth(j) == 0 ? 1 : 0;
    return Kneading(std::move(bits));
}

int MarkedGrid::max_finite_depth() const {
    int m = 0;
    for (int d : depth_)
        if (d != kInfiniteDepth) m = std::max(m, d);
    return m;
}

std::string RuleReport::str() const {
    if (ok) return "PASS";
    return "FAIL " + rule + " at level " + std::to_string(level) + ", column " + std::to_string(column);
}

// -------------------------------------------------------------- level sums

Rational mod_level(const MarkedGrid& g, int level) {
    if (level < 1) throw InvalidArgument("level must be at least 1");
    int k = 0;
    for (int i = 0; i < level; ++i)
        if (g.marked(level - i, i)) ++k;
    return pow2_inv(k - 1);
}

Rational ord_from_grid(const MarkedGrid& g, int j) {
    if (j <= 0 || j >= g.p()) throw InvalidArgument("column index must satisfy 0 < j < p");
    int depth = g.depth(j);
    if (depth != kInfiniteDepth) {
        Rational s(0);
        for (int l = 1; l <= depth; ++l) s += mod_level(g, l);
        return s;
    }
    // Past the deepest finite column, k_{l+p} = k_l + c with c the number of
    // infinite columns among 0..p-1, so the tail is a geometric series in blocks of p.
    const int p = g.p();
    int c = 0;
    for (int k = 0; k < p; ++k)
        if (g.depth(k) == kInfiniteDepth) ++c;
    int start = g.max_finite_depth() + 1;
    Rational head(0), block(0);
    for (int l = 1; l < start; ++l) head += mod_level(g, l);
    for (int l = start; l < start + p; ++l) block += mod_level(g, l);
    long long two_c = 1LL << c;
    return head + block * Rational(two_c, two_c - 1);
}

int multiplicity(const std::vector<Rational>& orders) {
    long long m = 1;
    for (const auto& q : orders) m = std::lcm(m, q.denominator());
    if (!is_power_of_two(m)) throw NotPowerOfTwo("least common denominator " + std::to_string(m));
    return static_cast<int>(m);
}

int winding_number(const MarkedGrid& g, int mu) {
    if (g.kneading().trivial()) return -1;
    int n = g.period();
    Rational s(0);
    for (int j = 1; j < n; ++j) s += ord_from_grid(g, j);
    Rational nu = (Rational(2 * n - 3) - s) * Rational(mu);
    if (nu.denominator() != 1) throw Inconsistent("winding number " + to_string(nu) + " is not an integer");
    return static_cast<int>(nu.numerator());
}

// ------------------------------------------------------------------- rules

RuleReport validate_rules(const MarkedGrid& g) {
    const int p = g.p();
    const int bound = g.max_finite_depth() + 2 * p + 2;
    auto fail = [](const char* rule, int l, int k) { return RuleReport{false, rule, l, k}; };
    auto d = [&](int k) { return g.depth(k); };

    for (int k = 0; k < p; ++k) {
        int top = std::min(d(k), bound);
        for (int l = 1; l <= top; ++l)
            for (int i = 0; i <= l; ++i)
                if (g.marked(l - i, k + i) != g.marked(l - i, i)) return fail("R2", l, k);
    }
    for (int m = 0; m < p; ++m) {
        if (d(m) == kInfiniteDepth) continue;
        const int l = d(m);
        for (int k = 1; k <= l; ++k) {
            bool hyp = d(k) != kInfiniteDepth ? d(k) > l - k : true;
            for (int i = 1; i < k && hyp; ++i) hyp = d(i) < l - i;
            if (hyp && d(m + k) != l - k) return fail("R3", l, m);
        }
    }
    for (int k = 0; k < p; ++k) {
        if (d(k) == kInfiniteDepth) continue;
        const int l = d(k);
        if (l < 1 || d(l) != 0) continue;
        bool hyp = true;
        for (int i = 1; i < l && hyp; ++i) hyp = d(k + i) < l - i;
        if (hyp && d(l + k) < 1) return fail("R4", l, k);
    }
    return {};
}

RuleReport validate_rules(const std::vector<std::vector<int>>& rows) {
    if (rows.empty() || rows[0].empty()) throw InvalidArgument("empty grid");
    const int p = static_cast<int>(rows[0].size());
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != p) throw InvalidArgument("ragged grid");
    for (int k = 0; k < p; ++k) {
        if (rows[0][k] != 1) return {false, "R1", 0, k};
        for (size_t l = 1; l < rows.size(); ++l)
            if (rows[l][k] > rows[l - 1][k]) return {false, "R1", static_cast<int>(l), k};
    }
    std::vector<int> depth(p);
    for (int k = 0; k < p; ++k) {
        int d = 0;
        while (d + 1 < static_cast<int>(rows.size()) && rows[d + 1][k] == 1) ++d;
        depth[k] = d + 1 == static_cast<int>(rows.size()) ? kInfiniteDepth : d;
    }
    return validate_rules(MarkedGrid(std::move(depth)));
}

MarkedGrid grid_from_orders(const std::vector<Rational>& orders, const Kneading& sigma) {
    const int p = sigma.p();
    if (static_cast<int>(orders.size()) != p - 1) throw InvalidArgument("need p-1 orders");
    std::vector<int> depth(p, 0);
    depth[0] = kInfiniteDepth;
    std::vector<bool> open(p, true);
    open[0] = false;
    // Columns still open are marked down to the current level.
    auto snapshot = [&](int level, bool open_as_infinite) {
        std::vector<int> d = depth;
        for (int k = 1; k < p; ++k)
            if (open[k]) d[k] = open_as_infinite ? kInfiniteDepth : level;
        return MarkedGrid(d);
    };
    auto matches = [&](const MarkedGrid& g) {
        if (g.kneading() != sigma) return false;
        for (int j = 1; j < p; ++j)
            if (ord_from_grid(g, j) != orders[j - 1]) return false;
        return true;
    };
    if (p == 1) return MarkedGrid({kInfiniteDepth});

    Rational partial(0);
    for (int level = 1; level <= 48; ++level) {
        MarkedGrid g = snapshot(level - 1, false);
        // MOD at this level only looks at levels already filled and at column 0.
        int k = 1;
        for (int i = 1; i < level; ++i)
            if (level - i <= g.depth(i)) ++k;
        partial += pow2_inv(k - 1);
        bool any_open = false;
        for (int c = 1; c < p; ++c) {
            if (!open[c]) continue;
            if (partial <= orders[c - 1]) {
                depth[c] = level;
                any_open = true;
            } else {
                open[c] = false;
            }
        }
        if (!any_open) {
            MarkedGrid done(depth);
            if (matches(done)) return done;
            throw Inconsistent("orders are not produced by any marked grid");
        }
        MarkedGrid candidate = snapshot(level, true);
        if (matches(candidate)) return candidate;
    }
    throw Inconsistent("marking pattern did not settle within 48 levels");
}

std::string render_ascii(const MarkedGrid& g, int levels) {
    const int p = g.p();
    const int cols = 2 * p + 1;
    if (levels < 0) levels = std::min(g.max_finite_depth() + 2, 12);
    std::ostringstream os;
    for (int l = 0; l <= levels; ++l) {
        if (l > 0) {
            for (int k = 0; k < cols; ++k) os << (g.marked(l, k) ? "|   " : "    ");
            os << "\n";
        }
        for (int k = 0; k < cols; ++k) {
            os << (g.marked(l, k) ? 'o' : '.');
            if (k + 1 < cols) os << (l == 0 ? "---" : "   ");
        }
        os << "\n";
    }
    return os.str();
}

// ----------------------------------------------------------------- regions

std::string region_label(const Kneading& sigma, const std::vector<Monomial>& monomials) {
    std::string label = sigma.str();
    if (label == "1000") {
        cplx b2 = monomials.at(1).coeff, b3 = monomials.at(2).coeff;
        label += std::abs(b2 + b3) < std::abs(b2 - b3) ? "s" : "t";
    }
    return label;
}

RegionDescriptor describe(const SolutionVector& s0, std::optional<cplx> quad_center) {
    SolutionVector s = s0.normalized();
    RegionDescriptor r;
    r.p = s.p();
    r.kneading = s.kneading();
    r.series = s;
    r.monomials = s.monomials();
    auto orders = s.orders();
    r.mu = multiplicity(orders);
    r.grid = grid_from_orders(orders, r.kneading);
    r.nu = winding_number(r.grid, r.mu);
    r.quad_center = quad_center;
    r.self_dual = galois_conjugate(dual(s), s, 1e-7);
    r.label = region_label(r.kneading, r.monomials);
    return r;
}

nlohmann::json to_json(const RegionDescriptor& r) {
    nlohmann::json depths = nlohmann::json::array();
    for (int d : r.grid.depths()) depths.push_back(d == kInfiniteDepth ? nlohmann::json(nullptr) : nlohmann::json(d));
    nlohmann::json monos = nlohmann::json::array();
    for (const auto& m : r.monomials) monos.push_back({{"coeff", {m.coeff.real(), m.coeff.imag()}}, {"exp", to_string(m.exp)}});
    nlohmann::json series = nlohmann::json::array();
    for (const auto& u : r.series.interior()) series.push_back(to_json(u));
    nlohmann::json j = {{"p", r.p},         {"kneading", r.kneading.str()}, {"label", r.label},
                        {"depths", depths}, {"monomials", monos},         {"mu", r.mu},
                        {"nu", r.nu},       {"series", series},           {"self_dual", r.self_dual}};
    j["quad_center"] = r.quad_center ? nlohmann::json({r.quad_center->real(), r.quad_center->imag()}) : nlohmann::json(nullptr);
    return j;
}

namespace {

std::vector<SolutionVector> primitive_solutions(int n, int trunc) {
    std::vector<SolutionVector> out;
    for (const auto& k : all_kneadings(n)) {
        if (k.trivial()) continue;
        for (auto& s : solve_primitive(k, trunc)) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::vector<RegionDescriptor> solved_regions(int p, int trunc) {
    if (p < 1) throw InvalidArgument("period must be positive");
    std::vector<RegionDescriptor> out;
    for (const auto& q : centers(p)) out.push_back(describe(solve_trivial_kneading(q.c, p, trunc), q.c));
    if (p == 1) return out;
    for (const auto& s : primitive_solutions(p, trunc)) out.push_back(describe(s));
    for (int n = 2; n < p; ++n) {
        if (p % n != 0) continue;
        auto bases = primitive_solutions(n, trunc);
        for (const auto& q : centers(p / n)) {
            for (const auto& base : bases) {
                auto orbit = q.critical_orbit();
                auto m = satellite_monomials(base, orbit);
                auto sigma = base.kneading().repeated(p / n);
                out.push_back(describe(solve_graded(seed_from_monomials(m, sigma, trunc), trunc), q.c));
            }
        }
    }
    return out;
}

std::vector<RegionDescriptor> solved_regions(const Kneading& k, int trunc) {
    const int p = k.p();
    if (p < 1) throw InvalidArgument("period must be positive");
    std::vector<RegionDescriptor> out;
    if (k.trivial()) {
        for (const auto& q : centers(p)) out.push_back(describe(solve_trivial_kneading(q.c, p, trunc), q.c));
        return out;
    }
    const int n = k.least_period();
    if (n == p) {
        for (const auto& s : solve_primitive(k, trunc)) out.push_back(describe(s));
        return out;
    }
    Kneading base(std::vector<int>(k.bits().begin(), k.bits().begin() + n));
    auto bases = solve_primitive(base, trunc);
    for (const auto& q : centers(p / n))
        for (const auto& b : bases) {
            auto m = satellite_monomials(b, q.critical_orbit());
            out.push_back(describe(solve_graded(seed_from_monomials(m, k, trunc), trunc), q.c));
        }
    return out;
}

// ------------------------------------------------------------- pseudometric

namespace {

// Least exponent where u and v differ beyond rounding; nullopt when they agree to truncation.
std::optional<Rational> difference_order(const PuiseuxSeries& u0, const PuiseuxSeries& v0) {
    int mu = static_cast<int>(lcm_ll(u0.mu(), v0.mu()));
    PuiseuxSeries u = u0.rescaled(mu), v = v0.rescaled(mu);
    int t = std::min(u.trunc(), v.trunc());
    std::map<int, bool> keys;
    for (const auto& [k, c] : u.terms()) keys[k] = true;
    for (const auto& [k, c] : v.terms()) keys[k] = true;
    for (const auto& [k, unused] : keys) {
        if (k >= t) break;
        cplx a = u.coeff_index(k), b = v.coeff_index(k);
        if (std::abs(a - b) > 1e-9 * std::max({std::abs(a), std::abs(b), 1e-300})) return Rational(k, mu);
    }
    return std::nullopt;
}

}  // namespace

std::vector<std::vector<Rational>> orbit_pseudometric(const RegionDescriptor& r) {
    const int p = r.p;
    const MarkedGrid& g = r.grid;
    const SolutionVector& s = r.series;
    const int levels = 8 * p + 32;
    // weight_i = ord(3u_i^2 - 2u_i)
    std::vector<Rational> weight(p, Rational(0));
    for (int i = 1; i < p; ++i) weight[i] = r.kneading.sigma(i) == 1 ? Rational(0) : s.m(i).exp;
    std::vector<std::vector<Rational>> lam(levels + 1, std::vector<Rational>(p, Rational(0)));
    for (int l = 1; l <= levels; ++l) {
        lam[l][0] = Rational(1) + lam[l - 1][1 % p] / Rational(2);
        for (int i = 1; i < p; ++i)
            lam[l][i] = g.marked(l, i) ? lam[l][0] : lam[l - 1][(i + 1) % p] + Rational(2) - weight[i];
    }
    auto level_of = [&](int i, int j) -> std::optional<int> {
        bool ii = g.depth(i) == kInfiniteDepth, jj = g.depth(j) == kInfiniteDepth;
        // d(a_0, a_{j-i}) = 0 pushes forward to d(a_i, a_j) = 0
        if (g.depth(j - i) == kInfiniteDepth) return std::nullopt;
        if (ii) return g.depth(j);
        if (jj) return g.depth(i);
        auto q = difference_order(s.u(i), s.u(j));
        if (!q) throw LevelAmbiguous("u_" + std::to_string(i) + " and u_" + std::to_string(j) + " agree to truncation");
        std::optional<int> found;
        for (int l = 0; l <= levels; ++l) {
            if (lam[l][i] != *q) continue;
            if (found) throw LevelAmbiguous("order " + to_string(*q) + " matches several levels");
            found = l;
        }
        if (!found)
            throw LevelAmbiguous("order " + to_string(*q) + " of u_" + std::to_string(i) + " - u_" + std::to_string(j) +
                                 " is not a level sum");
        return found;
    };
    std::vector<std::vector<Rational>> d(p, std::vector<Rational>(p, Rational(0)));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            auto l = level_of(i, j);
            d[i][j] = l ? pow2_inv(*l) : Rational(0);
        }
    return d;
}

}  // namespace cubicurve
