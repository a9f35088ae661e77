#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubicurve/series.hpp"
#include "cubicurve/solver.hpp"

namespace cubicurve {

inline constexpr int kInfiniteDepth = std::numeric_limits<int>::max();

// Critical marked grid stored by column depths L_0(a_k); M(l, k) = [l <= L_0(a_{k mod p})].
class MarkedGrid {
public:
    MarkedGrid() = default;
    explicit MarkedGrid(std::vector<int> depth);

    int p() const { return static_cast<int>(depth_.size()); }
    int depth(int k) const;
    bool marked(int level, int k) const { return level <= depth(k); }
    const std::vector<int>& depths() const { return depth_; }
    // Least n > 0 whose column is marked at every level.
    int period() const;
    Kneading kneading() const;
    // Largest finite depth (0 when there is none).
    int max_finite_depth() const;

    friend bool operator==(const MarkedGrid&, const MarkedGrid&) = default;

private:
    std::vector<int> depth_{kInfiniteDepth};
};

struct RuleReport {
    bool ok = true;
    std::string rule;  // "R1".."R4" when violated
    int level = 0;
    int column = 0;
    std::string str() const;
};

// MOD_l = 1/2^(k-1), k = #{0 <= i < l : M(l - i, i) = 1}.
Rational mod_level(const MarkedGrid& g, int level);
// Sum of MOD_l for l = 1 .. L_0(a_j), with the infinite case summed in closed form.
Rational ord_from_grid(const MarkedGrid& g, int j);
// Least common denominator of the orders; throws NotPowerOfTwo otherwise.
int multiplicity(const std::vector<Rational>& orders);
int winding_number(const MarkedGrid& g, int mu);
RuleReport validate_rules(const MarkedGrid& g);
// rows[l][k] for l = 0 .. rows.size()-1, columns 0 .. p-1. Columns marked on every
// given row are taken to be marked at all levels.
RuleReport validate_rules(const std::vector<std::vector<int>>& rows);
// orders holds ord(u_1) .. ord(u_{p-1}).
MarkedGrid grid_from_orders(const std::vector<Rational>& orders, const Kneading& sigma);
std::string render_ascii(const MarkedGrid& g, int levels = -1);

struct RegionDescriptor {
    int p = 1;
    Kneading kneading;
    MarkedGrid grid;
    std::vector<Monomial> monomials;
    int mu = 1;
    int nu = -1;
    SolutionVector series;
    std::optional<cplx> quad_center;
    bool self_dual = false;
    std::string label;  // kneading string plus a tag separating regions with one kneading
};

// Kneading string, with s or t appended for 1000 (a_2, a_3 separate or together).
std::string region_label(const Kneading& sigma, const std::vector<Monomial>& monomials);
RegionDescriptor describe(const SolutionVector& s, std::optional<cplx> quad_center = std::nullopt);
nlohmann::json to_json(const RegionDescriptor& r);

// All escape regions of S_p from the series solver, one per Galois class.
std::vector<RegionDescriptor> solved_regions(int p, int trunc = kDefaultTrunc);
// The regions of one kneading sequence only.
std::vector<RegionDescriptor> solved_regions(const Kneading& k, int trunc = kDefaultTrunc);

// d(a_i, a_j) = 2^{-L(a_i, a_j)} on the critical orbit.
std::vector<std::vector<Rational>> orbit_pseudometric(const RegionDescriptor& r);

}  // namespace cubicurve
