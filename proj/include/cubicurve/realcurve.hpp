#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cubicurve/grid.hpp"
#include "cubicurve/solver.hpp"

namespace cubicurve {

// Plus: real maps, outer slope > 1. Minus: pure imaginary maps, outer slope < -1.
enum class Orientation { Plus, Minus };
std::string to_string(Orientation o);

// Piecewise linear model on [0, p-1] of a center on the real or imaginary locus. The
// integers are the marked orbit in increasing order, perm[i] is the image of i.
struct BimodalModel {
    int p = 1;
    std::vector<int> perm;
    Orientation orientation = Orientation::Plus;
    int marked = 0;       // position of a_0
    bool type_a = false;  // both critical points at a_0; otherwise the free one sits at the other extremum

    // Position of the free critical point.
    int free_critical() const;
    // Positions of a_0, a_1, ..., a_{p-1}.
    std::vector<int> orbit() const;

    friend bool operator==(const BimodalModel&, const BimodalModel&) = default;
    friend auto operator<=>(const BimodalModel&, const BimodalModel&) = default;
};

// Interior and endpoint extrema of the extended map, in increasing order.
std::vector<int> turning_points(const std::vector<int>& perm, Orientation o);
bool is_cyclic(const std::vector<int>& perm);

// Every component of the real (Plus) or imaginary (Minus) locus of S_p, as models
// sorted by (perm, marked). Type A models appear only for p <= 2.
std::vector<BimodalModel> enumerate_components(int p, Orientation o);

// Reflection x -> p-1-x, the model of I(P) where I(F)(z) = -F(-z).
BimodalModel involution(const BimodalModel& m);
// One representative per I-orbit, the smaller of m and involution(m).
std::vector<BimodalModel> modulo_involution(const std::vector<BimodalModel>& models);

// Addresses of a_1 .. a_p relative to the free critical point; kStar marks equality.
class StarKneading {
public:
    static constexpr int kStar = 2;

    StarKneading() = default;
    explicit StarKneading(std::vector<int> digits);

    int p() const { return static_cast<int>(digits_.size()); }
    const std::vector<int>& digits() const { return digits_; }
    std::optional<int> star() const;  // 1-based position of the star
    // Kneading with the star replaced by bit; the sequence itself when there is no star.
    Kneading resolve(int bit) const;
    std::string str() const;  // uses U+2605 for the star

    friend bool operator==(const StarKneading&, const StarKneading&) = default;

private:
    std::vector<int> digits_;
};

StarKneading star_kneading(const BimodalModel& m);
// Addresses of an ordering with the free critical point at real position free_pos; the
// star appears when free_pos hits an orbit point.
StarKneading star_kneading(const std::vector<double>& orbit_positions, double free_pos);

// Ideal point at one end of a component: its kneading and, for every j < p with
// sigma_j = 0, the side of a_j relative to a_0 up to a global flip.
struct RealEndpoint {
    Kneading kneading;
    std::string sides;
    std::string label() const;

    friend bool operator==(const RealEndpoint&, const RealEndpoint&) = default;
    friend auto operator<=>(const RealEndpoint&, const RealEndpoint&) = default;
};
// Ends reached with the star resolved to 0 and to 1.
std::pair<RealEndpoint, RealEndpoint> endpoints(const BimodalModel& m);

// Escape regions identified by xi -> -xi.
struct IdealClass {
    std::string label;  // region label, with the quadratic center when the label repeats
    std::vector<RegionDescriptor> regions;
};
std::vector<IdealClass> ideal_classes(const std::vector<RegionDescriptor>& regions);
bool involution_related(const RegionDescriptor& x, const RegionDescriptor& y);

// Side patterns of the sigma = 0 orbit points seen when the region is approached along
// the locus, one per direction and branch of xi^(1/mu) that keeps their leading terms real.
std::set<std::string> approach_patterns(const RegionDescriptor& r, Orientation o);

// The class whose region is reached at this end. Throws Inconsistent unless exactly one matches.
const IdealClass& locate(const RealEndpoint& e, Orientation o, const std::vector<IdealClass>& classes);

// Closed real curve in the compactified S_p / I made of component edges.
struct RealCircle {
    std::vector<std::string> vertices;  // ideal class labels in cyclic order
    std::vector<BimodalModel> edges;
};
// Circles formed by both orientations modulo I, with ends located among the solved
// regions. Throws Inconsistent when an end matches no region or the edges do not close up.
std::vector<RealCircle> real_circles(int p);
std::vector<RealCircle> real_circles(int p, const std::vector<RegionDescriptor>& regions);

nlohmann::ordered_json to_json(const BimodalModel& m);

}  // namespace cubicurve
