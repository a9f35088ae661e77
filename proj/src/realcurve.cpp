#include "cubicurve/realcurve.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cubicurve/errors.hpp"

namespace cubicurve {

std::string to_string(Orientation o) { return o == Orientation::Plus ? "+" : "-"; }

int BimodalModel::free_critical() const {
    if (type_a) return marked;
    auto t = turning_points(perm, orientation);
    return t[0] == marked ? t[1] : t[0];
}

std::vector<int> BimodalModel::orbit() const {
    std::vector<int> out{marked};
    for (int j = 1; j < p; ++j) out.push_back(perm[out.back()]);
    return out;
}

std::vector<int> turning_points(const std::vector<int>& perm, Orientation o) {
    const int n = static_cast<int>(perm.size());
    const int outer = o == Orientation::Plus ? 1 : -1;
    auto slope = [&](int lap) {  // lap i runs from i-1 to i; laps 0 and n are the outer ones
        if (lap == 0 || lap == n) return outer;
        return perm[lap] > perm[lap - 1] ? 1 : -1;
    };
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (slope(i) != slope(i + 1)) out.push_back(i);
    return out;
}

bool is_cyclic(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    int x = 0;
    for (int k = 1; k <= n; ++k) {
        x = perm[x];
        if (x == 0) return k == n;
    }
    return false;
}

std::vector<BimodalModel> enumerate_components(int p, Orientation o) {
    if (p < 1) throw InvalidArgument("period must be positive");
    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<BimodalModel> out;
    do {
        if (!is_cyclic(perm)) continue;
        auto t = turning_points(perm, o);
        if (t.size() == 2) {
            for (int m : t) out.push_back({p, perm, o, m, false});
        } else if (t.empty() && p <= 2) {
            out.push_back({p, perm, o, 0, true});
            if (p == 2) out.push_back({p, perm, o, 1, true});
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(out.begin(), out.end());
    return out;
}

BimodalModel involution(const BimodalModel& m) {
    BimodalModel r = m;
    for (int x = 0; x < m.p; ++x) r.perm[x] = m.p - 1 - m.perm[m.p - 1 - x];
    r.marked = m.p - 1 - m.marked;
    return r;
}

std::vector<BimodalModel> modulo_involution(const std::vector<BimodalModel>& models) {
    std::vector<BimodalModel> out;
    for (const auto& m : models) out.push_back(std::min(m, involution(m)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

StarKneading::StarKneading(std::vector<int> digits) : digits_(std::move(digits)) {
    if (digits_.empty()) throw InvalidArgument("empty address sequence");
    if (std::count(digits_.begin(), digits_.end(), kStar) > 1) throw InvalidArgument("more than one star");
    for (int d : digits_)
        if (d < 0 || d > kStar) throw InvalidArgument("addresses are 0, 1 or a star");
}

std::optional<int> StarKneading::star() const {
    auto it = std::find(digits_.begin(), digits_.end(), kStar);
    if (it == digits_.end()) return std::nullopt;
    return static_cast<int>(it - digits_.begin()) + 1;
}

Kneading StarKneading::resolve(int bit) const {
    std::vector<int> bits = digits_;
    for (int& b : bits)
        if (b == kStar) b = bit;
    return Kneading(std::move(bits));
}

std::string StarKneading::str() const {
    std::string s;
    for (int d : digits_) s += d == kStar ? std::string("★") : std::string(1, char('0' + d));
    return s;
}

StarKneading star_kneading(const std::vector<double>& pos, double free_pos) {
    const int p = static_cast<int>(pos.size());
    std::vector<int> digits;
    for (int j = 1; j <= p; ++j) {
        double x = pos[j % p];
        if (x == free_pos) digits.push_back(StarKneading::kStar);
        else digits.push_back((x < free_pos) == (pos[0] < free_pos) ? 0 : 1);
    }
    return StarKneading(std::move(digits));
}

StarKneading star_kneading(const BimodalModel& m) {
    auto orb = m.orbit();
    if (m.type_a) {
        // the orbit lies on one side of the double critical point, which can split either way
        std::vector<int> digits(m.p, 0);
        if (m.p > 1) digits[0] = StarKneading::kStar;
        return StarKneading(std::move(digits));
    }
    std::vector<double> pos(orb.begin(), orb.end());
    return star_kneading(pos, m.free_critical());
}

std::string RealEndpoint::label() const { return sides.empty() ? kneading.str() : kneading.str() + " " + sides; }

namespace {

std::string normalized(std::string s) {
    if (!s.empty() && s[0] == '-')
        for (char& c : s) c = c == '+' ? '-' : '+';
    return s;
}

RealEndpoint endpoint(const BimodalModel& m, const Kneading& k) {
    auto orb = m.orbit();
    RealEndpoint e{k, {}};
    for (int j = 1; j < m.p; ++j)
        if (k.sigma(j) == 0) e.sides += orb[j] > orb[0] ? '+' : '-';
    e.sides = normalized(e.sides);
    return e;
}

}  // namespace

std::pair<RealEndpoint, RealEndpoint> endpoints(const BimodalModel& m) {
    auto s = star_kneading(m);
    return {endpoint(m, s.resolve(0)), endpoint(m, s.resolve(1))};
}

bool involution_related(const RegionDescriptor& x, const RegionDescriptor& y) {
    if (x.kneading != y.kneading || x.monomials.size() != y.monomials.size()) return false;
    const int mu = std::max(x.mu, y.mu);
    for (int m = 1; m < 2 * mu; m += 2) {
        bool all = true;
        for (size_t j = 0; j < x.monomials.size() && all; ++j) {
            const auto& mx = x.monomials[j];
            const auto& my = y.monomials[j];
            double e = boost::rational_cast<double>(mx.exp);
            cplx turned = mx.coeff * std::polar(1.0, std::numbers::pi * m * e);
            all = mx.exp == my.exp && std::abs(turned - my.coeff) < 1e-8 * std::max(1.0, std::abs(my.coeff));
        }
        if (all) return true;
    }
    return false;
}

std::vector<IdealClass> ideal_classes(const std::vector<RegionDescriptor>& regions) {
    std::vector<IdealClass> out;
    std::vector<bool> taken(regions.size(), false);
    for (size_t i = 0; i < regions.size(); ++i) {
        if (taken[i]) continue;
        IdealClass c{regions[i].label, {regions[i]}};
        for (size_t k = i + 1; k < regions.size(); ++k)
            if (!taken[k] && involution_related(regions[i], regions[k])) {
                taken[k] = true;
                c.regions.push_back(regions[k]);
            }
        out.push_back(std::move(c));
    }
    std::map<std::string, int> uses;
    for (auto& c : out) ++uses[c.label];
    for (size_t i = 0; i < out.size(); ++i) {
        if (uses[out[i].label] == 1) continue;
        std::ostringstream tag;
        tag << std::fixed << std::setprecision(4);
        if (auto q = out[i].regions[0].quad_center) {
            tag << " c=" << std::real(*q);
            if (std::abs(std::imag(*q)) > 1e-9) tag << std::showpos << std::imag(*q) << "i";
        } else {
            tag << " #" << i;
        }
        out[i].label += tag.str();
    }
    return out;
}

std::set<std::string> approach_patterns(const RegionDescriptor& r, Orientation o) {
    std::set<std::string> out;
    const double pi = std::numbers::pi;
    const double base = o == Orientation::Plus ? 0.0 : pi / 2;
    for (double arg : {base, base + pi}) {
        for (int k = 0; k < r.mu; ++k) {
            double theta = (arg + 2 * pi * k) / r.mu;  // argument of xi^(1/mu)
            std::string sides;
            bool real = true;
            for (int j = 1; j < r.p && real; ++j) {
                const auto& m = r.monomials[j - 1];
                cplx value = m.coeff * std::polar(1.0, boost::rational_cast<double>(m.exp) * r.mu * theta);
                real = std::abs(std::imag(value)) <= 1e-8 * std::abs(value);
                if (r.kneading.sigma(j) == 0) sides += std::real(value) < 0 ? '+' : '-';
            }
            if (real) out.insert(normalized(sides));
        }
    }
    return out;
}

const IdealClass& locate(const RealEndpoint& e, Orientation o, const std::vector<IdealClass>& classes) {
    const IdealClass* found = nullptr;
    for (const auto& c : classes) {
        bool hit = false;
        for (const auto& r : c.regions)
            hit = hit || (r.kneading == e.kneading && approach_patterns(r, o).count(e.sides));
        if (!hit) continue;
        if (found) throw Inconsistent("end " + e.label() + " matches " + found->label + " and " + c.label);
        found = &c;
    }
    if (!found) throw Inconsistent("end " + e.label() + " matches no region");
    return *found;
}

std::vector<RealCircle> real_circles(int p) { return real_circles(p, solved_regions(p)); }

std::vector<RealCircle> real_circles(int p, const std::vector<RegionDescriptor>& regions) {
    auto classes = ideal_classes(regions);
    std::vector<BimodalModel> edges;
    for (auto o : {Orientation::Plus, Orientation::Minus})
        for (auto& m : modulo_involution(enumerate_components(p, o))) edges.push_back(m);

    std::vector<std::pair<std::string, std::string>> ends;
    std::map<std::string, std::vector<int>> incident;
    for (size_t i = 0; i < edges.size(); ++i) {
        auto [e0, e1] = endpoints(edges[i]);
        std::string v0 = locate(e0, edges[i].orientation, classes).label;
        std::string v1 = locate(e1, edges[i].orientation, classes).label;
        ends.emplace_back(v0, v1);
        incident[v0].push_back(static_cast<int>(i));
        if (v1 != v0) incident[v1].push_back(static_cast<int>(i));
    }
    for (auto& [v, list] : incident) {
        bool loops_only = std::all_of(list.begin(), list.end(), [&](int i) { return ends[i].first == ends[i].second; });
        if (!loops_only && list.size() != 2) throw Inconsistent("ideal point " + v + " meets " + std::to_string(list.size()) + " edges");
    }

    std::vector<bool> used(edges.size(), false);
    std::vector<RealCircle> out;
    for (size_t first = 0; first < edges.size(); ++first) {
        if (used[first]) continue;
        RealCircle c;
        const std::string start = ends[first].first;
        std::string at = start;
        int e = static_cast<int>(first);
        while (true) {
            used[e] = true;
            c.vertices.push_back(at);
            c.edges.push_back(edges[e]);
            at = ends[e].first == at ? ends[e].second : ends[e].first;
            if (at == start) break;
            auto& list = incident[at];
            auto next = std::find_if(list.begin(), list.end(), [&](int i) { return !used[i]; });
            if (next == list.end()) throw Inconsistent("open chain at " + at);
            e = *next;
        }
        out.push_back(std::move(c));
    }
    return out;
}

nlohmann::ordered_json to_json(const BimodalModel& m) {
    auto [e0, e1] = endpoints(m);
    nlohmann::ordered_json j;
    j["p"] = m.p;
    j["orientation"] = to_string(m.orientation);
    j["perm"] = m.perm;
    j["marked"] = m.marked;
    j["type"] = m.type_a ? "A" : "B";
    j["star_kneading"] = star_kneading(m).str();
    j["ends"] = {e0.label(), e1.label()};
    return j;
}

}  // namespace cubicurve
