#include "cubicurve/finder.hpp"

#include <algorithm>
#include <cmath>

#include "cubicurve/errors.hpp"

namespace cubicurve {

std::string to_string(FinderStatus s) {
    switch (s) {
        case FinderStatus::Converged: return "CONVERGED";
        case FinderStatus::NotConverged: return "NOT_CONVERGED";
        case FinderStatus::WrongKneading: return "WRONG_KNEADING";
    }
    return "?";
}

cplx psi_step(cplx w1, cplx wj, cplx wj1, cplx xi, int sigma_j) {
    if (wj == cplx{}) throw InvalidArgument("w_j vanishes");
    cplx lift = xi * xi * (wj1 - w1);
    if (sigma_j == 1) return 1.0 + lift / (wj * wj);
    cplx den = wj * wj * (wj - 1.0);
    if (den == cplx{}) throw InvalidArgument("w_j^2 (w_j - 1) vanishes");
    return wj * principal_sqrt(lift / den);
}

namespace {

double residual_of(const std::vector<cplx>& w, cplx xi) {
    const int n = static_cast<int>(w.size());
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
        cplx next = j < n ? w[j] : cplx{};
        cplx e = xi * xi * (next - w[0]) - w[j - 1] * w[j - 1] * (w[j - 1] - 1.0);
        worst = std::max(worst, std::abs(e));
    }
    return worst;
}

// sigma_j = 0 iff |a_j - a| < |a_j + 2a|, that is |w_j| < |1 - w_j|.
std::optional<Kneading> kneading_from_w(const std::vector<cplx>& w, std::vector<std::string>& warnings) {
    std::vector<int> bits(w.size() + 1, 0);
    for (size_t j = 0; j < w.size(); ++j) {
        double near = std::abs(w[j]), far = std::abs(1.0 - w[j]);
        if (std::abs(near - far) <= 1e-3 * std::max(near, far)) {
            warnings.push_back("a_" + std::to_string(j + 1) + " is nearly equidistant from a and -2a");
            return std::nullopt;
        }
        bits[j] = near < far ? 0 : 1;
    }
    return Kneading(std::move(bits));
}

}  // namespace

std::vector<cplx> series_start(const SolutionVector& s, cplx root) {
    std::vector<cplx> w;
    for (int j = 1; j < s.p(); ++j) w.push_back(s.u(j).evaluate(root));
    return w;
}

FinderResult find_v(const FinderConfig& cfg, cplx v0) {
    const int p = cfg.kneading.p();
    if (p < 1) throw InvalidArgument("empty kneading sequence");
    if (cfg.a == cplx{}) throw InvalidArgument("a must be nonzero");
    CubicMap f{cfg.a, v0};
    std::vector<cplx> w;
    cplx z = cfg.a;
    for (int j = 1; j < p; ++j) {
        z = f(z);
        w.push_back((cfg.a - z) / (3.0 * cfg.a));
    }
    return find_w(cfg, std::move(w));
}

FinderResult find_w(const FinderConfig& cfg, std::vector<cplx> w) {
    const int p = cfg.kneading.p();
    if (p < 1) throw InvalidArgument("empty kneading sequence");
    if (static_cast<int>(w.size()) != p - 1) throw InvalidArgument("start vector needs p - 1 entries");
    const cplx a = cfg.a;
    if (a == cplx{}) throw InvalidArgument("a must be nonzero");
    const cplx xi = 1.0 / (3.0 * a);

    FinderResult out;
    out.a = a;
    if (std::abs(a) < 3.0) out.warnings.push_back("|a| < 3: convergence is unreliable this close to the origin");

    double damping = 1.0, last = residual_of(w, xi);
    int shrinking = 0;
    bool converged = p == 1;
    for (int sweep = 1; sweep <= cfg.max_sweeps && !converged; ++sweep) {
        out.sweeps = sweep;
        double step = 0.0;
        for (int j = p - 1; j >= 1; --j) {
            cplx next = j + 1 < p ? w[j] : cplx{};
            cplx target;
            try {
                target = psi_step(w[0], w[j - 1], next, xi, cfg.kneading.sigma(j));
            } catch (const InvalidArgument&) {
                out.failed_at = j;
                out.status = FinderStatus::NotConverged;
                out.w = w;
                out.v = a * (1.0 - 3.0 * w[0]);
                return out;
            }
            cplx moved = w[j - 1] + damping * (target - w[j - 1]);
            step = std::max(step, std::abs(moved - w[j - 1]));
            w[j - 1] = moved;
        }
        out.step = step;
        double r = residual_of(w, xi);
        if (!std::isfinite(r)) break;
        if (r > last) {
            damping = 0.5;
            shrinking = 0;
        } else if (damping < 1.0 && ++shrinking >= 3) {
            damping = 1.0;
        }
        last = r;
        converged = step < cfg.tol;
    }

    out.w = w;
    out.v = p == 1 ? a : a * (1.0 - 3.0 * w[0]);
    auto ret = marked_return(p, a, out.v);
    out.residual = std::abs(ret.f) / std::abs(a);
    if (!converged) {
        out.status = FinderStatus::NotConverged;
        return out;
    }
    // period and kneading read from w, which is accurate where the forward orbit is not
    bool exact_period = true;
    for (cplx wj : w) exact_period = exact_period && 3.0 * std::abs(wj) > 1e-9;
    if (!exact_period) out.warnings.push_back("the marked point has a smaller period");
    else if (!escape_time(CubicMap{a, out.v}, -a)) out.warnings.push_back("the free critical orbit stays bounded");
    else out.found = kneading_from_w(w, out.warnings);
    out.status = out.found == cfg.kneading ? FinderStatus::Converged : FinderStatus::WrongKneading;
    return out;
}

}  // namespace cubicurve
