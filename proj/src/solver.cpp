#include "cubicurve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cubicurve/errors.hpp"

namespace cubicurve {

// ---------------------------------------------------------------- Kneading

Kneading::Kneading(std::vector<int> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw InvalidArgument("kneading sequence must be nonempty");
    for (int b : bits_)
        if (b != 0 && b != 1) throw InvalidArgument("kneading bits must be 0 or 1");
    if (bits_.back() != 0) throw InvalidArgument("the final kneading bit must be 0");
}

Kneading Kneading::parse(std::string_view s) {
    std::vector<int> bits;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw InvalidArgument("bad kneading string '" + std::string(s) + "'");
        bits.push_back(ch - '0');
    }
    return Kneading(std::move(bits));
}

int Kneading::sigma(int j) const {
    int k = ((j % p()) + p()) % p();
    return k == 0 ? 0 : bits_[k - 1];
}

bool Kneading::trivial() const {
    return std::all_of(bits_.begin(), bits_.end(), [](int b) { return b == 0; });
}

int Kneading::free_bits() const {
    return static_cast<int>(std::count(bits_.begin(), bits_.end() - 1, 0));
}

Kneading Kneading::repeated(int r) const {
    std::vector<int> out;
    for (int i = 0; i < r; ++i) out.insert(out.end(), bits_.begin(), bits_.end());
    return Kneading(std::move(out));
}

int Kneading::least_period() const {
    for (int n = 1; n <= p(); ++n) {
        if (p() % n != 0) continue;
        bool ok = true;
        for (int i = n; i < p() && ok; ++i) ok = bits_[i] == bits_[i - n];
        if (ok) return n;
    }
    return p();
}

std::string Kneading::str() const {
    std::string s;
    for (int b : bits_) s += static_cast<char>('0' + b);
    return s;
}

std::vector<Kneading> all_kneadings(int p) {
    if (p < 1) throw InvalidArgument("period must be positive");
    std::vector<Kneading> out;
    for (int code = 0; code < (1 << (p - 1)); ++code) {
        std::vector<int> bits(p, 0);
        for (int i = 0; i < p - 1; ++i) bits[i] = (code >> (p - 2 - i)) & 1;
        out.emplace_back(std::move(bits));
    }
    return out;
}

// ---------------------------------------------------------- SolutionVector

SolutionVector::SolutionVector(int p, std::vector<PuiseuxSeries> interior) : p_(p), u_(std::move(interior)) {
    if (p < 1) throw InvalidArgument("period must be positive");
    if (static_cast<int>(u_.size()) != p - 1)
        throw InvalidArgument("solution vector needs p-1 interior entries");
}

const PuiseuxSeries& SolutionVector::u(int j) const {
    int k = ((j % p_) + p_) % p_;
    return k == 0 ? zero_ : u_[k - 1];
}

int SolutionVector::mu() const {
    long long m = 1;
    for (const auto& s : u_) m = lcm_ll(m, s.reduced().mu());
    return static_cast<int>(m);
}

Rational SolutionVector::trunc() const {
    Rational t(kExact);
    for (const auto& s : u_)
        if (!s.exact()) t = std::min(t, s.trunc_exp());
    return t;
}

Monomial SolutionVector::m(int j) const {
    const auto& s = u(j);
    if (s.is_zero()) return {cplx{}, Rational(0)};
    return s.leading();
}

std::vector<Monomial> SolutionVector::monomials() const {
    std::vector<Monomial> out;
    for (int j = 1; j < p_; ++j) out.push_back(m(j));
    return out;
}

std::vector<Rational> SolutionVector::orders() const {
    std::vector<Rational> out;
    for (int j = 1; j < p_; ++j) out.push_back(m(j).exp);
    return out;
}

Kneading SolutionVector::kneading() const {
    std::vector<int> bits(p_, 0);
    for (int j = 1; j < p_; ++j) bits[j - 1] = std::abs(u(j).coeff_index(0) - cplx(1.0)) < 1e-6 ? 1 : 0;
    return Kneading(std::move(bits));
}

SolutionVector SolutionVector::rescaled(int mu) const {
    std::vector<PuiseuxSeries> v;
    for (const auto& s : u_) v.push_back(s.reduced().rescaled(mu));
    return SolutionVector(p_, std::move(v));
}

SolutionVector SolutionVector::normalized() const { return rescaled(mu()); }

// ------------------------------------------------------------------ residuals

namespace {

PuiseuxSeries xi_power(int e, int mu = 1) { return PuiseuxSeries::monomial({1.0, Rational(e)}, mu); }

double coefficient_scale(const SolutionVector& w) {
    double s = 1.0;
    for (const auto& u : w.interior()) s = std::max(s, u.max_abs());
    return s;
}

// Orders of the residuals, where a coefficient of E_j = A - B counts as zero
// when it is below tol times the matching coefficients of A and B.
std::vector<Rational> residual_orders(const SolutionVector& w, double tol) {
    std::vector<Rational> out;
    const PuiseuxSeries one = PuiseuxSeries::constant(1.0);
    const PuiseuxSeries xi2 = PuiseuxSeries::monomial({1.0, Rational(2)}, 1);
    for (int j = 1; j < w.p(); ++j) {
        const auto& wj = w.u(j);
        PuiseuxSeries a = xi2 * (w.u(j + 1) - w.u(1));
        PuiseuxSeries b = wj * wj * (wj - one);
        PuiseuxSeries e = a - b;
        int mu = e.mu();
        a = a.rescaled(mu);
        b = b.rescaled(mu);
        int k0 = e.trunc();
        for (const auto& [k, c] : e.terms()) {
            double ref = std::max(std::abs(a.coeff_index(k)), std::abs(b.coeff_index(k)));
            if (std::abs(c) > tol * ref) {
                k0 = k;
                break;
            }
        }
        out.push_back(Rational(k0, mu));
    }
    return out;
}

PuiseuxSeries redeclare(const PuiseuxSeries& x, int trunc) {
    std::map<int, cplx> t;
    for (const auto& [k, c] : x.terms())
        if (k < trunc) t[k] = c;
    return PuiseuxSeries::from_terms(x.mu(), std::move(t), trunc);
}

PuiseuxSeries redeclare_exp(const PuiseuxSeries& x, const Rational& e) {
    int mu = static_cast<int>(lcm_ll(x.mu(), e.denominator()));
    return redeclare(x.rescaled(mu), static_cast<int>((e * Rational(mu)).numerator()));
}

}  // namespace

std::vector<PuiseuxSeries> error_vector(const SolutionVector& w) {
    std::vector<PuiseuxSeries> e;
    const PuiseuxSeries one = PuiseuxSeries::constant(1.0);
    const PuiseuxSeries xi2 = xi_power(2);
    for (int j = 1; j < w.p(); ++j) {
        const auto& wj = w.u(j);
        e.push_back(xi2 * (w.u(j + 1) - w.u(1)) - wj * wj * (wj - one));
    }
    return e;
}

Rational residual_order(const SolutionVector& w, double tol) {
    Rational q(kExact);
    for (const auto& r : residual_orders(w, tol)) q = std::min(q, r);
    return q;
}

Monomial star(const Monomial& m, int sigma) {
    if (m.coeff == cplx{}) throw InvalidArgument("star of a zero monomial");
    if (sigma == 1) {
        if (m.exp != Rational(0) || std::abs(m.coeff - cplx(1.0)) > 1e-9)
            throw InconsistentSeed("monomial " + to_string(m) + " must be 1 when sigma = 1");
        return m;
    }
    return {-2.0 * m.coeff, m.exp};
}

// ----------------------------------------------------------------- seeding

namespace {

int sigma_of(const Monomial& m) { return m.exp == Rational(0) ? 1 : 0; }

}  // namespace

SolutionVector refine_diagonal(const SolutionVector& w) {
    const int p = w.p();
    if (p == 1) return w;
    std::vector<Monomial> ms;
    Rational top(0);
    for (int j = 1; j < p; ++j) {
        if (w.u(j).is_zero()) throw SeedRejected(j, "zero entry");
        Monomial m = w.m(j);
        if (m.exp >= Rational(2)) throw SeedRejected(j, "leading exponent " + to_string(m.exp) + " is not below 2");
        top = std::max(top, m.exp);
        ms.push_back(m);
    }
    auto e = error_vector(w);
    auto q = residual_orders(w, 1e-9);
    std::vector<PuiseuxSeries> out;
    for (int j = 1; j < p; ++j) {
        const auto& ej = e[j - 1];
        if (q[j - 1] <= 2 * top)
            throw SeedRejected(j, "residual order " + to_string(q[j - 1]) + " does not exceed " + to_string(2 * top));
        Monomial mstar = star(ms[j - 1], sigma_of(ms[j - 1]));
        auto next = w.u(j) + div_monomial(ej, mstar);
        if (!w.u(j).exact()) next = redeclare_exp(next, w.u(j).trunc_exp());
        out.push_back(next);
    }
    return SolutionVector(p, std::move(out));
}

SolutionVector seed_from_monomials(std::span<const Monomial> m, const Kneading& sigma, int trunc) {
    const int p = sigma.p();
    if (static_cast<int>(m.size()) != p - 1 && static_cast<int>(m.size()) != p)
        throw InvalidArgument("monomial vector length does not match the kneading period");
    if (p == 1) return SolutionVector(1, {});
    long long mu = 1;
    for (int j = 1; j < p; ++j) mu = lcm_ll(mu, m[j - 1].exp.denominator());
    for (int j = 1; j < p; ++j) {
        const auto& mj = m[j - 1];
        if (sigma.sigma(j) == 1) {
            if (mj.exp != Rational(0) || std::abs(mj.coeff - cplx(1.0)) > 1e-9)
                throw SeedRejected(j, "sigma = 1 requires the monomial 1, got " + to_string(mj));
        } else if (mj.coeff == cplx{} || mj.exp < Rational(1)) {
            throw SeedRejected(j, "sigma = 0 requires a monomial of order at least 1, got " + to_string(mj));
        }
    }
    const int T = trunc * static_cast<int>(mu);
    auto mono = [&](int j) {
        if (j % p == 0) return PuiseuxSeries(static_cast<int>(mu));
        return PuiseuxSeries::monomial(m[j - 1], static_cast<int>(mu));
    };
    const auto xi2 = xi_power(2, static_cast<int>(mu));
    std::vector<PuiseuxSeries> w;
    for (int j = 1; j < p; ++j) {
        PuiseuxSeries wj = sigma.sigma(j) == 1 ? PuiseuxSeries::constant(1.0, static_cast<int>(mu)) +
                                                     xi2 * (mono(j + 1) - mono(1))
                                               : mono(j);
        w.push_back(redeclare(wj.rescaled(static_cast<int>(mu)), T));
    }
    SolutionVector seed(p, std::move(w));

    auto qs = residual_orders(seed, 1e-9);
    for (int j = 1; j < p; ++j) {
        const Rational& q = qs[j - 1];
        Rational need = sigma.sigma(j) == 1 ? Rational(2) : 2 * m[j - 1].exp;
        if (q <= need)
            throw SeedRejected(j, "residual order " + to_string(q) + " does not exceed " + to_string(need));
    }
    return seed;
}

// ------------------------------------------------------------ trivial kneading

namespace {

// Dense complex Gaussian elimination with partial pivoting.
std::vector<cplx> solve_dense(std::vector<std::vector<cplx>> a, std::vector<cplx> b) {
    const int n = static_cast<int>(b.size());
    double scale = 0.0;
    for (const auto& row : a)
        for (cplx x : row) scale = std::max(scale, std::abs(x));
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (std::abs(a[piv][k]) <= 1e-12 * std::max(scale, 1.0)) throw SingularSystem("degenerate linear stage");
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            cplx f = a[i][k] / a[k][k];
            if (f == cplx{}) continue;
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<cplx> x(n);
    for (int k = n - 1; k >= 0; --k) {
        cplx s = b[k];
        for (int j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

cplx polish_center(cplx c, int p) {
    for (int it = 0; it < 60; ++it) {
        cplx z{}, dz{};
        for (int k = 0; k < p; ++k) {
            dz = 2.0 * z * dz + 1.0;
            z = z * z + c;
        }
        if (dz == cplx{}) break;
        cplx step = z / dz;
        c -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(c))) break;
    }
    return c;
}

}  // namespace

SolutionVector solve_trivial_kneading(cplx c1, int p, int trunc) {
    if (p < 1) throw InvalidArgument("period must be positive");
    auto orbit = [&](cplx c) {
        std::vector<cplx> z{0.0};
        for (int k = 0; k < p; ++k) z.push_back(z.back() * z.back() + c);
        return z;
    };
    auto z0 = orbit(c1);
    if (std::abs(z0[p]) > 1e-3) throw NotACenter("orbit of 0 does not return after " + std::to_string(p) + " steps");
    cplx c = polish_center(c1, p);
    auto z = orbit(c);
    if (std::abs(z[p]) > 1e-10) throw NotACenter("orbit of 0 does not close up");
    for (int k = 1; k < p; ++k)
        if (std::abs(z[k]) < 1e-8) throw NotACenter("critical orbit has period " + std::to_string(k) + ", not " + std::to_string(p));
    if (p == 1) return SolutionVector(1, {});

    // u_j = -xi^2 v_j with v_j a power series in s = xi^2 and v_j(0) = c_j.
    const int n = p - 1;
    int stages = 0;
    while (2 + 2 * stages < trunc) ++stages;
    std::vector<std::vector<cplx>> v(n, std::vector<cplx>(std::max(stages, 1), cplx{}));
    for (int j = 0; j < n; ++j) v[j][0] = z[j + 1];

    std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n, cplx{}));
    for (int j = 0; j < n; ++j) {
        a[j][j] += 2.0 * v[j][0];
        a[j][0] += 1.0;
        if (j + 1 < n) a[j][j + 1] -= 1.0;
    }
    for (int st = 1; st < stages; ++st) {
        std::vector<cplx> rhs(n);
        for (int j = 0; j < n; ++j) {
            cplx sq{};
            for (int x = 1; x < st; ++x) sq += v[j][x] * v[j][st - x];
            cplx cube{};
            for (int x = 0; x <= st - 1; ++x)
                for (int y = 0; x + y <= st - 1; ++y) cube += v[j][x] * v[j][y] * v[j][st - 1 - x - y];
            rhs[j] = -(sq + cube);
        }
        auto x = solve_dense(a, rhs);
        for (int j = 0; j < n; ++j) v[j][st] = x[j];
    }
    std::vector<PuiseuxSeries> u;
    for (int j = 0; j < n; ++j) {
        std::map<int, cplx> t;
        for (int st = 0; st < stages; ++st) t[2 + 2 * st] = -v[j][st];
        u.push_back(PuiseuxSeries::from_terms(1, std::move(t), trunc));
    }
    return SolutionVector(p, std::move(u));
}

std::vector<Monomial> satellite_monomials(const SolutionVector& base, std::span<const cplx> c_orbit) {
    const int n = base.p();
    const int r = static_cast<int>(c_orbit.size()) + 1;
    Kneading ks = base.kneading();
    cplx prod = 1.0;
    Rational ex(0);
    for (int j = 1; j < n; ++j) {
        Monomial ms = star(base.m(j), ks.sigma(j));
        prod *= ms.coeff;
        ex += ms.exp;
    }
    Monomial lambda{-1.0 / prod, Rational(2 * n) - ex};
    std::vector<Monomial> out;
    for (int i = 0; i < r; ++i) {
        if (i > 0) out.push_back({c_orbit[i - 1] * lambda.coeff, lambda.exp});
        for (int j = 1; j < n; ++j) out.push_back(base.m(j));
    }
    return out;
}

// --------------------------------------------------------------- graded Newton

namespace {

using Matrix = std::vector<std::vector<PuiseuxSeries>>;

std::vector<PuiseuxSeries> solve_series_system(Matrix a, std::vector<PuiseuxSeries> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i) {
            if (a[i][k].is_zero()) continue;
            if (piv < 0) {
                piv = i;
                continue;
            }
            int vi = *a[i][k].ord_index() * a[piv][k].mu(), vp = *a[piv][k].ord_index() * a[i][k].mu();
            if (vi < vp || (vi == vp && std::abs(a[i][k].leading().coeff) > std::abs(a[piv][k].leading().coeff)))
                piv = i;
        }
        if (piv < 0) throw SingularSystem("no pivot in column " + std::to_string(k + 1));
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            if (a[i][k].is_zero()) continue;
            PuiseuxSeries f = a[i][k] / a[k][k];
            for (int j = k + 1; j < n; ++j) a[i][j] = a[i][j] - f * a[k][j];
            b[i] = b[i] - f * b[k];
        }
    }
    std::vector<PuiseuxSeries> x(n);
    for (int k = n - 1; k >= 0; --k) {
        PuiseuxSeries s = b[k];
        for (int j = k + 1; j < n; ++j) s = s - a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

}  // namespace

SolutionVector solve_graded(const SolutionVector& seed, int trunc) {
    const int p = seed.p();
    if (p == 1) return seed;
    SolutionVector s0 = seed.normalized();
    const int mu = s0.mu();
    Rational total(0);
    for (int j = 1; j < p; ++j)
        if (!s0.u(j).is_zero()) total += s0.m(j).exp;
    int margin = 4 + 2 * static_cast<int>(std::ceil(boost::rational_cast<double>(total)));
    const int W = (trunc + margin) * mu;
    const int T = trunc * mu;

    std::vector<PuiseuxSeries> w;
    for (int j = 1; j < p; ++j) w.push_back(redeclare(s0.u(j), W));

    const auto xi2 = xi_power(2, mu);
    const auto one = PuiseuxSeries::constant(1.0, mu);
    const auto three = PuiseuxSeries::constant(3.0, mu);
    const auto two = PuiseuxSeries::constant(2.0, mu);

    int best = -1, stall = 0;
    for (int iter = 0; iter < 80; ++iter) {
        SolutionVector cur(p, w);
        auto e = error_vector(cur);
        for (auto& ej : e) ej = redeclare(ej.rescaled(mu), W);
        int q = W;
        for (const auto& r : residual_orders(cur, 1e-10))
            q = std::min<long long>(q, std::min<long long>(W, (r * Rational(mu)).numerator()));

        Matrix jac(p - 1, std::vector<PuiseuxSeries>(p - 1, PuiseuxSeries(mu, W)));
        for (int j = 1; j < p; ++j) {
            const auto& wj = w[j - 1];
            jac[j - 1][j - 1] = redeclare(-(three * wj * wj - two * wj), W);
            if (j + 1 < p) jac[j - 1][j] = jac[j - 1][j] + xi2;
            jac[j - 1][0] = jac[j - 1][0] - xi2;
        }
        std::vector<PuiseuxSeries> rhs;
        for (const auto& ej : e) rhs.push_back(-ej);
        auto delta = solve_series_system(std::move(jac), std::move(rhs));

        double low = 0.0;
        for (int j = 1; j < p; ++j) {
            auto d = delta[j - 1].rescaled(mu);
            for (const auto& [k, c] : d.terms())
                if (k < T) low = std::max(low, std::abs(c) / std::max(1.0, std::abs(w[j - 1].coeff_index(k))));
            w[j - 1] = redeclare((w[j - 1] + d).rescaled(mu), W);
        }
        if (low <= 1e-12 && q >= T) break;
        if (q > best) {
            best = q;
            stall = 0;
        } else if (++stall >= 3) {
            throw NoProgress("residual order stalled at " + to_string(Rational(q, mu)));
        }
        if (iter == 79) throw NoProgress("graded Newton iteration did not settle");
    }
    std::vector<PuiseuxSeries> out;
    for (const auto& wj : w) out.push_back(redeclare(wj, T).reduced());
    return SolutionVector(p, std::move(out)).normalized();
}

// ------------------------------------------------------------------- Galois

std::vector<SolutionVector> galois_orbit(const SolutionVector& s) {
    SolutionVector n = s.normalized();
    std::vector<SolutionVector> out;
    for (int k = 0; k < n.mu(); ++k) {
        std::vector<PuiseuxSeries> v;
        for (const auto& u : n.interior()) v.push_back(galois(u, k));
        out.emplace_back(n.p(), std::move(v));
    }
    return out;
}

bool galois_conjugate(const SolutionVector& a, const SolutionVector& b, double tol) {
    if (a.p() != b.p()) return false;
    int mu = static_cast<int>(lcm_ll(a.mu(), b.mu()));
    SolutionVector x = a.rescaled(mu), y = b.rescaled(mu);
    double sc = std::max(coefficient_scale(x), coefficient_scale(y));
    for (int k = 0; k < mu; ++k) {
        bool same = true;
        for (int j = 1; j < a.p() && same; ++j) {
            int t = std::min(x.u(j).trunc(), y.u(j).trunc());
            auto d = galois(x.u(j), k).truncated_index(t) - y.u(j).truncated_index(t);
            same = d.max_abs() <= tol * sc;
        }
        if (same) return true;
    }
    return false;
}

SolutionVector dual(const SolutionVector& s) {
    SolutionVector n = s.normalized();
    std::vector<PuiseuxSeries> v;
    for (const auto& u : n.interior()) v.push_back(negate_variable(u));
    return SolutionVector(n.p(), std::move(v));
}

// ------------------------------------------------------------- branch sweep

BranchResult branch_sweep(const Kneading& sigma, std::span<const int> signs, int order) {
    const int p = sigma.p();
    if (static_cast<int>(signs.size()) != sigma.free_bits())
        throw InvalidArgument("expected " + std::to_string(sigma.free_bits()) + " signs for kneading " + sigma.str());
    if (p == 1) return {true, SolutionVector(1, {})};
    std::vector<int> sign_of(p, 1);
    for (int j = 1, k = 0; j < p; ++j)
        if (sigma.sigma(j) == 0) sign_of[j] = signs[k++];

    std::vector<PuiseuxSeries> w;
    for (int j = 1; j < p; ++j) w.push_back(PuiseuxSeries::constant(static_cast<double>(sigma.sigma(j)), 1, order));
    auto at = [&](int j) -> PuiseuxSeries {
        int k = ((j % p) + p) % p;
        return k == 0 ? PuiseuxSeries(1, order) : w[k - 1];
    };
    const auto xi = xi_power(1);
    const auto xi2 = xi_power(2);
    const auto one = PuiseuxSeries::constant(1.0);
    auto cap = [&](const PuiseuxSeries& x) { return x.truncated_index(order * x.mu()); };

    for (int sweep = 0; sweep < 300; ++sweep) {
        auto prev = w;
        for (int j = p - 1; j >= 1; --j) {
            PuiseuxSeries next;
            if (sigma.sigma(j) == 1) {
                next = one + xi2 * (at(j + 1) - at(1)) / (at(j) * at(j));
            } else {
                auto ratio = (at(1) - at(j + 1)) / (one - at(j));
                next = ratio.is_zero() ? PuiseuxSeries(ratio.mu(), ratio.trunc())
                                       : cplx(static_cast<double>(sign_of[j])) * xi * sqrt(ratio);
            }
            w[j - 1] = cap(next).reduced();
            // multiplicities are powers of two below 2^p; anything larger is a runaway branch
            if (w[j - 1].mu() >= (1 << p)) return {false, SolutionVector(p, w)};
        }
        bool stable = true;
        for (int j = 0; j < p - 1 && stable; ++j)
            stable = w[j].mu() == prev[j].mu() && w[j].trunc() == prev[j].trunc() &&
                     (w[j] - prev[j]).max_abs() <= 1e-12 * std::max(1.0, w[j].max_abs());
        if (stable && sweep > 0) return {true, SolutionVector(p, w)};
    }
    return {false, SolutionVector(p, w)};
}

std::vector<SolutionVector> solve_primitive(const Kneading& sigma, int trunc) {
    const int p = sigma.p();
    if (p == 1) return {SolutionVector(1, {})};
    const int f = sigma.free_bits();
    std::vector<SolutionVector> found;
    for (int code = 0; code < (1 << f); ++code) {
        std::vector<int> signs(f);
        for (int i = 0; i < f; ++i) signs[i] = (code >> (f - 1 - i)) & 1 ? -1 : 1;
        auto br = branch_sweep(sigma, signs, 6);
        if (!br.converged) continue;
        // grid period p exactly when every partial sum of 2 - ord(m_j), j < p, stays positive
        bool ok = true;
        Rational partial(0);
        for (int j = 1; j < p && ok; ++j) {
            ok = !br.w.u(j).is_zero();
            if (ok) partial += Rational(2) - br.w.m(j).exp;
            ok = ok && partial > Rational(0);
        }
        if (!ok) continue;
        auto ms = br.w.monomials();
        for (int j = 1; j < p; ++j)
            if (sigma.sigma(j) == 1) ms[j - 1] = Monomial{1.0, Rational(0)};
        SolutionVector sol;
        try {
            sol = solve_graded(seed_from_monomials(ms, sigma, trunc), trunc);
        } catch (const SeedRejected&) {
            continue;
        }
        if (sol.kneading() != sigma) continue;
        bool dup = std::any_of(found.begin(), found.end(), [&](const auto& g) { return galois_conjugate(g, sol); });
        if (!dup) found.push_back(sol);
    }
    return found;
}

}  // namespace cubicurve
