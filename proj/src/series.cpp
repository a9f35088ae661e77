#include "cubicurve/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "cubicurve/errors.hpp"

namespace cubicurve {

namespace {

int clamp_trunc(long long t) {
    return t >= kExact ? kExact : static_cast<int>(t);
}

cplx root_of_unity(long long num, long long den) {
    long long r = ((num % den) + den) % den;
    if (r == 0) return {1.0, 0.0};
    if (2 * r == den) return {-1.0, 0.0};
    if (4 * r == den) return {0.0, 1.0};
    if (4 * r == 3 * den) return {0.0, -1.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
}

}  // namespace

long long lcm_ll(long long a, long long b) { return std::lcm(a, b); }

Rational make_rational(int num, int den) { return Rational(num, den); }

cplx principal_sqrt(cplx z) {
    cplx s = std::sqrt(z);
    if (std::abs(s.real()) <= 1e-9 * std::abs(s)) s = cplx(0.0, std::abs(s));
    return s;
}

PuiseuxSeries::PuiseuxSeries(int mu, int trunc) : mu_(mu), trunc_(clamp_trunc(trunc)) {
    if (mu < 1) throw InvalidArgument("series ramification must be positive");
}

PuiseuxSeries PuiseuxSeries::constant(cplx c, int mu, int trunc) {
    std::map<int, cplx> t;
    if (c != cplx{}) t[0] = c;
    return from_terms(mu, std::move(t), trunc);
}

PuiseuxSeries PuiseuxSeries::monomial(const Monomial& m, int mu, int trunc) {
    Rational k = m.exp * Rational(mu);
    if (k.denominator() != 1) throw InvalidArgument("exponent " + to_string(m.exp) + " not in (1/" + std::to_string(mu) + ")Z");
    std::map<int, cplx> t;
    if (m.coeff != cplx{}) t[static_cast<int>(k.numerator())] = m.coeff;
    return from_terms(mu, std::move(t), trunc);
}

PuiseuxSeries PuiseuxSeries::from_terms(int mu, std::map<int, cplx> terms, int trunc) {
    PuiseuxSeries s(mu, trunc);
    std::erase_if(terms, [&](const auto& kv) { return kv.first >= s.trunc_ || kv.second == cplx{}; });
    s.c_ = std::move(terms);
    return s;
}

PuiseuxSeries PuiseuxSeries::from_sums(int mu, const std::map<int, Accumulated>& sums, int trunc) {
    PuiseuxSeries s(mu, trunc);
    for (const auto& [k, a] : sums)
        if (k < s.trunc_ && std::abs(a.value) > kZeroThreshold * a.magnitude) s.c_[k] = a.value;
    return s;
}

Rational PuiseuxSeries::trunc_exp() const { return Rational(trunc_, mu_); }

std::optional<int> PuiseuxSeries::ord_index() const {
    if (c_.empty()) return std::nullopt;
    return c_.begin()->first;
}

std::optional<Rational> PuiseuxSeries::ord() const {
    if (c_.empty()) return std::nullopt;
    return Rational(c_.begin()->first, mu_);
}

int PuiseuxSeries::valuation_index() const { return c_.empty() ? trunc_ : c_.begin()->first; }

Monomial PuiseuxSeries::leading() const {
    if (c_.empty()) throw ZeroSeries("leading monomial of zero series");
    return {c_.begin()->second, Rational(c_.begin()->first, mu_)};
}

cplx PuiseuxSeries::coeff_index(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? cplx{} : it->second;
}

cplx PuiseuxSeries::coeff(const Rational& e) const {
    Rational k = e * Rational(mu_);
    if (k.denominator() != 1) return {};
    return coeff_index(static_cast<int>(k.numerator()));
}

double PuiseuxSeries::max_abs() const {
    double m = 0.0;
    for (const auto& [k, c] : c_) m = std::max(m, std::abs(c));
    return m;
}

PuiseuxSeries PuiseuxSeries::rescaled(int new_mu) const {
    if (new_mu == mu_) return *this;
    if (new_mu % mu_ != 0) throw InvalidArgument("rescale to a non-multiple ramification");
    int f = new_mu / mu_;
    PuiseuxSeries s(new_mu, exact() ? kExact : clamp_trunc(static_cast<long long>(trunc_) * f));
    for (const auto& [k, c] : c_) s.c_[k * f] = c;
    return s;
}

PuiseuxSeries PuiseuxSeries::reduced() const {
    int g = mu_;
    for (const auto& [k, c] : c_) g = std::gcd(g, k);
    if (!exact()) g = std::gcd(g, trunc_);
    if (g <= 1) return *this;
    PuiseuxSeries s(mu_ / g, exact() ? kExact : trunc_ / g);
    for (const auto& [k, c] : c_) s.c_[k / g] = c;
    return s;
}

PuiseuxSeries PuiseuxSeries::truncated_index(int t) const {
    PuiseuxSeries s = *this;
    s.trunc_ = std::min(trunc_, clamp_trunc(t));
    std::erase_if(s.c_, [&](const auto& kv) { return kv.first >= s.trunc_; });
    return s;
}

cplx PuiseuxSeries::evaluate(cplx root) const {
    cplx sum{};
    for (const auto& [k, c] : c_) sum += c * std::pow(root, k);
    return sum;
}

namespace {

std::pair<PuiseuxSeries, PuiseuxSeries> common(const PuiseuxSeries& x, const PuiseuxSeries& y) {
    int m = static_cast<int>(lcm_ll(x.mu(), y.mu()));
    return {x.rescaled(m), y.rescaled(m)};
}

}  // namespace

PuiseuxSeries operator+(const PuiseuxSeries& x0, const PuiseuxSeries& y0) {
    auto [x, y] = common(x0, y0);
    std::map<int, PuiseuxSeries::Accumulated> t;
    for (const auto* s : {&x, &y})
        for (const auto& [k, c] : s->terms()) t[k].add(c);
    return PuiseuxSeries::from_sums(x.mu(), t, std::min(x.trunc(), y.trunc()));
}

PuiseuxSeries operator-(const PuiseuxSeries& x) { return cplx(-1.0, 0.0) * x; }

PuiseuxSeries operator-(const PuiseuxSeries& x, const PuiseuxSeries& y) { return x + (-y); }

PuiseuxSeries operator*(cplx s, const PuiseuxSeries& x) {
    std::map<int, cplx> t;
    if (s != cplx{})
        for (const auto& [k, c] : x.terms()) t[k] = s * c;
    int tr = x.trunc();
    if (s == cplx{}) tr = kExact;
    return PuiseuxSeries::from_terms(x.mu(), std::move(t), tr);
}

PuiseuxSeries operator*(const PuiseuxSeries& x0, const PuiseuxSeries& y0) {
    auto [x, y] = common(x0, y0);
    long long tx = x.exact() ? kExact : static_cast<long long>(x.trunc()) + y.valuation_index();
    long long ty = y.exact() ? kExact : static_cast<long long>(y.trunc()) + x.valuation_index();
    int t = clamp_trunc(std::min(tx, ty));
    std::map<int, PuiseuxSeries::Accumulated> out;
    for (const auto& [i, a] : x.terms()) {
        for (const auto& [j, b] : y.terms()) {
            if (i + j >= t) break;
            out[i + j].add(a * b);
        }
    }
    return PuiseuxSeries::from_sums(x.mu(), out, t);
}

PuiseuxSeries operator/(const PuiseuxSeries& x0, const PuiseuxSeries& y0) {
    auto [x, y] = common(x0, y0);
    int cap = x.exact() ? kExact : std::max(1, x.trunc() - x.valuation_index());
    return x * inverse(y, cap);
}

PuiseuxSeries add(const PuiseuxSeries& x, const PuiseuxSeries& y) { return x + y; }
PuiseuxSeries mul(const PuiseuxSeries& x, const PuiseuxSeries& y) { return x * y; }
std::optional<Rational> ord(const PuiseuxSeries& x) { return x.ord(); }
Monomial leading_monomial(const PuiseuxSeries& x) { return x.leading(); }

PuiseuxSeries mul_monomial(const PuiseuxSeries& x, const Monomial& m) {
    if (m.coeff == cplx{}) throw ZeroSeries("multiplication by a zero monomial");
    Rational e = m.exp;
    int mu = static_cast<int>(lcm_ll(x.mu(), e.denominator()));
    PuiseuxSeries xs = x.rescaled(mu);
    int shift = static_cast<int>((e * Rational(mu)).numerator());
    std::map<int, cplx> t;
    for (const auto& [k, c] : xs.terms()) t[k + shift] = c * m.coeff;
    int tr = xs.exact() ? kExact : xs.trunc() + shift;
    return PuiseuxSeries::from_terms(mu, std::move(t), tr);
}

PuiseuxSeries div_monomial(const PuiseuxSeries& x, const Monomial& m) {
    if (m.coeff == cplx{}) throw ZeroSeries("division by a zero monomial");
    return mul_monomial(x, Monomial{1.0 / m.coeff, -m.exp});
}

PuiseuxSeries truncate(const PuiseuxSeries& x, const Rational& q) {
    Rational k = q * Rational(x.mu());
    long long n = k.numerator(), d = k.denominator();
    long long ceil = n / d + ((n % d != 0 && n > 0) ? 1 : 0);
    return x.truncated_index(clamp_trunc(ceil));
}

double norm(const PuiseuxSeries& x) {
    auto o = x.ord();
    if (!o) return 0.0;
    return std::exp(-boost::rational_cast<double>(*o));
}

PuiseuxSeries inverse(const PuiseuxSeries& x, int rel_cap) {
    if (x.is_zero()) throw ZeroSeries("inverse of zero series");
    int q = *x.ord_index();
    cplx beta = x.terms().begin()->second;
    long long rel = x.exact() ? kExact : static_cast<long long>(x.trunc()) - q;
    rel = std::min<long long>(rel, rel_cap);
    if (rel >= kExact) {
        if (x.terms().size() != 1) throw InvalidArgument("inverse of an exact series needs a precision cap");
        return PuiseuxSeries::from_terms(x.mu(), {{-q, 1.0 / beta}}, kExact);
    }
    int n = static_cast<int>(rel);
    std::vector<cplx> y(n, cplx{}), z(n, cplx{});
    for (const auto& [k, c] : x.terms())
        if (k - q < n) y[k - q] = c / beta;
    z[0] = 1.0;
    for (int i = 1; i < n; ++i) {
        PuiseuxSeries::Accumulated s;
        for (int k = 1; k <= i; ++k)
            if (y[k] != cplx{} && z[i - k] != cplx{}) s.add(y[k] * z[i - k]);
        z[i] = std::abs(s.value) > kZeroThreshold * s.magnitude ? -s.value : cplx{};
    }
    std::map<int, cplx> t;
    for (int i = 0; i < n; ++i)
        if (z[i] != cplx{}) t[i - q] = z[i] / beta;
    return PuiseuxSeries::from_terms(x.mu(), std::move(t), n - q);
}

PuiseuxSeries sqrt(const PuiseuxSeries& x0) {
    if (x0.is_zero()) return PuiseuxSeries(x0.mu(), x0.exact() ? kExact : x0.trunc() / 2);
    PuiseuxSeries x = (*x0.ord_index() % 2 != 0) ? x0.rescaled(2 * x0.mu()) : x0;
    int q = *x.ord_index();
    cplx beta = x.terms().begin()->second;
    cplx rb = principal_sqrt(beta);
    long long rel = x.exact() ? kExact : static_cast<long long>(x.trunc()) - q;
    if (rel >= kExact) {
        if (x.terms().size() != 1) throw InvalidArgument("square root of an exact series needs truncation");
        return PuiseuxSeries::from_terms(x.mu(), {{q / 2, rb}}, kExact);
    }
    int n = static_cast<int>(rel);
    std::vector<cplx> y(n, cplx{}), s(n, cplx{});
    for (const auto& [k, c] : x.terms())
        if (k - q < n) y[k - q] = c / beta;
    s[0] = 1.0;
    for (int i = 1; i < n; ++i) {
        PuiseuxSeries::Accumulated acc;
        acc.add(y[i]);
        for (int k = 1; k < i; ++k) acc.add(-s[k] * s[i - k]);
        s[i] = std::abs(acc.value) > kZeroThreshold * acc.magnitude ? acc.value / 2.0 : cplx{};
    }
    std::map<int, cplx> t;
    for (int i = 0; i < n; ++i)
        if (s[i] != cplx{}) t[q / 2 + i] = rb * s[i];
    return PuiseuxSeries::from_terms(x.mu(), std::move(t), q / 2 + n);
}

PuiseuxSeries galois(const PuiseuxSeries& x, int k) {
    std::map<int, cplx> t;
    for (const auto& [i, c] : x.terms()) t[i] = c * root_of_unity(static_cast<long long>(k) * i, x.mu());
    return PuiseuxSeries::from_terms(x.mu(), std::move(t), x.trunc());
}

PuiseuxSeries negate_variable(const PuiseuxSeries& x) {
    std::map<int, cplx> t;
    for (const auto& [i, c] : x.terms()) t[i] = c * root_of_unity(i, 2LL * x.mu());
    return PuiseuxSeries::from_terms(x.mu(), std::move(t), x.trunc());
}

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

std::string format_coeff(cplx c) {
    std::ostringstream os;
    os.precision(6);
    double re = std::abs(c.real()) < 1e-12 ? 0.0 : c.real();
    double im = std::abs(c.imag()) < 1e-12 ? 0.0 : c.imag();
    if (im == 0.0) os << re;
    else if (re == 0.0) os << im << "i";
    else os << "(" << re << (im < 0 ? "-" : "+") << std::abs(im) << "i)";
    return os.str();
}

}  // namespace

std::string to_string(const Monomial& m) {
    std::string s = format_coeff(m.coeff);
    if (m.exp == Rational(0)) return s;
    return s + "*x^" + to_string(m.exp);
}

std::string to_string(const PuiseuxSeries& x, int max_terms) {
    if (x.is_zero()) return "0";
    std::string out;
    int n = 0;
    for (const auto& [k, c] : x.terms()) {
        if (n++ == max_terms) {
            out += " + ...";
            break;
        }
        if (!out.empty()) out += " + ";
        out += to_string(Monomial{c, Rational(k, x.mu())});
    }
    return out;
}

nlohmann::json to_json(const PuiseuxSeries& x) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, c] : x.terms()) terms.push_back({k, c.real(), c.imag()});
    nlohmann::json j = {{"mu", x.mu()}, {"terms", terms}};
    j["trunc"] = x.exact() ? nlohmann::json(nullptr) : nlohmann::json(x.trunc());
    return j;
}

PuiseuxSeries series_from_json(const nlohmann::json& j) {
    int mu = j.at("mu").get<int>();
    int trunc = j.at("trunc").is_null() ? kExact : j.at("trunc").get<int>();
    std::map<int, cplx> t;
    for (const auto& term : j.at("terms")) t[term.at(0).get<int>()] = {term.at(1).get<double>(), term.at(2).get<double>()};
    return PuiseuxSeries::from_terms(mu, std::move(t), trunc);
}

}  // namespace cubicurve
