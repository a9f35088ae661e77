#pragma once

#include <complex>
#include <map>
#include <optional>

#include <boost/rational.hpp>
#include <json.hpp>

namespace cubicurve {

using cplx = std::complex<double>;
using Rational = boost::rational<long long>;

// Truncation index meaning "known exactly".
inline constexpr int kExact = 1 << 28;

// A computed coefficient is dropped when it is below this fraction of the
// magnitudes that were summed to produce it.
inline constexpr double kZeroThreshold = 1e-12;

struct Monomial {
    cplx coeff{1.0, 0.0};
    Rational exp{0};
};

// Truncated series sum_k c_k xi^(k/mu), known modulo xi^(trunc/mu).
class PuiseuxSeries {
public:
    PuiseuxSeries() = default;
    explicit PuiseuxSeries(int mu, int trunc = kExact);

    static PuiseuxSeries constant(cplx c, int mu = 1, int trunc = kExact);
    static PuiseuxSeries monomial(const Monomial& m, int mu, int trunc = kExact);
    static PuiseuxSeries from_terms(int mu, std::map<int, cplx> terms, int trunc = kExact);

    struct Accumulated {
        cplx value{};
        double magnitude = 0.0;
        void add(cplx c) {
            value += c;
            magnitude += std::abs(c);
        }
    };
    static PuiseuxSeries from_sums(int mu, const std::map<int, Accumulated>& sums, int trunc);

    int mu() const { return mu_; }
    int trunc() const { return trunc_; }
    bool exact() const { return trunc_ >= kExact; }
    Rational trunc_exp() const;
    const std::map<int, cplx>& terms() const { return c_; }

    bool is_zero() const { return c_.empty(); }
    std::optional<int> ord_index() const;
    std::optional<Rational> ord() const;
    // ord when nonzero, otherwise the truncation bound.
    int valuation_index() const;
    Monomial leading() const;
    cplx coeff_index(int k) const;
    cplx coeff(const Rational& e) const;
    double max_abs() const;

    PuiseuxSeries rescaled(int new_mu) const;
    PuiseuxSeries reduced() const;
    PuiseuxSeries truncated_index(int t) const;
    // Sum_k c_k r^k where r stands for xi^(1/mu).
    cplx evaluate(cplx root) const;

    friend bool operator==(const PuiseuxSeries&, const PuiseuxSeries&) = default;

private:
    int mu_ = 1;
    int trunc_ = kExact;
    std::map<int, cplx> c_;
};

PuiseuxSeries operator+(const PuiseuxSeries& x, const PuiseuxSeries& y);
PuiseuxSeries operator-(const PuiseuxSeries& x, const PuiseuxSeries& y);
PuiseuxSeries operator-(const PuiseuxSeries& x);
PuiseuxSeries operator*(const PuiseuxSeries& x, const PuiseuxSeries& y);
PuiseuxSeries operator*(cplx s, const PuiseuxSeries& x);
PuiseuxSeries operator/(const PuiseuxSeries& x, const PuiseuxSeries& y);

PuiseuxSeries add(const PuiseuxSeries& x, const PuiseuxSeries& y);
PuiseuxSeries mul(const PuiseuxSeries& x, const PuiseuxSeries& y);
std::optional<Rational> ord(const PuiseuxSeries& x);
Monomial leading_monomial(const PuiseuxSeries& x);
PuiseuxSeries div_monomial(const PuiseuxSeries& x, const Monomial& m);
PuiseuxSeries mul_monomial(const PuiseuxSeries& x, const Monomial& m);
PuiseuxSeries truncate(const PuiseuxSeries& x, const Rational& q);
double norm(const PuiseuxSeries& x);

// 1/x as a Laurent-Puiseux series. `rel_cap` bounds the relative precision (index units)
// and is required when x is exact with more than one term.
PuiseuxSeries inverse(const PuiseuxSeries& x, int rel_cap = kExact);
// Square root whose leading coefficient lies in the closed right half-plane
// (imaginary axis resolved toward +i). Doubles mu when the leading exponent needs it.
PuiseuxSeries sqrt(const PuiseuxSeries& x);
// xi^(1/mu) -> exp(2 pi i k / mu) xi^(1/mu).
PuiseuxSeries galois(const PuiseuxSeries& x, int k);
// xi -> -xi, realised as xi^(1/mu) -> exp(i pi / mu) xi^(1/mu).
PuiseuxSeries negate_variable(const PuiseuxSeries& x);

cplx principal_sqrt(cplx z);
long long lcm_ll(long long a, long long b);
Rational make_rational(int num, int den);
std::string to_string(const Rational& q);
std::string to_string(const Monomial& m);
std::string to_string(const PuiseuxSeries& x, int max_terms = 8);

nlohmann::json to_json(const PuiseuxSeries& x);
PuiseuxSeries series_from_json(const nlohmann::json& j);

}  // namespace cubicurve
