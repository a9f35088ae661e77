#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cubicurve/series.hpp"

namespace cubicurve {

// Bits sigma_1 .. sigma_p of the marked critical orbit; the last bit is always 0.
class Kneading {
public:
    Kneading() = default;
    explicit Kneading(std::vector<int> bits);
    static Kneading parse(std::string_view s);

    int p() const { return static_cast<int>(bits_.size()); }
    // sigma_j with j read modulo p; sigma_0 = sigma_p = 0.
    int sigma(int j) const;
    const std::vector<int>& bits() const { return bits_; }
    bool trivial() const;
    int free_bits() const;  // number of zeros among sigma_1 .. sigma_{p-1}
    // Concatenation of r copies.
    Kneading repeated(int r) const;
    // Least period of the bit string.
    int least_period() const;
    std::string str() const;

    friend bool operator==(const Kneading&, const Kneading&) = default;
    friend auto operator<=>(const Kneading&, const Kneading&) = default;

private:
    std::vector<int> bits_;
};

// All kneading sequences of period p (last bit 0), in lexicographic order.
std::vector<Kneading> all_kneadings(int p);

// u_1 .. u_{p-1} with u_0 = u_p = 0.
class SolutionVector {
public:
    SolutionVector() = default;
    SolutionVector(int p, std::vector<PuiseuxSeries> interior);

    int p() const { return p_; }
    // u_j with j read modulo p.
    const PuiseuxSeries& u(int j) const;
    const std::vector<PuiseuxSeries>& interior() const { return u_; }
    int mu() const;
    // Truncation order in powers of xi (smallest over j).
    Rational trunc() const;
    Monomial m(int j) const;
    std::vector<Monomial> monomials() const;
    std::vector<Rational> orders() const;
    Kneading kneading() const;
    // Common ramification and reduced form.
    SolutionVector normalized() const;
    SolutionVector rescaled(int mu) const;

private:
    int p_ = 1;
    std::vector<PuiseuxSeries> u_;
    PuiseuxSeries zero_;
};

inline constexpr int kDefaultTrunc = 12;

// E_j = xi^2 (w_{j+1} - w_1) - w_j^2 (w_j - 1) for 0 < j < p.
std::vector<PuiseuxSeries> error_vector(const SolutionVector& w);
// Least exponent over the residuals, ignoring coefficients below tol * scale.
Rational residual_order(const SolutionVector& w, double tol = 1e-9);

Monomial star(const Monomial& m, int sigma);

SolutionVector refine_diagonal(const SolutionVector& w);
SolutionVector seed_from_monomials(std::span<const Monomial> m, const Kneading& sigma,
                                   int trunc = kDefaultTrunc);
SolutionVector solve_trivial_kneading(cplx c1, int p, int trunc = kDefaultTrunc);
// c_orbit holds c_1 .. c_{r-1} of the associated quadratic center.
std::vector<Monomial> satellite_monomials(const SolutionVector& base, std::span<const cplx> c_orbit);
SolutionVector solve_graded(const SolutionVector& seed, int trunc = kDefaultTrunc);
std::vector<SolutionVector> galois_orbit(const SolutionVector& s);
bool galois_conjugate(const SolutionVector& a, const SolutionVector& b, double tol = 1e-8);
// xi -> -xi image: the solution of the rotated region.
SolutionVector dual(const SolutionVector& s);

// One run of the sign-branch sweep: sigma_j = 0 coordinates take
// w_j = s_j xi sqrt((w_1 - w_{j+1}) / (1 - w_j)), sigma_j = 1 coordinates take
// w_j = 1 + xi^2 (w_{j+1} - w_1) / w_j^2. Returns the stabilised vector.
struct BranchResult {
    bool converged = false;
    SolutionVector w;
};
BranchResult branch_sweep(const Kneading& sigma, std::span<const int> signs, int order = 4);

// Solutions with grid period p, one per Galois class.
std::vector<SolutionVector> solve_primitive(const Kneading& sigma, int trunc = kDefaultTrunc);

}  // namespace cubicurve
