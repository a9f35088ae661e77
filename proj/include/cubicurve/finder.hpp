#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubicurve/dynamics.hpp"

namespace cubicurve {

struct FinderConfig {
    cplx a;
    Kneading kneading;
    double tol = 1e-12;
    int max_sweeps = 500;
};

enum class FinderStatus { Converged, NotConverged, WrongKneading };
std::string to_string(FinderStatus s);

struct FinderResult {
    FinderStatus status = FinderStatus::NotConverged;
    cplx a;
    cplx v;
    std::vector<cplx> w;  // w_1 .. w_{p-1}
    int sweeps = 0;
    double step = 0.0;      // last max |dw_j|
    double residual = 0.0;  // |F^p(a) - a| / |a|
    std::optional<Kneading> found;
    std::optional<int> failed_at;  // coordinate where a division by zero stopped the sweep
    std::vector<std::string> warnings;
};

// Psi_j: w_j sqrt(xi^2 (w_{j+1} - w_1) / (w_j^2 (w_j - 1))) for sigma_j = 0 (principal
// root), 1 + xi^2 (w_{j+1} - w_1) / w_j^2 for sigma_j = 1. Throws InvalidArgument on a
// zero denominator.
cplx psi_step(cplx w1, cplx wj, cplx wj1, cplx xi, int sigma_j);

// Sweeps j = p-1 .. 1 starting from the orbit of a under F_{a, v0}.
FinderResult find_v(const FinderConfig& cfg, cplx v0);
// Sweeps starting from an explicit w vector.
FinderResult find_w(const FinderConfig& cfg, std::vector<cplx> w0);
// Starting vector from a solved series at xi^(1/mu) = root.
std::vector<cplx> series_start(const SolutionVector& s, cplx root);

}  // namespace cubicurve
