#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfq {

// Integration controls shared by every quadrature-backed quantity.
// k_max = 0 picks the momentum cutoff from the analytic tail bound.
struct QuadSettings {
    double abs_tol = 1e-8;
    double rel_tol = 1e-6;
    int max_subdiv = 1 << 14;
    double k_max = 0.0;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
    int subdivisions = 0;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what), achieved_error(achieved), requested_tol(requested) {}
    double achieved_error;
    double requested_tol;
};

// Globally adaptive Gauss-Kronrod 7-15 on [a, b] (a < b required).
// Throws QuadratureError if the tolerance is not reached within max_subdiv.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadSettings& q);

// Same rule but seeded with an initial partition; `points` must be strictly
// increasing and is used to keep breakpoints/oscillations resolved from the start.
QuadResult integrate_segments(const std::function<double(double)>& f,
                              const std::vector<double>& points, const QuadSettings& q);

}  // namespace qfq
