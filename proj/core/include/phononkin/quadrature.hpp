#pragma once

#include <functional>

namespace phononkin {

/// Adaptive Gauss-Kronrod (61 points) on [a, b] to relative tolerance `tol`.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// Integral of f over the torus [0, 1), split at 1/2 so that kinks at 0 and 1/2 sit on endpoints.
double integrate_torus(const std::function<double(double)>& f, double tol = 1e-12);

/// Integral over [0, inf) by exp-sinh quadrature.
double integrate_half_line(const std::function<double(double)>& f, double tol = 1e-10);

}  // namespace phononkin
