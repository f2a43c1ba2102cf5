#include "phononkin/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <limits>

namespace phononkin {

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

double integrate_torus(const std::function<double(double)>& f, double tol) {
  return integrate(f, 0.0, 0.5, tol) + integrate(f, 0.5, 1.0, tol);
}

double integrate_half_line(const std::function<double(double)>& f, double tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), tol);
}

}  // namespace phononkin
