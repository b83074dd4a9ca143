#pragma once

#include <complex>
#include <functional>
#include <limits>

namespace srm::quad {

inline constexpr double kDefaultRelTol = 1e-8;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod integral of f over [a, b]; either bound may be
// infinite. Throws QuadratureFailure unless the error estimate is within
// rel_tol of the L1 norm of the integrand.
double integrate(const Integrand& f, double a, double b, double rel_tol = kDefaultRelTol);

// Integral of f over (0, upper] where f(w) behaves like w^exponent as w -> 0
// (exponent > -1). For negative exponents the piece on (0, min(1, upper)] is
// mapped through w = u^(1/(exponent+1)), which makes the integrand bounded.
double integrate_from_zero(const Integrand& f, double upper, double exponent,
                           double rel_tol = kDefaultRelTol);

// Integral of exp(i t x) f(x) over [a, inf) for t != 0 and f decaying to zero.
std::complex<double> fourier_tail(const Integrand& f, double a, double t,
                                  double rel_tol = kDefaultRelTol);

}  // namespace srm::quad
