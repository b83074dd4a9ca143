#include "srm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "srm/errors.hpp"

namespace srm::quad {

namespace {

constexpr unsigned kMaxDepth = 18;
// Rules are driven past the requested tolerance so that their (pessimistic)
// error estimates clear it.
constexpr double kInnerTolFactor = 1e-2;

}  // namespace

double integrate(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, rel_tol);
  if (std::isinf(a) && std::isinf(b)) {
    return integrate(f, a, 0.0, rel_tol) + integrate(f, 0.0, b, rel_tol);
  }
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  if (std::isinf(b) || std::isinf(a)) {
    // Double-exponential rule: copes with algebraically decaying tails, which
    // the Kronrod infinite-range map turns into endpoint singularities.
    thread_local boost::math::quadrature::exp_sinh<double> rule(12);
    const auto g = [&](double x) {
      const double v = std::isinf(b) ? f(x) : f(-x);
      return std::isfinite(v) ? v : 0.0;
    };
    try {
      value = rule.integrate(g, std::isinf(b) ? a : -b, kInf, kInnerTolFactor * rel_tol, &error, &l1);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::QuadratureFailure, e.what());
    }
  } else {
    value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, kMaxDepth, kInnerTolFactor * rel_tol, &error, &l1);
  }
  const bool converged = std::isfinite(value) && error <= std::max(rel_tol * l1, 1e-300);
  if (!converged) {
    std::ostringstream msg;
    msg << "adaptive integration on [" << a << ", " << b << "] did not reach relative tolerance "
        << rel_tol << " (estimate " << value << ", error " << error << ")";
    throw Error(ErrorKind::QuadratureFailure, msg.str());
  }
  return value;
}

double integrate_from_zero(const Integrand& f, double upper, double exponent, double rel_tol) {
  if (!(exponent > -1.0)) {
    throw Error(ErrorKind::QuadratureFailure, "integrand is not integrable at zero");
  }
  if (upper <= 0.0) return 0.0;
  const double split = std::min(1.0, upper);
  Integrand g = f;
  double end = split;
  if (exponent < 0.0) {
    const double power = 1.0 / (exponent + 1.0);
    g = [&f, power](double u) {
      const double w = std::pow(u, power);
      if (w <= 0.0) return 0.0;
      return f(w) * power * w / u;
    };
    end = std::pow(split, exponent + 1.0);
  }
  // Gauss-Kronrod first, then a double-exponential rule, which tolerates the
  // algebraic endpoint behaviour that remains after the substitution.
  const auto safe = [&g](double u) {
    const double v = g(u);
    return std::isfinite(v) ? v : 0.0;
  };
  const auto accepted = [&](double value, double error, double l1) {
    return std::isfinite(value) && error <= std::max(rel_tol * l1, 1e-300);
  };
  double error = 0.0;
  double l1 = 0.0;
  double head = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      safe, 0.0, end, kMaxDepth, kInnerTolFactor * rel_tol, &error, &l1);
  if (!accepted(head, error, l1)) {
    try {
      thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
      head = rule.integrate(safe, 0.0, end, kInnerTolFactor * rel_tol, &error, &l1);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::QuadratureFailure, e.what());
    }
  }
  if (!accepted(head, error, l1)) {
    std::ostringstream msg;
    msg << "integration on (0, " << split << "] did not reach relative tolerance " << rel_tol
        << " (estimate " << head << ", error " << error << ")";
    throw Error(ErrorKind::QuadratureFailure, msg.str());
  }
  const double tail = upper > split ? integrate(f, split, upper, rel_tol) : 0.0;
  return head + tail;
}

std::complex<double> fourier_tail(const Integrand& f, double a, double t, double rel_tol) {
  if (t == 0.0) throw Error(ErrorKind::InvalidArgument, "fourier_tail needs t != 0");
  const double w = std::abs(t);
  const auto g = [&](double y) { return f(a + y); };
  std::pair<double, double> c;
  std::pair<double, double> s;
  try {
    thread_local boost::math::quadrature::ooura_fourier_cos<double> cos_rule(rel_tol);
    thread_local boost::math::quadrature::ooura_fourier_sin<double> sin_rule(rel_tol);
    c = cos_rule.integrate(g, w);
    s = sin_rule.integrate(g, w);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::QuadratureFailure, e.what());
  }
  // Ooura reports a relative error estimate.
  if (!std::isfinite(c.first) || !std::isfinite(s.first) || c.second > 1e3 * rel_tol ||
      s.second > 1e3 * rel_tol) {
    std::ostringstream msg;
    msg << "oscillatory integral on [" << a << ", inf) did not converge (relative errors " << c.second
        << ", " << s.second << ")";
    throw Error(ErrorKind::QuadratureFailure, msg.str());
  }
  // exp(i w (a + y)) = exp(i w a) (cos(w y) + i sin(w y))
  const std::complex<double> value = std::exp(std::complex<double>(0.0, w * a)) *
                                     std::complex<double>(c.first, s.first);
  return t > 0.0 ? value : std::conj(value);
}

}  // namespace srm::quad
