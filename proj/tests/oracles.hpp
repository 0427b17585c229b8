#pragma once

// Independent reference computations for the test suite. None of these call
// into the library under test.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

/// J0 from its power series in long double, summed until terms vanish.
inline long double j0_series(long double x) {
  const long double q = -0.25L * x * x;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
  }
  return sum;
}

/// Plain bisection on the series oracle.
inline long double j0_first_zero() {
  long double lo = 2.0L, hi = 3.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if ((j0_series(lo) > 0) == (j0_series(mid) > 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5L * (lo + hi);
}

/// K0(x) = integral_0^inf exp(-x cosh t) dt by the trapezoid rule, which
/// converges geometrically for this analytic, doubly decaying integrand.
inline double k0_integral(double x) {
  const double h = 1.0 / 256.0;
  long double sum = 0.5L * std::exp(-x);
  for (int i = 1;; ++i) {
    const long double t = i * h;
    const long double f = std::exp(-x * std::cosh(t));
    sum += f;
    if (f < 1e-40L) break;
  }
  return static_cast<double>(sum * h);
}

/// Composite Simpson rule on n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
  return static_cast<double>(s * h / 3.0L);
}

/// Resonant-or-detuned constant-field Rabi formula for H = 1/2 [[-d, W], [W, d]].
inline double rabi_transfer(double rabi, double detuning, double t) {
  const double w = std::hypot(rabi, detuning);
  if (w == 0.0) return 0.0;
  const double s = std::sin(0.5 * w * t);
  return rabi * rabi / (w * w) * s * s;
}

/// Matrix exponential by Eigen's scaling-and-squaring Pade implementation.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m) { return m.exp(); }

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
