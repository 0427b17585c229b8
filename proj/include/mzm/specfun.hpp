#pragma once

// Real-argument Bessel functions of integer order 0 and 1:
// J0, J1, Y0, Y1, I0, I1, K0, K1, plus exponentially scaled I/K variants.
//
// Regimes
//   J, Y   x <= 8        ascending power series
//          8 < x < 25    Miller backward recurrence for J, Neumann series for Y
//          x >= 25       Hankel asymptotic expansion
//   I      x <= 20       ascending power series (no cancellation)
//          x > 20        asymptotic expansion of e^{-x} I(x)
//   K      x <= 2        ascending series
//          x > 2         Steed / Temme continued fraction
//
// est_error is a static bound per regime, never a per-call estimate.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzm::specfun {

struct SpecFunResult {
  double value = 0.0;
  double est_error = 0.0;
};

/// Smallest argument accepted by the second-kind functions (Y0, Y1, K0, K1).
inline constexpr double kMinSingularArgument = 1e-8;

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr double kPi = std::numbers::pi;

inline constexpr double kSeriesCrossover = 8.0;
inline constexpr double kAsymptoticCrossover = 25.0;
inline constexpr double kModifiedAsymptotic = 20.0;
inline constexpr double kKSeriesCrossover = 2.0;

inline constexpr double kBoundSeries = 2e-13;
inline constexpr double kBoundMiller = 2e-13;
inline constexpr double kBoundHankel = 5e-14;
inline constexpr double kBoundModified = 5e-14;

inline SpecFunResult make(double value, double bound) {
  return {value, bound * std::max(1.0, std::fabs(value))};
}

inline void require_regular(double x, const char* name) {
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error(std::string(name) + ": argument must be finite and >= 0");
}

inline void require_singular(double x, const char* name) {
  if (!std::isfinite(x) || x < kMinSingularArgument)
    throw std::domain_error(std::string(name) + ": argument must be finite and >= 1e-8");
}

// J0, J1 by ascending series.
inline void series_j01(double x, double& j0, double& j1) {
  const double q = 0.25 * x * x;
  double t0 = 1.0, s0 = 1.0;
  double t1 = 0.5 * x, s1 = t1;
  for (int k = 1; k < 200; ++k) {
    t0 *= -q / (double(k) * k);
    t1 *= -q / (double(k) * (k + 1));
    s0 += t0;
    s1 += t1;
    if (std::fabs(t0) < 1e-18 * std::fabs(s0) && std::fabs(t1) < 1e-18 * std::fabs(s1) + 1e-300) break;
  }
  j0 = s0;
  j1 = s1;
}

// Y0, Y1 by ascending series, given J0, J1 at the same point.
inline void series_y01(double x, double j0, double j1, double& y0, double& y1) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x);
  // Y0 = (2/pi)(ln(x/2)+gamma) J0 + (2/pi) sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
  double t = 1.0, harmonic = 0.0, s = 0.0;
  for (int k = 1; k < 200; ++k) {
    t *= -q / (double(k) * k);
    harmonic += 1.0 / k;
    const double term = -t * harmonic;
    s += term;
    if (std::fabs(term) < 1e-18 * std::fabs(s)) break;
  }
  y0 = (2.0 / kPi) * ((lg + kEulerGamma) * j0 + s);

  // Y1 = (2/pi) ln(x/2) J1 - 2/(pi x)
  //      - (1/pi) sum_{k>=0} (-1)^k (psi(k+1)+psi(k+2)) (x/2)^{2k+1} / (k!(k+1)!)
  double u = 0.5 * x;  // (x/2)^{2k+1} / (k!(k+1)!) at k = 0
  double psi_k1 = -kEulerGamma;        // psi(1)
  double psi_k2 = 1.0 - kEulerGamma;   // psi(2)
  double sum = (psi_k1 + psi_k2) * u;
  for (int k = 1; k < 200; ++k) {
    u *= -q / (double(k) * (k + 1));
    psi_k1 += 1.0 / k;
    psi_k2 += 1.0 / (k + 1);
    const double term = (psi_k1 + psi_k2) * u;
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  y1 = (2.0 / kPi) * lg * j1 - 2.0 / (kPi * x) - sum / kPi;
}

// Miller backward recurrence with the normalisation J0 + 2 sum J_{2k} = 1,
// followed by the Neumann series for Y0 and Y1.
inline void miller_jy01(double x, double& j0, double& j1, double& y0, double& y1) {
  const int top = 2 * ((static_cast<int>(x) + 40) / 2);
  std::vector<double> j(top + 2, 0.0);
  j[top + 1] = 0.0;
  j[top] = 1e-30;
  for (int k = top; k >= 1; --k) {
    j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
    if (std::fabs(j[k - 1]) > 1e250) {
      for (int m = k - 1; m <= top + 1; ++m) j[m] *= 1e-250;
    }
  }
  double norm = j[0];
  for (int k = 2; k <= top; k += 2) norm += 2.0 * j[k];
  for (double& v : j) v /= norm;

  j0 = j[0];
  j1 = j[1];
  const double lg = std::log(0.5 * x) + kEulerGamma;

  double s0 = 0.0;
  for (int k = 1; 2 * k <= top; ++k) s0 += ((k % 2) ? -1.0 : 1.0) * j[2 * k] / k;
  y0 = (2.0 / kPi) * (lg * j0 - 2.0 * s0);

  double s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= top; ++k)
    s1 += ((k % 2) ? -1.0 : 1.0) * (2.0 * k + 1.0) * j[2 * k + 1] / (double(k) * (k + 1));
  y1 = -2.0 * j0 / (kPi * x) + (2.0 / kPi) * (lg - 1.0) * j1 - (2.0 / kPi) * s1;
}

// Hankel expansion: order nu in {0, 1}.
inline void hankel(int nu, double x, double& jn, double& yn) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::fabs(term);
    if (mag > prev) break;  // asymptotic series started to diverge
    prev = mag;
    // P collects k = 0, 2, 4, ... with alternating signs, Q collects k = 1, 3, 5, ...
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (mag < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(chi), s = std::sin(chi);
  jn = amp * (p * c - q * s);
  yn = amp * (p * s + q * c);
}

// e^{-x} I0(x), e^{-x} I1(x).
inline void scaled_i01(double x, double& i0e, double& i1e) {
  if (x <= kModifiedAsymptotic) {
    const double q = 0.25 * x * x;
    double t0 = 1.0, s0 = 1.0;
    double t1 = 0.5 * x, s1 = t1;
    for (int k = 1; k < 400; ++k) {
      t0 *= q / (double(k) * k);
      t1 *= q / (double(k) * (k + 1));
      s0 += t0;
      s1 += t1;
      if (t0 < 1e-18 * s0 && t1 <= 1e-18 * s1) break;
    }
    const double e = std::exp(-x);
    i0e = s0 * e;
    i1e = s1 * e;
    return;
  }
  // e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k
  auto series = [x](int nu) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= -(mu - odd * odd) / (8.0 * k * x);
      if (std::fabs(term) > prev) break;
      prev = std::fabs(term);
      sum += term;
      if (prev < 1e-17) break;
    }
    return sum / std::sqrt(2.0 * kPi * x);
  };
  i0e = series(0);
  i1e = series(1);
}

// e^{x} K0(x), e^{x} K1(x).
inline void scaled_k01(double x, double& k0e, double& k1e) {
  if (x <= kKSeriesCrossover) {
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    double i0e = 0.0, i1e = 0.0;
    scaled_i01(x, i0e, i1e);
    const double ex = std::exp(x);
    const double i0 = i0e * ex, i1 = i1e * ex;

    // K0 = -(ln(x/2)+gamma) I0 + sum_{k>=1} H_k q^k / (k!)^2
    double t = 1.0, harmonic = 0.0, s = 0.0;
    for (int k = 1; k < 200; ++k) {
      t *= q / (double(k) * k);
      harmonic += 1.0 / k;
      s += harmonic * t;
      if (harmonic * t < 1e-18 * s) break;
    }
    const double k0 = -(lg + kEulerGamma) * i0 + s;

    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} (psi(k+1)+psi(k+2)) q^k / (k!(k+1)!)
    double u = 1.0;
    double psi_k1 = -kEulerGamma, psi_k2 = 1.0 - kEulerGamma;
    double sum = psi_k1 + psi_k2;
    for (int k = 1; k < 200; ++k) {
      u *= q / (double(k) * (k + 1));
      psi_k1 += 1.0 / k;
      psi_k2 += 1.0 / (k + 1);
      const double term = (psi_k1 + psi_k2) * u;
      sum += term;
      if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    const double k1 = 1.0 / x + lg * i1 - 0.25 * x * sum;
    k0e = k0 * ex;
    k1e = k1 * ex;
    return;
  }
  // Steed's method for the second continued fraction at order zero.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < 1e-17) break;
  }
  h *= a1;
  k0e = std::sqrt(kPi / (2.0 * x)) / s;
  k1e = k0e * (x + 0.5 - h) / x;
}

struct JY {
  double j0, j1, y0, y1;
  double bound;
};

inline JY jy01(double x, bool need_y) {
  JY r{};
  if (x <= kSeriesCrossover) {
    series_j01(x, r.j0, r.j1);
    if (need_y) series_y01(x, r.j0, r.j1, r.y0, r.y1);
    r.bound = kBoundSeries;
  } else if (x < kAsymptoticCrossover) {
    miller_jy01(x, r.j0, r.j1, r.y0, r.y1);
    r.bound = kBoundMiller;
  } else {
    hankel(0, x, r.j0, r.y0);
    hankel(1, x, r.j1, r.y1);
    r.bound = kBoundHankel;
  }
  return r;
}

inline SpecFunResult unscale_i(double scaled, double x, const char* name) {
  // I(x) = scaled * e^x, evaluated in log space so the overflow test is exact.
  if (scaled == 0.0) return {0.0, 0.0};
  const double log_value = std::log(scaled) + x;
  if (log_value >= std::log(std::numeric_limits<double>::max()))
    throw std::overflow_error(std::string(name) + ": result exceeds the double range");
  return make(std::exp(log_value), kBoundModified);
}

}  // namespace detail

inline SpecFunResult bessel_j0(double x) {
  detail::require_regular(x, "bessel_j0");
  const auto r = detail::jy01(x, false);
  return detail::make(r.j0, r.bound);
}

inline SpecFunResult bessel_j1(double x) {
  detail::require_regular(x, "bessel_j1");
  const auto r = detail::jy01(x, false);
  return detail::make(r.j1, r.bound);
}

inline SpecFunResult bessel_y0(double x) {
  detail::require_singular(x, "bessel_y0");
  const auto r = detail::jy01(x, true);
  return detail::make(r.y0, r.bound);
}

inline SpecFunResult bessel_y1(double x) {
  detail::require_singular(x, "bessel_y1");
  const auto r = detail::jy01(x, true);
  return detail::make(r.y1, r.bound);
}

/// e^{-x} I0(x); finite for every x >= 0.
inline SpecFunResult bessel_i0_scaled(double x) {
  detail::require_regular(x, "bessel_i0_scaled");
  double i0e = 0.0, i1e = 0.0;
  detail::scaled_i01(x, i0e, i1e);
  return detail::make(i0e, detail::kBoundModified);
}

/// e^{-x} I1(x).
inline SpecFunResult bessel_i1_scaled(double x) {
  detail::require_regular(x, "bessel_i1_scaled");
  double i0e = 0.0, i1e = 0.0;
  detail::scaled_i01(x, i0e, i1e);
  return detail::make(i1e, detail::kBoundModified);
}

inline SpecFunResult bessel_i0(double x) {
  const double scaled = bessel_i0_scaled(x).value;
  return detail::unscale_i(scaled, x, "bessel_i0");
}

inline SpecFunResult bessel_i1(double x) {
  const double scaled = bessel_i1_scaled(x).value;
  return detail::unscale_i(scaled, x, "bessel_i1");
}

/// e^{x} K0(x).
inline SpecFunResult bessel_k0_scaled(double x) {
  detail::require_singular(x, "bessel_k0_scaled");
  double k0e = 0.0, k1e = 0.0;
  detail::scaled_k01(x, k0e, k1e);
  return detail::make(k0e, detail::kBoundModified);
}

/// e^{x} K1(x).
inline SpecFunResult bessel_k1_scaled(double x) {
  detail::require_singular(x, "bessel_k1_scaled");
  double k0e = 0.0, k1e = 0.0;
  detail::scaled_k01(x, k0e, k1e);
  return detail::make(k1e, detail::kBoundModified);
}

inline SpecFunResult bessel_k0(double x) {
  const double v = bessel_k0_scaled(x).value * std::exp(-x);
  return detail::make(v, detail::kBoundModified);
}

inline SpecFunResult bessel_k1(double x) {
  const double v = bessel_k1_scaled(x).value * std::exp(-x);
  return detail::make(v, detail::kBoundModified);
}

}  // namespace mzm::specfun
