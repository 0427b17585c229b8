#pragma once

// Small numerical toolbox: adaptive quadrature on finite and semi-infinite
// intervals, bracketed Brent root finding, a 2x2 complex linear solve and an
// adaptive RK4 integrator for two-component Schroedinger evolution.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzm::numerics {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector2cd;
using Matrix2c = Eigen::Matrix2cd;

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BracketError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepUnderflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHermitianError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Tolerances {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_iterations = 200;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iterations < 1)
      throw std::invalid_argument("Tolerances: abs_tol, rel_tol must be > 0 and max_iterations >= 1");
  }
};

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;

  void validate() const {
    if (!(lo < hi)) throw BracketError("RootBracket: lo must be < hi");
    if (!(f_lo * f_hi < 0.0)) throw BracketError("RootBracket: f(lo) and f(hi) must have opposite signs");
  }
};

/// Evaluates f at both ends and validates the sign change.
template <class F>
RootBracket make_bracket(F&& f, double lo, double hi) {
  RootBracket b{lo, hi, f(lo), f(hi)};
  b.validate();
  return b;
}

namespace detail {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline const GaussRule& panel_rule() {
  static const GaussRule rule = gauss_legendre(10);
  return rule;
}

template <class G>
double gauss_panel(G& g, double a, double b) {
  const auto& rule = panel_rule();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = g(mid + half * rule.nodes[i]);
    if (std::isnan(y)) throw std::domain_error("integrate: integrand returned NaN");
    sum += rule.weights[i] * y;
  }
  return half * sum;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// Globally adaptive bisection. Each panel is integrated as a whole and as two
// halves; the halves are kept and their disagreement is the error estimate.
template <class G>
double adaptive(G& g, double a, double b, const Tolerances& tol) {
  auto make_panel = [&g](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double whole = gauss_panel(g, lo, hi);
    const double halves = gauss_panel(g, lo, mid) + gauss_panel(g, mid, hi);
    return Panel{lo, hi, halves, std::fabs(halves - whole)};
  };

  std::priority_queue<Panel> panels;
  panels.push(make_panel(a, b));
  double total = panels.top().value;
  double error = panels.top().error;

  for (int iter = 0;; ++iter) {
    if (error <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(total))) return total;
    if (iter >= tol.max_iterations)
      throw ConvergenceError("integrate: no convergence after " + std::to_string(tol.max_iterations) +
                             " subdivisions (error estimate " + std::to_string(error) + ")");
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = make_panel(worst.a, mid);
    const Panel right = make_panel(mid, worst.b);
    panels.push(left);
    panels.push(right);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (error < 0.0) {
      // Recompute from scratch if cancellation in the running sum went negative.
      error = 0.0;
      auto copy = panels;
      while (!copy.empty()) {
        error += copy.top().error;
        copy.pop();
      }
    }
  }
}

}  // namespace detail

/// Integrates f over [a, b]. b may be +infinity, in which case the tail is
/// mapped onto [0, 1) with x = a + scale * s / (1 - s); f must decay at least
/// exponentially there.
template <class F>
double integrate(F&& f, double a, double b, const Tolerances& tol = {}, double scale = 1.0) {
  tol.validate();
  if (!std::isfinite(a) || std::isnan(b) || b < a)
    throw std::invalid_argument("integrate: need finite a and b >= a");
  if (a == b) return 0.0;
  if (std::isinf(b)) {
    if (!(scale > 0.0)) throw std::invalid_argument("integrate: scale must be > 0");
    auto mapped = [&f, a, scale](double s) {
      const double one_minus = 1.0 - s;
      const double x = a + scale * s / one_minus;
      const double y = f(x);
      if (y == 0.0) return 0.0;
      return y * scale / (one_minus * one_minus);
    };
    return detail::adaptive(mapped, 0.0, 1.0, tol);
  }
  auto direct = [&f](double x) { return f(x); };
  return detail::adaptive(direct, a, b, tol);
}

/// Brent's bracketed root finder (inverse quadratic / secant with bisection
/// fallback). The returned point always lies inside [bracket.lo, bracket.hi].
template <class F>
double find_root(F&& f, const RootBracket& bracket, const Tolerances& tol = {}) {
  tol.validate();
  bracket.validate();
  const double eps = std::numeric_limits<double>::epsilon();
  double a = bracket.lo, b = bracket.hi, c = bracket.hi;
  double fa = bracket.f_lo, fb = bracket.f_hi, fc = fb;
  double d = 0.0, e = 0.0;

  for (int iter = 0; iter < tol.max_iterations; ++iter) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol.abs_tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return std::clamp(b, bracket.lo, bracket.hi);

    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if (std::isnan(fb)) throw std::domain_error("find_root: function returned NaN");
  }
  throw ConvergenceError("find_root: no convergence after " + std::to_string(tol.max_iterations) + " iterations");
}

/// Solves [[a00, a01], [a10, a11]] x = rhs by Cramer's rule. Throws when the
/// determinant, relative to the product of the row norms, is below 1e-14.
inline std::array<cplx, 2> solve_2x2(const Matrix2c& m, const std::array<cplx, 2>& rhs) {
  const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double scale = m.row(0).norm() * m.row(1).norm();
  if (!(scale > 0.0) || std::abs(det) < 1e-14 * scale)
    throw SingularSystemError("solve_2x2: determinant " + std::to_string(std::abs(det)) +
                              " is degenerate relative to row scale " + std::to_string(scale));
  return {(rhs[0] * m(1, 1) - m(0, 1) * rhs[1]) / det, (m(0, 0) * rhs[1] - m(1, 0) * rhs[0]) / det};
}

using Hamiltonian2 = std::function<Matrix2c(double)>;
using EvolutionObserver = std::function<void(double, const Spinor&)>;

namespace detail {

inline void check_hermitian(const Matrix2c& h, double t) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asym = std::max({std::abs(h(0, 1) - std::conj(h(1, 0))), std::fabs(h(0, 0).imag()),
                                std::fabs(h(1, 1).imag())});
  if (!std::isfinite(asym) || asym > 1e-12 * scale)
    throw NonHermitianError("evolve_two_level: hamiltonian is not hermitian at t = " + std::to_string(t));
}

template <class H>
Spinor rk4_step(H& ham, double t, const Spinor& y, double h) {
  const cplx mi(0.0, -1.0);
  const Spinor k1 = mi * (ham(t) * y);
  const Spinor k2 = mi * (ham(t + 0.5 * h) * (y + 0.5 * h * k1));
  const Spinor k3 = mi * (ham(t + 0.5 * h) * (y + 0.5 * h * k2));
  const Spinor k4 = mi * (ham(t + h) * (y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// Integrates i d/dt psi = H(t) psi from t0 to t1 with classical RK4 and step
/// doubling. The local error of each step is held below
/// (abs_tol + rel_tol |psi|) * h / |t1 - t0|, so the accumulated error stays
/// near the requested tolerance. max_iterations bounds consecutive rejected
/// steps; the observer, when given, sees every accepted step.
inline Spinor evolve_two_level(const Hamiltonian2& hamiltonian, const Spinor& state0, double t0, double t1,
                               const Tolerances& tol = {}, const EvolutionObserver& observer = {}) {
  tol.validate();
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw std::invalid_argument("evolve_two_level: non-finite time");
  if (std::fabs(state0.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("evolve_two_level: initial state must be normalized");

  auto ham = [&hamiltonian](double t) {
    const Matrix2c h = hamiltonian(t);
    detail::check_hermitian(h, t);
    return h;
  };

  if (observer) observer(t0, state0);
  if (t0 == t1) return state0;

  const double span = t1 - t0;
  const double direction = span > 0.0 ? 1.0 : -1.0;
  const double length = std::fabs(span);
  const double min_step = 1e-14 * length;
  constexpr long kMaxSteps = 50'000'000;

  Spinor y = state0;
  double t = t0;
  double h = span / 64.0;
  int rejected = 0;
  long steps = 0;

  while (direction * (t1 - t) > 0.0) {
    if (direction * (t + h - t1) > 0.0) h = t1 - t;
    const Spinor full = detail::rk4_step(ham, t, y, h);
    const Spinor half = detail::rk4_step(ham, t, y, 0.5 * h);
    const Spinor twice = detail::rk4_step(ham, t + 0.5 * h, half, 0.5 * h);
    const double err = (twice - full).cwiseAbs().maxCoeff() / 15.0;
    const double allowed = (tol.abs_tol + tol.rel_tol * twice.norm()) * std::fabs(h) / length;

    if (err <= allowed) {
      t = (h == t1 - t) ? t1 : t + h;
      y = twice + (twice - full) / 15.0;
      rejected = 0;
      if (observer) observer(t, y);
      if (++steps > kMaxSteps) throw ConvergenceError("evolve_two_level: step budget exhausted");
    } else if (++rejected > tol.max_iterations) {
      throw ConvergenceError("evolve_two_level: too many consecutive rejected steps");
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 4.0;
    h *= std::clamp(factor, 0.1, 4.0);
    if (std::fabs(h) < min_step && direction * (t1 - t) > min_step)
      throw StepUnderflowError("evolve_two_level: step size underflow at t = " + std::to_string(t));
  }
  return y;
}

}  // namespace mzm::numerics
