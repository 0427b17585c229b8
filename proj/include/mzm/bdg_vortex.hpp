#pragma once

// Zero-energy Bogoliubov-de Gennes solutions bound to an N = 1 vortex in a
// two-dimensional p_x + i p_y superfluid. The gap vanishes for rho < xi and
// has amplitude delta0 outside. Units: hbar = 1.
//
// Weak pairing (mu > 0): interior chi = A J0(q rho), q = sqrt(2 m mu); exterior
// chi = [B F1(rho) + C F2(rho)] exp(-lambda rho), lambda = delta0 / v_F, with
//   kappa^2 = 2 m mu - lambda^2 > 0   F1 = J0(kappa rho),  F2 = Y0(kappa rho)
//   kappa^2 < 0                       F1 = I0(kt rho),     F2 = K0(kt rho), kt = sqrt(-kappa^2)
//   kappa^2 = 0                       F1 = 1,              F2 = ln(rho / xi)
// and u = e^{i pi/4} chi, v = e^{-i pi/4} chi.
//
// Strong pairing (mu < 0): interior I0(sqrt(2 m |mu|) rho), exterior
// K0(kappa' rho) exp(-lambda rho); no zero mode exists, shown by the sign of
// the log-derivative mismatch at rho = xi.

#include "mzm/numerics.hpp"
#include "mzm/specfun.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzm::bdg {

using cplx = std::complex<double>;

/// Raised when an operation is called in the wrong phase (sign of mu).
struct PhaseError : std::domain_error {
  using std::domain_error::domain_error;
};

struct PhysicalParams {
  double mass = 1.0;
  double mu = 1.0;
  double delta0 = 0.5;
  double p_fermi = std::numbers::sqrt2;
  double xi = 1.0;

  double fermi_velocity() const { return p_fermi / mass; }
  double fermi_energy() const { return p_fermi * p_fermi / (2.0 * mass); }
  /// lambda = delta0 / v_F, the exterior envelope rate.
  double envelope_rate() const { return delta0 / fermi_velocity(); }
  /// kappa^2 = 2 m mu - lambda^2; its sign selects the exterior branch.
  double kappa_squared() const {
    const double lambda = envelope_rate();
    return 2.0 * mass * mu - lambda * lambda;
  }

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(mass) || !finite(mu) || !finite(delta0) || !finite(p_fermi) || !finite(xi))
      throw std::invalid_argument("PhysicalParams: all fields must be finite");
    if (!(mass > 0.0) || !(delta0 > 0.0) || !(p_fermi > 0.0) || !(xi > 0.0))
      throw std::invalid_argument("PhysicalParams: mass, delta0, p_fermi and xi must be > 0");
  }
};

enum class ExteriorBranch { oscillatory, evanescent };

inline const char* to_string(ExteriorBranch b) {
  return b == ExteriorBranch::oscillatory ? "oscillatory" : "evanescent";
}

/// Log-spaced sample radii over [rho_min_factor * xi, rho_max_factor * max(xi, v_F / delta0)].
struct SampleGrid {
  int count = 2000;
  double rho_min_factor = 1e-4;
  double rho_max_factor = 40.0;

  std::vector<double> radii(const PhysicalParams& p) const {
    if (count < 1 || !(rho_min_factor > 0.0) || !(rho_max_factor > 0.0))
      throw std::invalid_argument("SampleGrid: count >= 1 and positive factors required");
    const double lo = rho_min_factor * p.xi;
    const double hi = rho_max_factor * std::max(p.xi, 1.0 / p.envelope_rate());
    if (!(hi > lo)) throw std::invalid_argument("SampleGrid: empty radial range");
    std::vector<double> r(count);
    if (count == 1) {
      r[0] = lo;
      return r;
    }
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) r[i] = lo * std::exp(step * i);
    r.back() = hi;
    return r;
  }
};

struct ZeroModeSample {
  double rho = 0.0;
  cplx u;
  cplx v;
};

struct WeakSolveOptions {
  SampleGrid grid;
  /// Interior amplitude A before normalization; the normalized result does not depend on it.
  double initial_amplitude = 1.0;
  numerics::Tolerances quadrature{1e-14, 1e-12, 20000};
};

namespace detail {

inline const cplx kPhasePlus{std::cos(std::numbers::pi / 4.0), std::sin(std::numbers::pi / 4.0)};
inline const cplx kPhaseMinus{std::cos(std::numbers::pi / 4.0), -std::sin(std::numbers::pi / 4.0)};

// Treat kappa^2 as zero below this fraction of the larger of its two terms.
inline constexpr double kCriticalKappaFraction = 1e-13;

}  // namespace detail

/// The matched, normalized weak-pairing zero mode. Immutable; evaluators
/// accept any rho > 0.
class ZeroModeProfile {
 public:
  const PhysicalParams& params() const { return params_; }
  ExteriorBranch branch() const { return branch_; }
  /// kappa on the oscillatory branch, kt = sqrt(lambda^2 - 2 m mu) on the evanescent one.
  double kappa() const { return k_; }
  /// True when kappa^2 vanished and the (1, ln rho) exterior basis was used.
  bool critical() const { return critical_; }
  double interior_wavenumber() const { return q_; }

  /// Constants in the form chi_in = A J0(q rho), chi_out = [B F1 + C F2] exp(-lambda rho).
  cplx A() const { return {a_, 0.0}; }
  cplx B() const { return {b_paper_, 0.0}; }
  cplx C() const { return {c_paper_, 0.0}; }

  /// 2 pi * integral of rho (|u|^2 + |v|^2), recomputed after normalization.
  double norm() const { return norm_; }
  /// Fitted exponential rate of the |u| envelope over rho in [10 xi, 30 xi].
  double decay_rate() const { return decay_rate_; }
  const std::vector<ZeroModeSample>& samples() const { return samples_; }

  double interior_chi(double rho) const { return a_ * specfun::bessel_j0(q_ * rho).value; }

  double interior_chi_derivative(double rho) const { return -a_ * q_ * specfun::bessel_j1(q_ * rho).value; }

  double exterior_chi(double rho) const {
    const double shift = rho - params_.xi;
    if (critical_) return (b_ + c_ * std::log(rho / params_.xi)) * std::exp(-lambda_ * shift);
    if (branch_ == ExteriorBranch::oscillatory) {
      const double x = k_ * rho;
      return (b_ * specfun::bessel_j0(x).value + c_ * specfun::bessel_y0(x).value) * std::exp(-lambda_ * shift);
    }
    const double x = k_ * rho;
    return b_ * specfun::bessel_i0_scaled(x).value * std::exp((k_ - lambda_) * shift) +
           c_ * specfun::bessel_k0_scaled(x).value * std::exp(-(k_ + lambda_) * shift);
  }

  double exterior_chi_derivative(double rho) const {
    const double shift = rho - params_.xi;
    if (critical_) return c_ / rho * std::exp(-lambda_ * shift) - lambda_ * exterior_chi(rho);
    const double x = k_ * rho;
    if (branch_ == ExteriorBranch::oscillatory) {
      const double bracket = -k_ * (b_ * specfun::bessel_j1(x).value + c_ * specfun::bessel_y1(x).value);
      return bracket * std::exp(-lambda_ * shift) - lambda_ * exterior_chi(rho);
    }
    return b_ * k_ * specfun::bessel_i1_scaled(x).value * std::exp((k_ - lambda_) * shift) -
           c_ * k_ * specfun::bessel_k1_scaled(x).value * std::exp(-(k_ + lambda_) * shift) -
           lambda_ * exterior_chi(rho);
  }

  /// Radial scalar profile: interior formula for rho < xi, exterior otherwise.
  double chi(double rho) const { return rho < params_.xi ? interior_chi(rho) : exterior_chi(rho); }
  cplx u(double rho) const { return detail::kPhasePlus * chi(rho); }
  cplx v(double rho) const { return detail::kPhaseMinus * chi(rho); }

  /// Envelope of the exterior solution: on the oscillatory branch the modulus
  /// of the Hankel-type combination, elsewhere |chi|.
  double exterior_envelope(double rho) const {
    if (critical_ || branch_ == ExteriorBranch::evanescent) return std::fabs(exterior_chi(rho));
    const double x = k_ * rho;
    const double j0 = specfun::bessel_j0(x).value, y0 = specfun::bessel_y0(x).value;
    const double in_phase = b_ * j0 + c_ * y0;
    const double quadrature = b_ * y0 - c_ * j0;
    return std::hypot(in_phase, quadrature) * std::exp(-lambda_ * (rho - params_.xi));
  }

 private:
  friend ZeroModeProfile weak_zero_mode(const PhysicalParams&, const WeakSolveOptions&);

  PhysicalParams params_;
  ExteriorBranch branch_ = ExteriorBranch::oscillatory;
  bool critical_ = false;
  double q_ = 0.0;
  double k_ = 0.0;
  double lambda_ = 0.0;
  // Interior amplitude and exterior constants relative to exp(-lambda (rho - xi))
  // and the scaled basis; b_paper_/c_paper_ are the same constants in the
  // unshifted form.
  double a_ = 0.0, b_ = 0.0, c_ = 0.0;
  double b_paper_ = 0.0, c_paper_ = 0.0;
  double norm_ = 0.0;
  double decay_rate_ = std::numeric_limits<double>::quiet_NaN();
  std::vector<ZeroModeSample> samples_;

  void scale(double factor) {
    a_ *= factor;
    b_ *= factor;
    c_ *= factor;
    b_paper_ *= factor;
    c_paper_ *= factor;
  }

  double norm_integral(const numerics::Tolerances& tol) const {
    const double xi = params_.xi;
    const double inner = numerics::integrate(
        [this](double r) {
          const double c = interior_chi(r);
          return r * c * c;
        },
        0.0, xi, tol);
    double tail_rate = lambda_;
    if (branch_ == ExteriorBranch::evanescent && !critical_) tail_rate = lambda_ - k_;
    const double outer = numerics::integrate(
        [this](double r) {
          const double c = exterior_chi(r);
          return r * c * c;
        },
        xi, std::numeric_limits<double>::infinity(), tol, 1.0 / tail_rate);
    // |u|^2 + |v|^2 = 2 chi^2
    return 4.0 * std::numbers::pi * (inner + outer);
  }

  double fit_decay_rate() const {
    const double lo = 10.0 * params_.xi, hi = 30.0 * params_.xi;
    const bool algebraic = !critical_;  // Bessel-type envelopes carry rho^{-1/2}
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& s : samples_) {
      if (s.rho < lo || s.rho > hi) continue;
      const double env = exterior_envelope(s.rho);
      if (!(env > 0.0)) continue;
      const double y = std::log(env) + (algebraic ? 0.5 * std::log(s.rho) : 0.0);
      sx += s.rho;
      sy += y;
      sxx += s.rho * s.rho;
      sxy += s.rho * y;
      ++n;
    }
    if (n < 3) return std::numeric_limits<double>::quiet_NaN();
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -slope;
  }
};

/// Constructs the normalized Majorana zero mode for mu > 0.
inline ZeroModeProfile weak_zero_mode(const PhysicalParams& params, const WeakSolveOptions& options = {}) {
  params.validate();
  if (!(params.mu > 0.0))
    throw PhaseError("weak_zero_mode: requires mu > 0 (use the strong-pairing scan for mu <= 0)");
  if (!(options.initial_amplitude != 0.0) || !std::isfinite(options.initial_amplitude))
    throw std::invalid_argument("weak_zero_mode: initial_amplitude must be finite and nonzero");

  ZeroModeProfile prof;
  prof.params_ = params;
  prof.lambda_ = params.envelope_rate();
  prof.q_ = std::sqrt(2.0 * params.mass * params.mu);
  const double lambda = prof.lambda_;
  const double xi = params.xi;

  const double k2 = params.kappa_squared();
  const double k2_scale = std::max(2.0 * params.mass * params.mu, lambda * lambda);
  if (std::fabs(k2) <= detail::kCriticalKappaFraction * k2_scale) {
    prof.branch_ = ExteriorBranch::evanescent;
    prof.critical_ = true;
    prof.k_ = 0.0;
  } else if (k2 > 0.0) {
    prof.branch_ = ExteriorBranch::oscillatory;
    prof.k_ = std::sqrt(k2);
  } else {
    prof.branch_ = ExteriorBranch::evanescent;
    prof.k_ = std::sqrt(-k2);
  }
  const double k = prof.k_;

  // Basis values and radial derivatives at xi, envelope exp(-lambda (rho - xi)) included.
  double f1 = 0.0, f2 = 0.0, d1 = 0.0, d2 = 0.0;
  if (prof.critical_) {
    f1 = 1.0;
    f2 = 0.0;
    d1 = -lambda;
    d2 = 1.0 / xi;
  } else if (prof.branch_ == ExteriorBranch::oscillatory) {
    const double x = k * xi;
    f1 = specfun::bessel_j0(x).value;
    f2 = specfun::bessel_y0(x).value;
    d1 = -k * specfun::bessel_j1(x).value - lambda * f1;
    d2 = -k * specfun::bessel_y1(x).value - lambda * f2;
  } else {
    const double x = k * xi;
    f1 = specfun::bessel_i0_scaled(x).value;
    f2 = specfun::bessel_k0_scaled(x).value;
    d1 = k * specfun::bessel_i1_scaled(x).value - lambda * f1;
    d2 = -k * specfun::bessel_k1_scaled(x).value - lambda * f2;
  }

  prof.a_ = options.initial_amplitude;
  numerics::Matrix2c system;
  system << f1, f2, d1, d2;
  const auto bc = numerics::solve_2x2(
      system, {cplx(prof.interior_chi(xi), 0.0), cplx(prof.interior_chi_derivative(xi), 0.0)});
  prof.b_ = bc[0].real();
  prof.c_ = bc[1].real();

  // Convert to the unshifted, unscaled constants.
  const double env = std::exp(lambda * xi);
  if (prof.critical_) {
    prof.b_paper_ = (prof.b_ - prof.c_ * std::log(xi)) * env;
    prof.c_paper_ = prof.c_ * env;
  } else if (prof.branch_ == ExteriorBranch::oscillatory) {
    prof.b_paper_ = prof.b_ * env;
    prof.c_paper_ = prof.c_ * env;
  } else {
    prof.b_paper_ = prof.b_ * env * std::exp(-k * xi);
    prof.c_paper_ = prof.c_ * env * std::exp(k * xi);
  }

  const double raw = prof.norm_integral(options.quadrature);
  if (!(raw > 0.0) || !std::isfinite(raw)) throw numerics::ConvergenceError("weak_zero_mode: invalid norm integral");
  prof.scale(1.0 / std::sqrt(raw));
  prof.norm_ = prof.norm_integral(options.quadrature);

  const auto radii = options.grid.radii(params);
  prof.samples_.reserve(radii.size());
  for (double r : radii) {
    const double c = prof.chi(r);
    prof.samples_.push_back({r, detail::kPhasePlus * c, detail::kPhaseMinus * c});
  }
  prof.decay_rate_ = prof.fit_decay_rate();
  return prof;
}

/// max over samples of |v - conj(u)|.
inline double majorana_condition_residual(std::span<const ZeroModeSample> samples) {
  if (samples.empty()) throw std::invalid_argument("majorana_condition_residual: empty sample list");
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.v - std::conj(s.u)));
  return worst;
}

inline double majorana_condition_residual(const ZeroModeProfile& profile) {
  return majorana_condition_residual(std::span<const ZeroModeSample>(profile.samples()));
}

/// Which exterior solution the strong-pairing mismatch uses.
enum class StrongExterior {
  enveloped,  // K0(kappa' rho) exp(-lambda rho)
  bare,       // K0(kappa' rho)
};

/// kappa' = sqrt(2 m |mu| + lambda^2).
inline double kappa_prime(const PhysicalParams& p) {
  const double lambda = p.envelope_rate();
  return std::sqrt(2.0 * p.mass * std::fabs(p.mu) + lambda * lambda);
}

/// d/drho ln chi_in - d/drho ln chi_out at rho = xi for mu < 0. The interior
/// term is >= 0 and the exterior term < 0, so the result never vanishes.
inline double strong_pairing_residual(const PhysicalParams& params,
                                      StrongExterior variant = StrongExterior::enveloped) {
  params.validate();
  if (!(params.mu < 0.0)) throw PhaseError("strong_pairing_residual: requires mu < 0");
  const double xi = params.xi;
  const double q = std::sqrt(2.0 * params.mass * -params.mu);
  const double kp = kappa_prime(params);

  const double qx = q * xi;
  const double interior = qx == 0.0
                              ? 0.0
                              : q * specfun::bessel_i1_scaled(qx).value / specfun::bessel_i0_scaled(qx).value;
  double exterior = -kp * specfun::bessel_k1_scaled(kp * xi).value / specfun::bessel_k0_scaled(kp * xi).value;
  if (variant == StrongExterior::enveloped) exterior -= params.envelope_rate();
  return interior - exterior;
}

struct ScanPoint {
  double mu = 0.0;
  double residual = 0.0;
  double kappa_prime = 0.0;
};

struct MismatchReport {
  std::vector<ScanPoint> scan_points;
  int sign_changes = 0;
  /// Smallest kappa' over the scan (attained at the mu closest to zero).
  double kappa_prime = 0.0;
  double min_abs_residual = 0.0;
  StrongExterior variant = StrongExterior::enveloped;
};

/// Counts strict sign alternations between consecutive nonzero values.
inline int count_sign_changes(std::span<const double> values) {
  int changes = 0;
  int last = 0;
  for (double v : values) {
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Evaluates the strong-pairing mismatch on n_points evenly spaced mu values
/// in [mu_lo, mu_hi]; every value must be strictly negative.
inline MismatchReport scan_strong_pairing(const PhysicalParams& params_template, double mu_lo, double mu_hi,
                                          int n_points, StrongExterior variant = StrongExterior::enveloped) {
  params_template.validate();
  if (!std::isfinite(mu_lo) || !std::isfinite(mu_hi) || mu_lo > mu_hi)
    throw std::invalid_argument("scan_strong_pairing: need finite mu_lo <= mu_hi");
  if (!(mu_hi < 0.0)) throw PhaseError("scan_strong_pairing: range must lie strictly below mu = 0");
  if (n_points < 1) throw std::invalid_argument("scan_strong_pairing: n_points must be >= 1");
  if (n_points > 1 && mu_lo == mu_hi) n_points = 1;

  MismatchReport report;
  report.variant = variant;
  report.scan_points.reserve(n_points);
  std::vector<double> residuals;
  residuals.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    PhysicalParams p = params_template;
    p.mu = n_points == 1 ? mu_lo : mu_lo + (mu_hi - mu_lo) * i / (n_points - 1);
    const double r = strong_pairing_residual(p, variant);
    report.scan_points.push_back({p.mu, r, kappa_prime(p)});
    residuals.push_back(r);
  }
  report.sign_changes = count_sign_changes(residuals);
  report.kappa_prime = std::numeric_limits<double>::infinity();
  report.min_abs_residual = std::numeric_limits<double>::infinity();
  for (const auto& sp : report.scan_points) {
    report.kappa_prime = std::min(report.kappa_prime, sp.kappa_prime);
    report.min_abs_residual = std::min(report.min_abs_residual, std::fabs(sp.residual));
  }
  return report;
}

/// Order-of-magnitude minigap omega ~ delta0^2 / eps_F protecting the zero mode.
inline double minigap_estimate(const PhysicalParams& params) {
  params.validate();
  return params.delta0 * params.delta0 / params.fermi_energy();
}

}  // namespace mzm::bdg
