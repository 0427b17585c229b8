#pragma once

// Read-out of a vortex qubit: a Gaussian two-photon Raman pulse acting on an
// effective two-level atom, resonant for an unpaired core atom and detuned by
// twice the gap for paired atoms, plus the photon-scattering ratio of the
// detection stage.
//
// Rotating-frame Hamiltonian (angular units):
//   H(t) = 1/2 [[-detuning, Omega(t)], [Omega(t), +detuning]],
//   Omega(t) = Omega0 exp(-omega0^2 t^2),  -t_f <= t <= t_f
// so a pulse of area pi fully transfers a resonant atom.

#include "mzm/numerics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzm::readout {

using numerics::Spinor;

inline double angular_from_hz(double hz) { return 2.0 * std::numbers::pi * hz; }
inline double angular_from_khz(double khz) { return angular_from_hz(1e3 * khz); }
inline double angular_from_mhz(double mhz) { return angular_from_hz(1e6 * mhz); }

struct PulseParams {
  double bandwidth = 1.0;      // omega0, rad/s
  double peak_rabi = 1.77;     // Omega0, rad/s
  double half_duration = 5.0;  // t_f, s
  double detuning = 0.0;       // two-photon detuning, rad/s

  /// The read-out recipe for a given pair gap: omega0 = gap / 2,
  /// Omega0 = peak_ratio * omega0, t_f = duration_ratio / omega0.
  static PulseParams from_gap(double gap, double detuning, double peak_ratio = 1.77, double duration_ratio = 5.0) {
    PulseParams p;
    p.bandwidth = 0.5 * gap;
    p.peak_rabi = peak_ratio * p.bandwidth;
    p.half_duration = duration_ratio / p.bandwidth;
    p.detuning = detuning;
    return p;
  }

  double rabi(double t) const { return peak_rabi * std::exp(-bandwidth * bandwidth * t * t); }

  void validate() const {
    if (!std::isfinite(bandwidth) || !std::isfinite(peak_rabi) || !std::isfinite(half_duration) ||
        !std::isfinite(detuning))
      throw std::invalid_argument("PulseParams: all fields must be finite");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("PulseParams: bandwidth must be > 0");
    if (!(peak_rabi >= 0.0)) throw std::invalid_argument("PulseParams: peak_rabi must be >= 0");
    if (!(half_duration > 0.0)) throw std::invalid_argument("PulseParams: half_duration must be > 0");
  }

  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (bandwidth * half_duration < 1.0)
      w.emplace_back("bandwidth * half_duration < 1: the pulse is cut off well inside its Gaussian core");
    return w;
  }

  bool same_shape(const PulseParams& o) const {
    return bandwidth == o.bandwidth && peak_rabi == o.peak_rabi && half_duration == o.half_duration;
  }
};

/// Sudden truncation at +-t_f, or the full Gaussian (window widened until the
/// envelope is below 1e-35).
enum class PulseWindow { truncated, untruncated };

inline double window_half_width(const PulseParams& p, PulseWindow w) {
  if (w == PulseWindow::truncated) return p.half_duration;
  return std::max(p.half_duration, 9.0 / p.bandwidth);
}

struct PulseResult {
  double p_transfer = 0.0;
  Spinor final_state = Spinor::Zero();
  double pulse_area = 0.0;
};

inline double pulse_area_closed_form(const PulseParams& p) {
  p.validate();
  return p.peak_rabi * std::sqrt(std::numbers::pi) / p.bandwidth * std::erf(p.bandwidth * p.half_duration);
}

/// Integral of Omega(t) over [-t_f, t_f] by quadrature, checked against the
/// closed form (Omega0 sqrt(pi) / omega0) erf(omega0 t_f).
inline double pulse_area(const PulseParams& p) {
  p.validate();
  const double closed = pulse_area_closed_form(p);
  if (p.peak_rabi == 0.0) return 0.0;
  // Integrate in the dimensionless variable s = omega0 t.
  const double reach = p.bandwidth * p.half_duration;
  const double shape = numerics::integrate([](double s) { return std::exp(-s * s); }, -reach, reach,
                                           numerics::Tolerances{1e-15, 1e-14, 2000});
  const double area = p.peak_rabi / p.bandwidth * shape;
  if (std::fabs(area - closed) > 1e-9 * std::fabs(closed))
    throw numerics::ConvergenceError("pulse_area: quadrature disagrees with the closed form");
  return area;
}

/// Evolves (1, 0) through the pulse; p_transfer is the final excited population.
inline PulseResult simulate_raman_pulse(const PulseParams& p, PulseWindow window = PulseWindow::truncated,
                                        const numerics::Tolerances& tol = {},
                                        const numerics::EvolutionObserver& observer = {}) {
  p.validate();
  const double half = window_half_width(p, window);
  auto hamiltonian = [&p](double t) {
    const double om = p.rabi(t);
    numerics::Matrix2c h;
    h << -0.5 * p.detuning, 0.5 * om, 0.5 * om, 0.5 * p.detuning;
    return h;
  };
  const Spinor start(1.0, 0.0);
  PulseResult r;
  r.final_state = numerics::evolve_two_level(hamiltonian, start, -half, half, tol, observer);
  r.p_transfer = std::norm(r.final_state[1]);
  r.pulse_area = pulse_area(p);
  return r;
}

struct ScatterParams {
  double gamma = angular_from_mhz(1.2);        // excited-state decay rate, rad/s
  double delta_eff = angular_from_mhz(170.0);  // effective detuning of paired atoms, rad/s

  void validate() const {
    if (!std::isfinite(gamma) || !std::isfinite(delta_eff) || !(gamma > 0.0) || !(delta_eff > 0.0))
      throw std::invalid_argument("ScatterParams: gamma and delta_eff must be finite and > 0");
  }
};

/// Ratio of photons scattered by paired vs unpaired atoms, (Gamma / 2 delta)^2.
inline double scattering_ratio(const ScatterParams& s) {
  s.validate();
  const double r = s.gamma / (2.0 * s.delta_eff);
  return r * r;
}

/// Hardware constants carried through the report; they constrain the optics,
/// not the two-level dynamics.
struct HardwareNotes {
  double beam_waist_um = 1.5;
  double min_vortex_spacing_um = 10.0;
  std::string initial_state = "4^2S_1/2 |F=9/2, m_F=-7/2>";
  std::string raman_target = "|F=7/2, m_F=-5/2>";
  std::string cycling_lower = "|F=9/2, m_F=9/2>";
  std::string cycling_upper = "5^2P_3/2 |F=11/2, m_F=11/2>";
};

struct ReadoutReport {
  PulseParams resonant;
  PulseParams paired;
  ScatterParams scatter;
  double p_signal = 0.0;
  double p_false = 0.0;
  double p_signal_untruncated = 0.0;
  double p_false_untruncated = 0.0;
  double scatter_ratio = 0.0;
  double discrimination = 0.0;
  bool discriminating = false;
  double pulse_area = 0.0;
  std::vector<std::string> warnings;
  HardwareNotes notes;
};

/// Signal must be at least this likely and this many times the background.
inline constexpr double kMinSignal = 0.5;
inline constexpr double kMinDiscrimination = 100.0;

inline ReadoutReport readout_fidelity_report(const PulseParams& resonant, const PulseParams& paired,
                                             const ScatterParams& scatter, const numerics::Tolerances& tol = {}) {
  resonant.validate();
  paired.validate();
  scatter.validate();
  if (!resonant.same_shape(paired))
    throw std::invalid_argument("readout_fidelity_report: mismatched pulse shapes (only the detuning may differ)");

  ReadoutReport r;
  r.resonant = resonant;
  r.paired = paired;
  r.scatter = scatter;
  const auto sig = simulate_raman_pulse(resonant, PulseWindow::truncated, tol);
  r.p_signal = sig.p_transfer;
  r.pulse_area = sig.pulse_area;
  r.p_false = simulate_raman_pulse(paired, PulseWindow::truncated, tol).p_transfer;
  r.p_signal_untruncated = simulate_raman_pulse(resonant, PulseWindow::untruncated, tol).p_transfer;
  r.p_false_untruncated = simulate_raman_pulse(paired, PulseWindow::untruncated, tol).p_transfer;
  r.scatter_ratio = scattering_ratio(scatter);
  r.discrimination = r.p_signal / std::max(r.p_false, r.scatter_ratio);
  r.discriminating = r.p_signal >= kMinSignal && r.discrimination >= kMinDiscrimination;
  r.warnings = resonant.warnings();
  return r;
}

}  // namespace mzm::readout
