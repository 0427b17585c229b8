#pragma once

// File formats: CSV and JSON exports for zero-mode profiles, strong-pairing
// scans, register states and read-out reports, with loaders for the JSON
// documents. CSV values are written with 17 significant digits; JSON numbers
// use the shortest representation that round-trips exactly.

#include "mzm/bdg_vortex.hpp"
#include "mzm/majorana_register.hpp"
#include "mzm/readout.hpp"

#include "json.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace mzm::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kProfileCsvHeader = "rho,re_u,im_u,re_v,im_v";
inline constexpr const char* kTimeseriesCsvHeader = "t,re_c0,im_c0,re_c1,im_c1";
inline constexpr const char* kBasisConvention =
    "little-endian occupation basis: bit k-1 of the index is n_k; c_k = (gamma_{2k-1} + i gamma_{2k}) / 2";

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline std::complex<double> complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be a [re, im] pair");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

// ---------------------------------------------------------------- profiles

inline void write_profile_csv(std::ostream& out, const bdg::ZeroModeProfile& profile) {
  out << kProfileCsvHeader << '\n';
  for (const auto& s : profile.samples())
    out << fmt17(s.rho) << ',' << fmt17(s.u.real()) << ',' << fmt17(s.u.imag()) << ',' << fmt17(s.v.real()) << ','
        << fmt17(s.v.imag()) << '\n';
}

inline json params_to_json(const bdg::PhysicalParams& p) {
  return {{"mass", p.mass}, {"mu", p.mu}, {"delta0", p.delta0}, {"p_fermi", p.p_fermi}, {"xi", p.xi}};
}

inline bdg::PhysicalParams params_from_json(const json& j) {
  bdg::PhysicalParams p;
  p.mass = j.at("mass").get<double>();
  p.mu = j.at("mu").get<double>();
  p.delta0 = j.at("delta0").get<double>();
  p.p_fermi = j.at("p_fermi").get<double>();
  p.xi = j.at("xi").get<double>();
  p.validate();
  return p;
}

inline json profile_to_json(const bdg::ZeroModeProfile& profile) {
  return {{"kind", "zero_mode_profile"},
          {"params", params_to_json(profile.params())},
          {"branch", bdg::to_string(profile.branch())},
          {"critical", profile.critical()},
          {"kappa", profile.kappa()},
          {"interior_wavenumber", profile.interior_wavenumber()},
          {"constants",
           {{"A", complex_to_json(profile.A())}, {"B", complex_to_json(profile.B())}, {"C", complex_to_json(profile.C())}}},
          {"norm", profile.norm()},
          {"decay_rate", profile.decay_rate()},
          {"expected_decay_rate", profile.params().envelope_rate()},
          {"majorana_residual", bdg::majorana_condition_residual(profile)},
          {"n_samples", profile.samples().size()}};
}

/// Scalar summary of a profile, as read back from its JSON document.
struct ProfileSummary {
  bdg::PhysicalParams params;
  std::string branch;
  bool critical = false;
  double kappa = 0.0;
  std::complex<double> a, b, c;
  double norm = 0.0;
  double decay_rate = 0.0;
  double majorana_residual = 0.0;
  std::size_t n_samples = 0;
};

inline ProfileSummary profile_summary_from_json(const json& j) {
  if (j.value("kind", "") != "zero_mode_profile") throw std::invalid_argument("not a zero_mode_profile document");
  ProfileSummary s;
  s.params = params_from_json(j.at("params"));
  s.branch = j.at("branch").get<std::string>();
  s.critical = j.at("critical").get<bool>();
  s.kappa = j.at("kappa").get<double>();
  s.a = complex_from_json(j.at("constants").at("A"));
  s.b = complex_from_json(j.at("constants").at("B"));
  s.c = complex_from_json(j.at("constants").at("C"));
  s.norm = j.at("norm").get<double>();
  s.decay_rate = j.at("decay_rate").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("decay_rate").get<double>();
  s.majorana_residual = j.at("majorana_residual").get<double>();
  s.n_samples = j.at("n_samples").get<std::size_t>();
  return s;
}

// ------------------------------------------------------------- phase scans

inline const char* to_string(bdg::StrongExterior v) {
  return v == bdg::StrongExterior::enveloped ? "enveloped" : "bare";
}

inline json mismatch_report_to_json(const bdg::MismatchReport& r) {
  json points = json::array();
  for (const auto& p : r.scan_points)
    points.push_back({{"mu", p.mu}, {"residual", p.residual}, {"kappa_prime", p.kappa_prime}});
  return {{"kind", "strong_pairing_scan"},
          {"exterior", to_string(r.variant)},
          {"sign_changes", r.sign_changes},
          {"kappa_prime", r.kappa_prime},
          {"min_abs_residual", r.min_abs_residual},
          {"points", std::move(points)}};
}

// -------------------------------------------------------------- registers

inline json register_to_json(const braid::MajoranaRegister& reg) {
  json amps = json::array();
  for (Eigen::Index j = 0; j < reg.amplitudes().size(); ++j) amps.push_back(complex_to_json(reg.amplitudes()[j]));
  return {{"kind", "majorana_register"}, {"n", reg.n_pairs()}, {"basis", kBasisConvention}, {"amplitudes", std::move(amps)}};
}

inline braid::MajoranaRegister register_from_json(const json& j) {
  if (j.value("kind", "") != "majorana_register") throw std::invalid_argument("not a majorana_register document");
  const int n = j.at("n").get<int>();
  const auto& amps = j.at("amplitudes");
  Eigen::VectorXcd a(amps.size());
  for (std::size_t k = 0; k < amps.size(); ++k) a[k] = complex_from_json(amps[k]);
  return braid::MajoranaRegister::from_amplitudes(n, std::move(a));
}

/// Occupation bitstring written most-significant mode first, e.g. "10" = mode 2 occupied.
inline std::string bitstring(std::uint32_t bits, int n) {
  std::string s(n, '0');
  for (int k = 0; k < n; ++k)
    if (bits >> k & 1u) s[n - 1 - k] = '1';
  return s;
}

// ---------------------------------------------------------------- readout

inline json pulse_to_json(const readout::PulseParams& p) {
  return {{"bandwidth", p.bandwidth}, {"peak_rabi", p.peak_rabi}, {"half_duration", p.half_duration}, {"detuning", p.detuning}};
}

inline readout::PulseParams pulse_from_json(const json& j) {
  readout::PulseParams p;
  p.bandwidth = j.at("bandwidth").get<double>();
  p.peak_rabi = j.at("peak_rabi").get<double>();
  p.half_duration = j.at("half_duration").get<double>();
  p.detuning = j.at("detuning").get<double>();
  p.validate();
  return p;
}

inline json readout_report_to_json(const readout::ReadoutReport& r) {
  const auto& n = r.notes;
  return {{"kind", "readout_report"},
          {"inputs",
           {{"resonant_pulse", pulse_to_json(r.resonant)},
            {"paired_pulse", pulse_to_json(r.paired)},
            {"scatter", {{"gamma", r.scatter.gamma}, {"delta", r.scatter.delta_eff}}}}},
          {"p_signal", r.p_signal},
          {"p_false", r.p_false},
          {"p_signal_untruncated", r.p_signal_untruncated},
          {"p_false_untruncated", r.p_false_untruncated},
          {"scatter_ratio", r.scatter_ratio},
          {"discrimination", r.discrimination},
          {"discriminating", r.discriminating},
          {"pulse_area", r.pulse_area},
          {"warnings", r.warnings},
          {"hardware_notes",
           {{"beam_waist_um", n.beam_waist_um},
            {"min_vortex_spacing_um", n.min_vortex_spacing_um},
            {"initial_state", n.initial_state},
            {"raman_target", n.raman_target},
            {"cycling_lower", n.cycling_lower},
            {"cycling_upper", n.cycling_upper}}}};
}

inline readout::ReadoutReport readout_report_from_json(const json& j) {
  if (j.value("kind", "") != "readout_report") throw std::invalid_argument("not a readout_report document");
  readout::ReadoutReport r;
  const auto& in = j.at("inputs");
  r.resonant = pulse_from_json(in.at("resonant_pulse"));
  r.paired = pulse_from_json(in.at("paired_pulse"));
  r.scatter.gamma = in.at("scatter").at("gamma").get<double>();
  r.scatter.delta_eff = in.at("scatter").at("delta").get<double>();
  r.p_signal = j.at("p_signal").get<double>();
  r.p_false = j.at("p_false").get<double>();
  r.p_signal_untruncated = j.at("p_signal_untruncated").get<double>();
  r.p_false_untruncated = j.at("p_false_untruncated").get<double>();
  r.scatter_ratio = j.at("scatter_ratio").get<double>();
  r.discrimination = j.at("discrimination").get<double>();
  r.discriminating = j.at("discriminating").get<bool>();
  r.pulse_area = j.at("pulse_area").get<double>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

/// Row of the Rabi time-series CSV.
inline void write_timeseries_row(std::ostream& out, double t, const numerics::Spinor& c) {
  out << fmt17(t) << ',' << fmt17(c[0].real()) << ',' << fmt17(c[0].imag()) << ',' << fmt17(c[1].real()) << ','
      << fmt17(c[1].imag()) << '\n';
}

}  // namespace mzm::io
