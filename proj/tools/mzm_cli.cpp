// mzm: command-line front end for the vortex zero-mode, braiding and read-out
// simulations.
//
// Exit codes: 0 success, 1 runtime failure, 2 domain error, 64 usage, 65 bad input data.

#include "mzm/bdg_vortex.hpp"
#include "mzm/braid_word.hpp"
#include "mzm/config.hpp"
#include "mzm/io.hpp"
#include "mzm/majorana_register.hpp"
#include "mzm/readout.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::string> out_dir;
  long samples = 0;
  std::optional<std::uint64_t> seed;
  std::string mu_range;
  bool timeseries = false;
};

struct MuRange {
  double lo, hi;
  int n;
};

MuRange parse_mu_range(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
  if (b == std::string::npos) throw UsageError("--mu-range must look like LO:HI:N");
  MuRange r{};
  try {
    r.lo = mzm::config::parse_number(text.substr(0, a), "--mu-range LO");
    r.hi = mzm::config::parse_number(text.substr(a + 1, b - a - 1), "--mu-range HI");
    const auto n = mzm::config::parse_integer(text.substr(b + 1), "--mu-range N");
    if (n > 1'000'000) throw UsageError("--mu-range: N too large");
    r.n = static_cast<int>(n);
  } catch (const mzm::config::ConfigError& e) {
    throw UsageError(e.what());
  }
  if (r.n < 1 || r.lo > r.hi) throw UsageError("--mu-range: empty range (need LO <= HI and N >= 1)");
  if (r.n > 1 && r.lo == r.hi) throw UsageError("--mu-range: LO == HI requires N = 1");
  return r;
}

mzm::config::RunConfig load_config(const Options& opt) {
  auto cfg = mzm::config::load_run_config(opt.config_path);
  if (opt.out_dir) cfg.output_dir = *opt.out_dir;
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

fs::path prepare_output(const mzm::config::RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  return cfg.output_dir;
}

void write_json(const fs::path& path, const mzm::io::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

int cmd_zero_mode(const Options& opt) {
  const auto cfg = load_config(opt);
  if (!cfg.physical) throw UsageError("zero-mode needs a [physical] section");
  if (!(cfg.physical->mu > 0.0))
    throw mzm::bdg::PhaseError("zero-mode requires mu > 0; for mu <= 0 use `mzm phase-scan`");

  const auto profile = mzm::bdg::weak_zero_mode(*cfg.physical);
  const auto dir = prepare_output(cfg);
  {
    std::ofstream csv(dir / "zero_mode_profile.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write profile CSV");
    mzm::io::write_profile_csv(csv, profile);
  }
  write_json(dir / "zero_mode.json", mzm::io::profile_to_json(profile));

  std::cout << "branch             " << mzm::bdg::to_string(profile.branch()) << (profile.critical() ? " (critical)" : "")
            << '\n'
            << "kappa              " << fmt(profile.kappa(), 10) << '\n'
            << "norm               " << fmt(profile.norm(), 15) << '\n'
            << "decay_rate         " << fmt(profile.decay_rate(), 10) << "  (delta0/v_F = "
            << fmt(cfg.physical->envelope_rate(), 10) << ")\n"
            << "majorana_residual  " << fmt(mzm::bdg::majorana_condition_residual(profile), 3) << '\n'
            << "wrote " << (dir / "zero_mode_profile.csv").string() << ", " << (dir / "zero_mode.json").string()
            << '\n';
  return kExitOk;
}

int cmd_phase_scan(const Options& opt) {
  const auto range = parse_mu_range(opt.mu_range);
  const auto cfg = load_config(opt);
  if (!cfg.physical) throw UsageError("phase-scan needs a [physical] section");

  using mzm::io::json;
  json points = json::array();
  std::vector<double> negative_residuals;
  std::vector<std::size_t> negative_rows;
  int found = 0;
  for (int i = 0; i < range.n; ++i) {
    auto p = *cfg.physical;
    p.mu = range.n == 1 ? range.lo : range.lo + (range.hi - range.lo) * i / (range.n - 1);
    if (p.mu > 0.0) {
      const auto prof = mzm::bdg::weak_zero_mode(p);
      points.push_back({{"mu", p.mu},
                        {"outcome", "mode-found"},
                        {"branch", mzm::bdg::to_string(prof.branch())},
                        {"norm_error", std::fabs(prof.norm() - 1.0)},
                        {"majorana_residual", mzm::bdg::majorana_condition_residual(prof)}});
      ++found;
    } else if (p.mu < 0.0) {
      const double r = mzm::bdg::strong_pairing_residual(p);
      negative_residuals.push_back(r);
      negative_rows.push_back(points.size());
      points.push_back({{"mu", p.mu}, {"outcome", "no-root"}, {"residual", r}, {"kappa_prime", mzm::bdg::kappa_prime(p)}});
    } else {
      points.push_back({{"mu", p.mu}, {"outcome", "transition"}});
    }
  }
  // A sign change in the mismatch would bracket a strong-pairing zero mode.
  const int sign_changes = mzm::bdg::count_sign_changes(negative_residuals);
  for (std::size_t k = 0; k < negative_rows.size(); ++k) {
    const bool left = k > 0 && negative_residuals[k - 1] * negative_residuals[k] < 0.0;
    const bool right = k + 1 < negative_rows.size() && negative_residuals[k] * negative_residuals[k + 1] < 0.0;
    if (left || right || negative_residuals[k] == 0.0) points[negative_rows[k]]["outcome"] = "root-candidate";
  }

  const json doc = {{"kind", "phase_scan"},
                    {"params", mzm::io::params_to_json(*cfg.physical)},
                    {"mu_range", {{"lo", range.lo}, {"hi", range.hi}, {"n", range.n}}},
                    {"modes_found", found},
                    {"strong_points", negative_residuals.size()},
                    {"strong_sign_changes", sign_changes},
                    {"points", points}};
  const auto dir = prepare_output(cfg);
  write_json(dir / "phase_scan.json", doc);

  std::cout << "mu                 outcome          value\n";
  for (const auto& pt : points) {
    const auto outcome = pt.at("outcome").get<std::string>();
    std::string value;
    if (pt.contains("residual")) value = "mismatch " + fmt(pt.at("residual").get<double>());
    if (pt.contains("norm_error")) value = "norm_error " + fmt(pt.at("norm_error").get<double>(), 3);
    std::printf("%-18s %-16s %s\n", fmt(pt.at("mu").get<double>(), 8).c_str(), outcome.c_str(), value.c_str());
  }
  std::cout << "modes found: " << found << ", strong-pairing points: " << negative_residuals.size()
            << ", mismatch sign changes: " << sign_changes << '\n'
            << "wrote " << (dir / "phase_scan.json").string() << '\n';
  return kExitOk;
}

int cmd_braid(const Options& opt) {
  const auto cfg = load_config(opt);
  if (!cfg.braid) throw UsageError("braid needs a [braid] section");
  const int n = cfg.braid->n_pairs;

  mzm::braid::BraidWord word;
  try {
    if (cfg.braid->script_path) {
      std::ifstream in(*cfg.braid->script_path, std::ios::binary);
      if (!in) throw DataError("cannot open braid script '" + cfg.braid->script_path->string() + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      word = mzm::braid::concatenate(mzm::braid::parse_braid_script(ss.str()));
    } else if (cfg.braid->word) {
      word = mzm::braid::parse_braid_word(*cfg.braid->word);
    }
  } catch (const mzm::braid::BraidSyntaxError& e) {
    throw DataError(std::string("braid script: ") + e.what());
  }
  if (word.max_site() > 2 * n - 1)
    throw DataError("braid word uses site s" + std::to_string(word.max_site()) + " but n = " + std::to_string(n) +
                    " allows s1..s" + std::to_string(2 * n - 1));

  const auto state = mzm::braid::apply_braid(mzm::braid::MajoranaRegister::vacuum(n), word);
  const auto probs = mzm::braid::measure_occupations(state);
  const double par = mzm::braid::parity(state);

  using mzm::io::json;
  json table = json::object();
  std::cout << "word    " << mzm::braid::format_braid_word(word) << '\n' << "bits    probability\n";
  for (std::uint32_t j = 0; j < probs.size(); ++j) {
    const auto bits = mzm::io::bitstring(j, n);
    table[bits] = probs[j];
    if (probs[j] > 1e-15) std::printf("%-7s %.12f\n", bits.c_str(), probs[j]);
  }
  std::cout << "parity  " << fmt(par, 12) << '\n';

  json doc = {{"kind", "braid_run"},
              {"word", mzm::braid::format_braid_word(word)},
              {"n", n},
              {"probabilities", table},
              {"parity", par},
              {"state", mzm::io::register_to_json(state)}};
  if (opt.samples > 0) {
    const auto hist = mzm::braid::sample_occupations(state, opt.samples, cfg.seed);
    json h = json::object();
    std::cout << "samples (" << opt.samples << " shots, seed " << cfg.seed << ")\n";
    for (const auto& [bits, count] : hist) {
      h[mzm::io::bitstring(bits, n)] = count;
      std::printf("%-7s %ld\n", mzm::io::bitstring(bits, n).c_str(), count);
    }
    doc["samples"] = {{"shots", opt.samples}, {"seed", cfg.seed}, {"histogram", h}};
  }
  const auto dir = prepare_output(cfg);
  write_json(dir / "braid.json", doc);
  std::cout << "wrote " << (dir / "braid.json").string() << '\n';
  return kExitOk;
}

int cmd_readout(const Options& opt) {
  const auto cfg = load_config(opt);
  if (!cfg.pulse) throw UsageError("readout needs a [pulse] section");
  if (!cfg.scatter) throw UsageError("readout needs a [scatter] section");

  const auto resonant = cfg.pulse->resonant;
  const auto paired = cfg.pulse->paired();
  for (const auto& w : resonant.warnings()) std::cerr << "warning: " << w << '\n';
  const auto report = mzm::readout::readout_fidelity_report(resonant, paired, *cfg.scatter);
  const auto dir = prepare_output(cfg);
  write_json(dir / "readout.json", mzm::io::readout_report_to_json(report));

  if (opt.timeseries) {
    std::ofstream csv(dir / "readout_timeseries.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write time series");
    csv << mzm::io::kTimeseriesCsvHeader << '\n';
    mzm::readout::simulate_raman_pulse(resonant, mzm::readout::PulseWindow::truncated, {},
                                       [&csv](double t, const mzm::numerics::Spinor& c) {
                                         mzm::io::write_timeseries_row(csv, t, c);
                                       });
  }

  std::cout << "P_signal        " << fmt(report.p_signal, 10) << '\n'
            << "P_false         " << fmt(report.p_false, 4) << "  (untruncated " << fmt(report.p_false_untruncated, 4)
            << ")\n"
            << "scatter_ratio   " << fmt(report.scatter_ratio, 2) << "  (" << fmt(report.scatter_ratio, 6) << ")\n"
            << "discrimination  " << fmt(report.discrimination, 6)
            << (report.discriminating ? "" : "  (non-discriminating)") << '\n'
            << "pulse_area      " << fmt(report.pulse_area, 10) << '\n'
            << "wrote " << (dir / "readout.json").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majorana zero modes in a p_x + i p_y superfluid: zero-mode solver, braiding and read-out"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Run configuration (INI)")->required();
    sub->add_option("--out", opt.out_dir, "Output directory (overrides [run] output_dir)");
  };

  auto* zero = app.add_subcommand("zero-mode", "Solve the weak-pairing zero mode and export the profile");
  add_common(zero);
  auto* scan = app.add_subcommand("phase-scan", "Tabulate zero-mode existence across chemical potentials");
  add_common(scan);
  scan->add_option("--mu-range", opt.mu_range, "LO:HI:N")->required();
  auto* braid = app.add_subcommand("braid", "Braid Majorana modes and report occupation probabilities");
  add_common(braid);
  braid->add_option("--samples", opt.samples, "Number of sampled measurement shots")->check(CLI::NonNegativeNumber);
  braid->add_option("--seed", opt.seed, "Sampling seed (overrides [run] seed)");
  auto* rd = app.add_subcommand("readout", "Simulate the Raman-pulse read-out and its fidelity");
  add_common(rd);
  rd->add_flag("--timeseries", opt.timeseries, "Also write the resonant Rabi time series as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (zero->parsed()) return cmd_zero_mode(opt);
    if (scan->parsed()) return cmd_phase_scan(opt);
    if (braid->parsed()) return cmd_braid(opt);
    if (rd->parsed()) return cmd_readout(opt);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mzm::config::MissingConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mzm::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitData;
  } catch (const mzm::bdg::PhaseError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
