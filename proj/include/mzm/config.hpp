#pragma once

// Run configuration for the command-line tool.
//
// File grammar (INI style):
//   file     := { line "\n" }
//   line     := ws* ( section | entry | comment )?
//   section  := "[" name "]" ws* comment?
//   entry    := key ws* "=" ws* value          value ends at "#", ";" or end of line
//   comment  := ( "#" | ";" ) any*
// Keys are unique within a section; unknown sections and keys are rejected.
//
// Frequencies are angular. A plain number is taken as rad/s (or natural
// units); the form "2pi*<number><unit>" with unit Hz, kHz, MHz or GHz converts
// a cyclic frequency. A bare "<number><unit>" is rejected as ambiguous.
//
// Sections and keys
//   [physical]  mass, mu, delta0, p_fermi, xi
//   [pulse]     bandwidth | gap          (gap sets bandwidth = gap/2 and paired detuning 2*gap)
//               peak_rabi | peak_rabi_ratio
//               half_duration | duration_ratio
//               detuning                 (resonant pulse, default 0)
//               paired_detuning          (required unless gap is given)
//   [scatter]   gamma, delta
//   [braid]     n, script (path, relative to the config file), word (inline braid word)
//   [run]       output_dir, seed

#include "mzm/bdg_vortex.hpp"
#include "mzm/majorana_register.hpp"
#include "mzm/readout.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mzm::config {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The config file itself could not be opened.
class MissingConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Section = std::map<std::string, std::string>;
using IniDocument = std::map<std::string, Section>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

}  // namespace detail

inline IniDocument parse_ini(std::string_view text) {
  IniDocument doc;
  std::string current;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = detail::trim(line);
    if (!line.empty()) {
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
        const auto name = detail::trim(line.substr(1, line.size() - 2));
        if (!detail::valid_name(name)) throw ConfigError("invalid section name", line_no);
        current = std::string(name);
        if (doc.count(current)) throw ConfigError("duplicate section [" + current + "]", line_no);
        doc[current];
      } else {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
        if (current.empty()) throw ConfigError("entry outside of any section", line_no);
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (!detail::valid_name(key)) throw ConfigError("invalid key", line_no);
        if (value.empty()) throw ConfigError("empty value for '" + std::string(key) + "'", line_no);
        auto& sec = doc[current];
        if (!sec.emplace(std::string(key), std::string(value)).second)
          throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return doc;
}

inline double parse_number(std::string_view text, const std::string& what) {
  const std::string s(detail::trim(text));
  if (s.empty()) throw ConfigError(what + ": empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) throw ConfigError(what + ": not a finite number: '" + s + "'");
  return v;
}

/// Parses an angular frequency, e.g. "6.2832", "2pi*11kHz", "2pi * 1.2 MHz".
inline double parse_angular_frequency(std::string_view text, const std::string& what = "frequency") {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  std::string lower;
  for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  static const std::pair<const char*, double> units[] = {{"ghz", 1e9}, {"mhz", 1e6}, {"khz", 1e3}, {"hz", 1.0}};
  const bool two_pi = lower.rfind("2pi*", 0) == 0;
  std::string_view body(lower);
  if (two_pi) body.remove_prefix(4);
  double scale = 1.0;
  bool has_unit = false;
  for (const auto& [suffix, factor] : units) {
    const std::string_view sv(suffix);
    if (body.size() > sv.size() && body.substr(body.size() - sv.size()) == sv) {
      body.remove_suffix(sv.size());
      scale = factor;
      has_unit = true;
      break;
    }
  }
  if (has_unit && !two_pi)
    throw ConfigError(what + ": '" + std::string(text) + "' is a cyclic frequency; write it as 2pi*<value><unit>");
  const double v = parse_number(body, what);
  return two_pi ? 2.0 * std::numbers::pi * v * scale : v;
}

inline long long parse_integer(std::string_view text, const std::string& what) {
  const std::string s(detail::trim(text));
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) throw ConfigError(what + ": not an integer");
  return v;
}

struct BraidConfig {
  int n_pairs = 1;
  std::optional<std::filesystem::path> script_path;
  std::optional<std::string> word;
};

struct PulseConfig {
  readout::PulseParams resonant;
  double paired_detuning = 0.0;

  readout::PulseParams paired() const {
    auto p = resonant;
    p.detuning = paired_detuning;
    return p;
  }
};

struct RunConfig {
  std::optional<bdg::PhysicalParams> physical;
  std::optional<PulseConfig> pulse;
  std::optional<readout::ScatterParams> scatter;
  std::optional<BraidConfig> braid;
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 0;
};

namespace detail {

class SectionReader {
 public:
  SectionReader(const Section& s, std::string name) : s_(s), name_(std::move(name)) {}

  bool has(const std::string& key) const { return s_.count(key) != 0; }

  const std::string& raw(const std::string& key) {
    used_.insert(key);
    const auto it = s_.find(key);
    if (it == s_.end()) throw ConfigError("[" + name_ + "] missing required key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) { return parse_number(raw(key), name_ + "." + key); }
  double frequency(const std::string& key) { return parse_angular_frequency(raw(key), name_ + "." + key); }

  void finish() const {
    for (const auto& [k, v] : s_)
      if (!used_.count(k)) throw ConfigError("[" + name_ + "] unknown key '" + k + "'");
  }

 private:
  const Section& s_;
  std::string name_;
  std::set<std::string> used_;
};

}  // namespace detail

inline RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = ".") {
  const IniDocument doc = parse_ini(text);
  static const std::set<std::string> known{"physical", "pulse", "scatter", "braid", "run"};
  for (const auto& [name, sec] : doc)
    if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");

  RunConfig cfg;
  if (auto it = doc.find("physical"); it != doc.end()) {
    detail::SectionReader r(it->second, "physical");
    bdg::PhysicalParams p;
    p.mass = r.number("mass");
    p.mu = r.number("mu");
    p.delta0 = r.number("delta0");
    p.p_fermi = r.number("p_fermi");
    p.xi = r.number("xi");
    r.finish();
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    cfg.physical = p;
  }

  if (auto it = doc.find("pulse"); it != doc.end()) {
    detail::SectionReader r(it->second, "pulse");
    PulseConfig pc;
    auto& p = pc.resonant;
    std::optional<double> gap;
    if (r.has("gap") == r.has("bandwidth")) throw ConfigError("[pulse] give exactly one of 'gap' or 'bandwidth'");
    if (r.has("gap")) {
      gap = r.frequency("gap");
      p.bandwidth = 0.5 * *gap;
    } else {
      p.bandwidth = r.frequency("bandwidth");
    }
    if (r.has("peak_rabi") == r.has("peak_rabi_ratio"))
      throw ConfigError("[pulse] give exactly one of 'peak_rabi' or 'peak_rabi_ratio'");
    p.peak_rabi = r.has("peak_rabi") ? r.frequency("peak_rabi") : r.number("peak_rabi_ratio") * p.bandwidth;
    if (r.has("half_duration") == r.has("duration_ratio"))
      throw ConfigError("[pulse] give exactly one of 'half_duration' or 'duration_ratio'");
    p.half_duration = r.has("half_duration") ? r.number("half_duration") : r.number("duration_ratio") / p.bandwidth;
    p.detuning = r.has("detuning") ? r.frequency("detuning") : 0.0;
    if (r.has("paired_detuning"))
      pc.paired_detuning = r.frequency("paired_detuning");
    else if (gap)
      pc.paired_detuning = 2.0 * *gap;
    else
      throw ConfigError("[pulse] 'paired_detuning' is required when 'gap' is not given");
    r.finish();
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    cfg.pulse = pc;
  }

  if (auto it = doc.find("scatter"); it != doc.end()) {
    detail::SectionReader r(it->second, "scatter");
    readout::ScatterParams s;
    s.gamma = r.frequency("gamma");
    s.delta_eff = r.frequency("delta");
    r.finish();
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    cfg.scatter = s;
  }

  if (auto it = doc.find("braid"); it != doc.end()) {
    detail::SectionReader r(it->second, "braid");
    BraidConfig b;
    const auto n = parse_integer(r.raw("n"), "braid.n");
    if (n < 1 || n > braid::kMaxPairs) throw ConfigError("[braid] n must be in [1, 12]");
    b.n_pairs = static_cast<int>(n);
    if (r.has("script") && r.has("word")) throw ConfigError("[braid] give at most one of 'script' or 'word'");
    if (r.has("script")) {
      std::filesystem::path path(r.raw("script"));
      b.script_path = path.is_absolute() ? path : base_dir / path;
    }
    if (r.has("word")) b.word = r.raw("word");
    r.finish();
    cfg.braid = b;
  }

  if (auto it = doc.find("run"); it != doc.end()) {
    detail::SectionReader r(it->second, "run");
    if (r.has("output_dir")) {
      std::filesystem::path path(r.raw("output_dir"));
      cfg.output_dir = path.is_absolute() ? path : base_dir / path;
    }
    if (r.has("seed")) {
      const auto s = parse_integer(r.raw("seed"), "run.seed");
      if (s < 0) throw ConfigError("[run] seed must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    }
    r.finish();
  }
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace mzm::config
