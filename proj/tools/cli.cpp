#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "magicfreq/absorption.hpp"
#include "magicfreq/atomdata.hpp"
#include "magicfreq/json_io.hpp"
#include "magicfreq/magic.hpp"
#include "magicfreq/moments.hpp"

namespace magicfreq::cli {

namespace {

using nlohmann::json;

constexpr int kDigits = 12;
constexpr double kMHz = 1e6;

/// A configuration problem the user can fix; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical failure such as a lost bracket; maps to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string species = "rb87_d2";
  std::string f_text = "2";
  double temp_k = 295.0;
  std::string broadening = "doppler";
  double gamma_mhz = 0.0;
  double shift_mhz = 0.0;
  std::string scan_mhz = "-600:600";
  std::string theta_text = "0";
  std::string phi_text = "0";
  double grid_mhz = 1.0;
  int theta_steps = 64;
  std::string out_path;
  std::string format;
  std::string input_path;
};

struct Resolved {
  SpeciesLine line;
  HalfInt f;
  BroadeningModel broadening;
  FrequencyRange scan;
  Geometry geometry;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kDigits, v);
  return buf;
}

json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v, kDigits);
}

FrequencyRange parse_scan(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--scan-mhz: expected lo:hi, got '" + text + "'");
  double lo = 0, hi = 0;
  try {
    std::size_t used = 0;
    lo = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("trailing");
    const std::string rest = text.substr(colon + 1);
    hi = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing");
  } catch (const std::logic_error&) {
    throw ConfigError("--scan-mhz: expected lo:hi in MHz, got '" + text + "'");
  }
  if (!(lo < hi)) throw ConfigError("--scan-mhz: lo must be below hi");
  return {lo * kMHz, hi * kMHz};
}

Resolved resolve(const RunConfig& c) {
  Resolved r;
  try {
    r.line = resolve_species(c.species);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--species: ") + e.what());
  }
  try {
    r.f = HalfInt::parse(c.f_text);
    (void)transitions_from(r.line, r.f);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--f: ") + e.what());
  }
  try {
    if (c.broadening == "doppler") {
      if (c.gamma_mhz != 0.0 || c.shift_mhz != 0.0)
        throw std::invalid_argument("--gamma-mhz/--shift-mhz need --broadening voigt");
      r.broadening = BroadeningModel::doppler(c.temp_k);
    } else if (c.broadening == "voigt") {
      r.broadening = BroadeningModel::voigt(c.temp_k, c.gamma_mhz * kMHz, c.shift_mhz * kMHz);
    } else {
      throw std::invalid_argument("--broadening must be doppler or voigt");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("broadening: ") + e.what());
  }
  r.scan = parse_scan(c.scan_mhz);
  if (!(c.grid_mhz > 0)) throw ConfigError("--grid-mhz must be positive");
  try {
    r.geometry = {parse_angle(c.theta_text), parse_angle(c.phi_text)};
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return r;
}

json config_json(const RunConfig& c, const Resolved* r) {
  json j;
  j["command"] = c.command;
  if (r) {
    j["species"] = c.species;
    j["F"] = r->f.to_string();
    j["temp_k"] = jnum(c.temp_k);
    j["broadening"] = c.broadening;
    if (c.broadening == "voigt") {
      j["gamma_mhz"] = jnum(c.gamma_mhz);
      j["shift_mhz"] = jnum(c.shift_mhz);
    }
    j["scan_mhz"] = {jnum(r->scan.lo_hz / kMHz), jnum(r->scan.hi_hz / kMHz)};
    j["grid_mhz"] = jnum(c.grid_mhz);
    j["theta"] = jnum(r->geometry.theta);
    j["phi"] = jnum(r->geometry.phi);
    if (c.command == "surface") j["theta_steps"] = c.theta_steps;
  } else {
    j["input"] = c.input_path;
  }
  return j;
}

std::string provenance(const SpeciesLine& line) {
  return line.label() + (line.source.empty() ? "" : " (" + line.source + ")");
}

std::string header_comment(const RunConfig& c, const Resolved& r) {
  return "# magicfreq " + c.command + " config=" + config_json(c, &r).dump() + " dataset=" + provenance(r.line) +
         "\n";
}

std::string sublevel_label(HalfInt m) { return "m=" + m.to_string(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read input file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string cmd_sweep(const RunConfig& c) {
  const Resolved r = resolve(c);
  const AbsorptionModel model(r.line, r.f, r.broadening);
  const auto grid = uniform_grid(r.scan.lo_hz, r.scan.hi_hz, c.grid_mhz * kMHz);
  const auto profile = model.profile(grid, r.geometry);
  std::vector<double> s_f(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) s_f[k] = model.s_f(grid[k]);

  std::ostringstream out;
  if (c.format == "json") {
    json j;
    j["config"] = config_json(c, &r);
    j["dataset"] = provenance(r.line);
    json d = json::array();
    for (double x : grid) d.push_back(jnum(x / kMHz));
    j["delta_l_mhz"] = std::move(d);
    json rates = json::object();
    for (std::size_t i = 0; i < model.sublevels().size(); ++i) {
      json col = json::array();
      for (double v : profile.rates[i]) col.push_back(jnum(v));
      rates[sublevel_label(model.sublevels()[i])] = std::move(col);
    }
    j["gamma_rel"] = std::move(rates);
    json sf = json::array();
    for (double v : s_f) sf.push_back(jnum(v));
    j["s_f"] = std::move(sf);
    out << j.dump(2) << "\n";
    return out.str();
  }

  out << header_comment(c, r);
  out << "delta_l_mhz";
  for (HalfInt m : model.sublevels()) out << "," << sublevel_label(m);
  out << ",s_f\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out << num(grid[k] / kMHz);
    for (std::size_t i = 0; i < model.sublevels().size(); ++i) out << "," << num(profile.rates[i][k]);
    out << "," << num(s_f[k]) << "\n";
  }
  return out.str();
}

std::string cmd_surface(const RunConfig& c) {
  const Resolved r = resolve(c);
  if (c.theta_steps < 1) throw ConfigError("--theta-steps must be at least 1");
  const AbsorptionModel model(r.line, r.f, r.broadening);
  const auto grid = uniform_grid(r.scan.lo_hz, r.scan.hi_hz, c.grid_mhz * kMHz);
  std::vector<double> theta(static_cast<std::size_t>(c.theta_steps));
  for (int i = 0; i < c.theta_steps; ++i)
    theta[static_cast<std::size_t>(i)] = c.theta_steps == 1 ? 0.0 : i * std::numbers::pi / (c.theta_steps - 1);
  const double norm = model.s_f_max(r.scan);
  const auto surface = model.surface(theta, grid, r.geometry.phi, norm);
  std::vector<double> s_f(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) s_f[k] = model.s_f(grid[k]);

  std::ostringstream out;
  if (c.format == "json") {
    json j;
    j["config"] = config_json(c, &r);
    j["dataset"] = provenance(r.line);
    j["s_f_max"] = jnum(norm);
    json th = json::array(), d = json::array(), sf = json::array(), values = json::array();
    for (double t : theta) th.push_back(jnum(t));
    for (double x : grid) d.push_back(jnum(x / kMHz));
    for (double v : s_f) sf.push_back(jnum(v));
    for (const auto& row : surface.values) {
      json jr = json::array();
      for (double v : row) jr.push_back(jnum(v));
      values.push_back(std::move(jr));
    }
    j["theta"] = std::move(th);
    j["delta_l_mhz"] = std::move(d);
    j["s_f"] = std::move(sf);
    j["delta_gamma"] = std::move(values);
    out << j.dump(2) << "\n";
    return out.str();
  }

  out << header_comment(c, r);
  out << "# s_f_max=" << num(norm) << "\n";
  out << "theta,delta_l_mhz,delta_gamma,s_f\n";
  for (std::size_t i = 0; i < theta.size(); ++i)
    for (std::size_t k = 0; k < grid.size(); ++k)
      out << num(theta[i]) << "," << num(grid[k] / kMHz) << "," << num(surface.values[i][k]) << "," << num(s_f[k])
          << "\n";
  return out.str();
}

std::string cmd_magic(const RunConfig& c, bool& numerical_failure) {
  const Resolved r = resolve(c);
  MagicSearchOptions options;
  options.grid_step_hz = c.grid_mhz * kMHz;
  const auto results = find_magic_frequencies(r.line, r.f, r.broadening, r.scan, options);

  json list = json::array();
  for (const auto& m : results) {
    json e;
    e["delta_l_magic_mhz"] = jnum(m.detuning_hz / kMHz);
    e["s_f"] = jnum(m.s_f);
    e["window_halfwidth_mhz"] = jnum(m.window_halfwidth_hz / kMHz);
    e["temp_sensitivity_khz_per_k"] = jnum(m.temp_sensitivity_hz_per_k / 1e3);
    e["bracket"] = {jnum(m.bracket_hz.first / kMHz), jnum(m.bracket_hz.second / kMHz)};
    if (!m.diagnostic.empty()) e["diagnostic"] = m.diagnostic;
    if (!std::isfinite(m.temp_sensitivity_hz_per_k)) numerical_failure = true;
    list.push_back(std::move(e));
  }

  std::ostringstream out;
  if (c.format == "csv") {
    out << header_comment(c, r);
    out << "delta_l_magic_mhz,s_f,window_halfwidth_mhz,temp_sensitivity_khz_per_k,bracket_lo_mhz,bracket_hi_mhz\n";
    for (const auto& m : results)
      out << num(m.detuning_hz / kMHz) << "," << num(m.s_f) << "," << num(m.window_halfwidth_hz / kMHz) << ","
          << num(m.temp_sensitivity_hz_per_k / 1e3) << "," << num(m.bracket_hz.first / kMHz) << ","
          << num(m.bracket_hz.second / kMHz) << "\n";
    return out.str();
  }
  json j;
  j["config"] = config_json(c, &r);
  j["dataset"] = provenance(r.line);
  j["magic_frequencies"] = std::move(list);
  out << j.dump(2) << "\n";
  return out.str();
}

std::string cmd_moments(const RunConfig& c, std::ostream& err) {
  if (c.input_path.empty()) throw ConfigError("--in: density-matrix JSON file required");
  DensityMatrix rho(0);
  try {
    rho = density_from_json(read_file(c.input_path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--in: ") + e.what());
  }
  if (!rho.is_hermitian()) err << "warning: input density matrix is not Hermitian\n";
  const MomentSet set{rho.f(), density_to_moments(rho)};
  if (c.format == "csv") {
    std::ostringstream out;
    out << "# magicfreq moments config=" << config_json(c, nullptr).dump() << " F=" << rho.f().to_string() << "\n";
    out << "rank,q,re,im\n";
    for (const auto& pm : set.moments)
      for (int q = -pm.rank; q <= pm.rank; ++q)
        out << pm.rank << "," << q << "," << num(pm.at(q).real()) << "," << num(pm.at(q).imag()) << "\n";
    return out.str();
  }
  return moments_to_json(set, kDigits);
}

std::string cmd_to_density(const RunConfig& c, std::ostream& err) {
  if (c.input_path.empty()) throw ConfigError("--in: moments JSON file required");
  DensityMatrix rho(0);
  try {
    const MomentSet set = moments_from_json(read_file(c.input_path));
    rho = moments_to_density(set.moments, set.f);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--in: ") + e.what());
  }
  if (!rho.is_hermitian())
    err << "warning: moments do not satisfy rho(k)_-q = (-1)^q conj(rho(k)_q); result is not Hermitian (defect "
        << num(rho.hermiticity_defect()) << ")\n";
  return density_to_json(rho, kDigits);
}

void add_physics_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--species", c.species, "Bundled dataset (rb87_d1, rb87_d2, rb85_d2, cs_d2, na_d2) or species file")
      ->capture_default_str();
  sub->add_option("--f", c.f_text, "Ground hyperfine level F, e.g. 2 or 3/2")->capture_default_str();
  sub->add_option("--temp-k", c.temp_k, "Vapor temperature, K")->capture_default_str();
  sub->add_option("--broadening", c.broadening, "doppler | voigt")->capture_default_str();
  sub->add_option("--gamma-mhz", c.gamma_mhz, "Lorentzian HWHM for voigt, MHz")->capture_default_str();
  sub->add_option("--shift-mhz", c.shift_mhz, "Pressure shift of all transitions for voigt, MHz")
      ->capture_default_str();
  sub->add_option("--scan-mhz", c.scan_mhz, "Detuning range lo:hi, MHz (zero: lowest excited level)")
      ->capture_default_str();
  sub->add_option("--theta", c.theta_text, "Angle between B and k, rad (accepts pi/2 etc.)")->capture_default_str();
  sub->add_option("--phi", c.phi_text, "Angle between E and the B-k plane, rad")->capture_default_str();
  sub->add_option("--grid-mhz", c.grid_mhz, "Detuning grid step, MHz")->capture_default_str();
  sub->add_option("--out", c.out_path, "Output file (default: stdout)");
}

}  // namespace

double parse_angle(const std::string& text) {
  const auto pos = text.find("pi");
  std::size_t used = 0;
  if (pos == std::string::npos) {
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("not an angle: '" + text + "'");
    }
    if (used != text.size()) throw std::invalid_argument("not an angle: '" + text + "'");
    return v;
  }
  // [sign][k*]pi[/n]
  double factor = 1.0;
  std::string head = text.substr(0, pos);
  if (!head.empty() && head.back() == '*') head.pop_back();
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty() && head != "+") {
    try {
      factor = std::stod(head, &used);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("not an angle: '" + text + "'");
    }
    if (used != head.size()) throw std::invalid_argument("not an angle: '" + text + "'");
  }
  double divisor = 1.0;
  const std::string tail = text.substr(pos + 2);
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("not an angle: '" + text + "'");
    try {
      divisor = std::stod(tail.substr(1), &used);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("not an angle: '" + text + "'");
    }
    if (used != tail.size() - 1 || divisor == 0.0) throw std::invalid_argument("not an angle: '" + text + "'");
  }
  return factor * std::numbers::pi / divisor;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"magicfreq: Zeeman-resolved absorption of linearly polarized light by alkali vapor"};
  app.require_subcommand(1);
  app.footer("Frequencies are in MHz on the command line. Exit codes: 0 ok, 2 configuration error, "
             "3 numerical failure. File formats: see FORMATS.md.");

  RunConfig c;
  auto* sweep = app.add_subcommand("sweep", "Gamma_rel per Zeeman sublevel and S_F over a detuning grid (CSV)");
  add_physics_options(sweep, c);
  sweep->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* surface = app.add_subcommand("surface", "Delta-Gamma_F over (theta, detuning), long-format CSV");
  add_physics_options(surface, c);
  surface->add_option("--theta-steps", c.theta_steps, "Number of theta samples over [0, pi]")->capture_default_str();
  surface->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* magic = app.add_subcommand("magic", "Magic frequencies with window and temperature sensitivity (JSON)");
  add_physics_options(magic, c);
  magic->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"csv", "json"}));

  auto* moments = app.add_subcommand("moments", "Polarization moments of a density matrix (JSON in, JSON out)");
  moments->add_option("--in", c.input_path, "Density-matrix JSON file")->required();
  moments->add_option("--out", c.out_path, "Output file (default: stdout)");
  moments->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"csv", "json"}));

  auto* to_density = app.add_subcommand("to-density", "Density matrix from a complete set of polarization moments");
  to_density->add_option("--in", c.input_path, "Moments JSON file")->required();
  to_density->add_option("--out", c.out_path, "Output file (default: stdout)");

  std::vector<std::string> argv_storage{"magicfreq"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "magicfreq: " << e.what() << "\n";
    return kConfigError;
  }

  bool numerical_failure = false;
  std::string text;
  try {
    if (sweep->parsed()) {
      c.command = "sweep";
      if (c.format.empty()) c.format = "csv";
      text = cmd_sweep(c);
    } else if (surface->parsed()) {
      c.command = "surface";
      if (c.format.empty()) c.format = "csv";
      text = cmd_surface(c);
    } else if (magic->parsed()) {
      c.command = "magic";
      if (c.format.empty()) c.format = "json";
      text = cmd_magic(c, numerical_failure);
    } else if (moments->parsed()) {
      c.command = "moments";
      if (c.format.empty()) c.format = "json";
      text = cmd_moments(c, err);
    } else if (to_density->parsed()) {
      c.command = "to-density";
      text = cmd_to_density(c, err);
    }
  } catch (const ConfigError& e) {
    err << "magicfreq: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "magicfreq: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "magicfreq: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }

  if (c.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(c.out_path, std::ios::binary);
    if (!file) {
      err << "magicfreq: cannot write '" << c.out_path << "'\n";
      return kConfigError;
    }
    file << text;
  }
  if (numerical_failure) {
    err << "magicfreq: at least one magic frequency could not be followed in temperature\n";
    return kNumericalFailure;
  }
  return kSuccess;
}

}  // namespace magicfreq::cli
