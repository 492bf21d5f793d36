#ifndef MWINDEX_TOOLS_RUN_CONFIG_HPP
#define MWINDEX_TOOLS_RUN_CONFIG_HPP

// INI-style run configuration for the mwindex CLI. Every dimensional
// quantity carries an explicit unit tag (si | au | amu | K | mTorr);
// bare numbers are SI.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mwindex/mwindex.hpp"

namespace mwindex::cli {

struct ConfigFile {
  // section -> key -> raw value string
  std::map<std::string, std::map<std::string, std::string>> data;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = data.find(sec);
    return s != data.end() && s->second.count(key) > 0;
  }
  bool has_section(const std::string& sec) const {
    return data.count(sec) > 0;
  }
  std::string raw(const std::string& sec, const std::string& key) const {
    auto s = data.find(sec);
    if (s == data.end() || !s->second.count(key))
      throw ConfigError("missing config key [" + sec + "] " + key);
    return s->second.at(key);
  }
};

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return s.substr(a, b - a);
}

inline ConfigFile parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file: " + path);
  ConfigFile cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("bad section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      cfg.data[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw ConfigError("expected 'key = value' at line " +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("empty key or value at line " +
                        std::to_string(lineno));
    cfg.data[section][key] = val;
  }
  return cfg;
}

struct TaggedValue {
  double value = 0.0;
  std::string unit; // empty = SI
};

inline TaggedValue parse_tagged(const std::string& raw, const char* what) {
  std::istringstream ss(raw);
  TaggedValue tv;
  if (!(ss >> tv.value))
    throw ConfigError(std::string("cannot parse number for ") + what + ": '" +
                      raw + "'");
  ss >> tv.unit;
  std::string extra;
  if (ss >> extra)
    throw ConfigError(std::string("trailing tokens for ") + what + ": '" +
                      raw + "'");
  return tv;
}

inline double parse_mass(const ConfigFile& c, const std::string& sec) {
  const auto tv = parse_tagged(c.raw(sec, "mass"), "mass");
  if (tv.unit == "amu")
    return tv.value * constants::amu;
  if (tv.unit.empty() || tv.unit == "si" || tv.unit == "kg")
    return tv.value;
  throw ConfigError("unknown mass unit '" + tv.unit + "' in [" + sec + "]");
}

inline double parse_length(const TaggedValue& tv, const char* what) {
  if (tv.unit.empty() || tv.unit == "si" || tv.unit == "m")
    return tv.value;
  if (tv.unit == "au" || tv.unit == "a0")
    return length_au_to_si(tv.value);
  throw ConfigError(std::string("unknown length unit '") + tv.unit +
                    "' for " + what);
}

inline double parse_energy(const TaggedValue& tv, const char* what) {
  if (tv.unit.empty() || tv.unit == "si" || tv.unit == "J")
    return tv.value;
  if (tv.unit == "au")
    return energy_au_to_si(tv.value);
  if (tv.unit == "K")
    return tv.value * constants::boltzmann;
  throw ConfigError(std::string("unknown energy unit '") + tv.unit +
                    "' for " + what);
}

inline PotentialModel parse_potential(const ConfigFile& c) {
  const std::string model = c.raw("potential", "model");
  auto tagged = [&](const char* key) {
    return parse_tagged(c.raw("potential", key), key);
  };
  if (model == "pure_c6") {
    const auto tv = tagged("c6");
    const double c6 = tv.unit == "au" ? c6_au_to_si(tv.value) : tv.value;
    return PureC6{c6};
  }
  if (model == "lennard_jones") {
    const auto t6 = tagged("c6");
    const double c6 = t6.unit == "au" ? c6_au_to_si(t6.value) : t6.value;
    const auto t12 = tagged("c12");
    const double c12 = t12.unit == "au" ? c12_au_to_si(t12.value) : t12.value;
    return LennardJones{c12, c6};
  }
  if (model == "hard_sphere")
    return HardSphere{parse_length(tagged("radius"), "radius")};
  if (model == "square_well")
    return SquareWell{parse_energy(tagged("depth"), "depth"),
                      parse_length(tagged("radius"), "radius")};
  if (model == "scattering_length")
    return ScatteringLength{parse_length(tagged("a"), "a")};
  throw ConfigError("unknown potential model '" + model + "'");
}

struct BeamSpec {
  std::vector<double> velocities; // m/s
  bool is_scan = false;
};

inline BeamSpec parse_beam(const ConfigFile& c) {
  BeamSpec beam;
  if (c.has("beam", "v_p")) {
    beam.velocities.push_back(parse_tagged(c.raw("beam", "v_p"), "v_p").value);
    return beam;
  }
  if (!c.has("beam", "scan_min"))
    throw ConfigError("[beam] needs either v_p or scan_min/scan_max");
  beam.is_scan = true;
  const double lo = parse_tagged(c.raw("beam", "scan_min"), "scan_min").value;
  const double hi = parse_tagged(c.raw("beam", "scan_max"), "scan_max").value;
  const long n =
      static_cast<long>(parse_tagged(c.raw("beam", "scan_points"),
                                     "scan_points").value);
  std::string spacing =
      c.has("beam", "scan_spacing") ? c.raw("beam", "scan_spacing") : "linear";
  if (!(lo < hi))
    throw ConfigError("[beam] scan_min must be below scan_max");
  if (n < 2)
    throw ConfigError("[beam] scan_points must be at least 2");
  if (!(lo > 0.0))
    throw ConfigError("[beam] scan velocities must be positive");
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    if (spacing == "log")
      beam.velocities.push_back(lo * std::pow(hi / lo, t));
    else if (spacing == "linear")
      beam.velocities.push_back(lo + (hi - lo) * t);
    else
      throw ConfigError("[beam] scan_spacing must be linear or log");
  }
  return beam;
}

struct RunConfig {
  CollisionSystem system;
  GasSample sample;
  BeamSpec beam;
  std::vector<IndexFormula> formulas;
  bool neutron_imag = false;
  std::optional<double> slab_length; // m
  std::optional<McConfig> mc;
  std::string output_path = "-"; // "-" = stdout
  std::string output_format = "csv";
  PhaseShiftOptions phase;
  // estimate inputs
  std::optional<double> estimate_alpha_au;
  std::optional<double> estimate_c6_au;
};

inline IndexFormula parse_formula_name(const std::string& name) {
  if (name == "fixed_centers")
    return IndexFormula::fixed_centers;
  if (name == "forrey")
    return IndexFormula::forrey;
  if (name == "fizeau_legacy")
    return IndexFormula::fizeau_legacy;
  if (name == "corrected")
    return IndexFormula::corrected;
  if (name == "neutron")
    return IndexFormula::neutron_swave;
  throw ConfigError("unknown formula '" + name + "'");
}

inline RunConfig build_run_config(const ConfigFile& c) {
  RunConfig rc;
  rc.system =
      CollisionSystem(ParticleSpecies(c.has("projectile", "label")
                                          ? c.raw("projectile", "label")
                                          : "projectile",
                                      parse_mass(c, "projectile")),
                      ParticleSpecies(c.has("target", "label")
                                          ? c.raw("target", "label")
                                          : "target",
                                      parse_mass(c, "target")));

  rc.sample.species = rc.system.target;
  rc.sample.potential = parse_potential(c);

  // Gas density: direct or via pressure + temperature.
  double temperature = 0.0;
  if (c.has("gas", "temperature")) {
    const auto tv = parse_tagged(c.raw("gas", "temperature"), "temperature");
    if (!tv.unit.empty() && tv.unit != "K")
      throw ConfigError("temperature must be in K");
    temperature = tv.value;
  }
  if (c.has("gas", "density")) {
    const auto tv = parse_tagged(c.raw("gas", "density"), "density");
    if (!tv.unit.empty() && tv.unit != "si")
      throw ConfigError("density must be in 1/m^3 (si)");
    rc.sample.density = tv.value;
  } else if (c.has("gas", "pressure")) {
    const auto tv = parse_tagged(c.raw("gas", "pressure"), "pressure");
    if (tv.unit != "mTorr")
      throw ConfigError("pressure must carry the mTorr tag");
    if (temperature <= 0.0)
      throw ConfigError("pressure-based density needs [gas] temperature");
    rc.sample.density =
        density_from_pressure(mtorr_to_pascal(tv.value), temperature);
  } else {
    throw ConfigError("[gas] needs density or pressure");
  }

  const std::string dist = c.has("gas", "distribution")
                               ? c.raw("gas", "distribution")
                               : "maxwell_boltzmann";
  if (dist == "maxwell_boltzmann") {
    if (temperature <= 0.0)
      throw ConfigError("maxwell_boltzmann distribution needs a temperature");
    rc.sample.distribution =
        MaxwellBoltzmann(temperature, rc.system.target.mass);
  } else if (dist == "delta_rest") {
    rc.sample.distribution = DeltaRest{};
  } else if (dist == "drifting_mb") {
    if (temperature <= 0.0)
      throw ConfigError("drifting_mb distribution needs a temperature");
    std::istringstream ss(c.raw("gas", "drift"));
    std::array<double, 3> d{};
    if (!(ss >> d[0] >> d[1] >> d[2]))
      throw ConfigError("drift must be three numbers (m/s)");
    rc.sample.distribution =
        DriftingMB(temperature, rc.system.target.mass, d);
  } else {
    throw ConfigError("unknown distribution '" + dist + "'");
  }

  rc.beam = parse_beam(c);

  if (!c.has("formulas", "list"))
    throw ConfigError("[formulas] list is required");
  std::istringstream fss(c.raw("formulas", "list"));
  std::string tok;
  while (std::getline(fss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty())
      rc.formulas.push_back(parse_formula_name(tok));
  }
  if (rc.formulas.empty())
    throw ConfigError("at least one formula must be selected");
  for (IndexFormula f : rc.formulas) {
    if (f == IndexFormula::neutron_swave &&
        !std::holds_alternative<ScatteringLength>(rc.sample.potential))
      throw ConfigError(
          "the neutron formula needs a scattering_length potential");
  }
  if (c.has("formulas", "neutron_imag"))
    rc.neutron_imag = c.raw("formulas", "neutron_imag") == "true";

  if (c.has("slab", "length"))
    rc.slab_length = parse_tagged(c.raw("slab", "length"), "length").value;

  if (c.has_section("mc")) {
    McConfig mc;
    if (c.has("mc", "seed"))
      mc.seed = static_cast<std::uint64_t>(
          std::stoull(c.raw("mc", "seed")));
    if (c.has("mc", "samples"))
      mc.n_samples = std::stol(c.raw("mc", "samples"));
    if (mc.n_samples <= 0)
      throw ConfigError("[mc] samples must be positive");
    mc.distribution = rc.sample.distribution;
    rc.mc = mc;
  }

  if (c.has("output", "path"))
    rc.output_path = c.raw("output", "path");
  if (c.has("output", "format")) {
    rc.output_format = c.raw("output", "format");
    if (rc.output_format != "csv" && rc.output_format != "json")
      throw ConfigError("output format must be csv or json");
  }

  if (c.has("solver", "phase_tol"))
    rc.phase.phase_tol =
        parse_tagged(c.raw("solver", "phase_tol"), "phase_tol").value;

  if (c.has("estimate", "alpha_au"))
    rc.estimate_alpha_au =
        parse_tagged(c.raw("estimate", "alpha_au"), "alpha_au").value;
  if (c.has("estimate", "c6_au"))
    rc.estimate_c6_au =
        parse_tagged(c.raw("estimate", "c6_au"), "c6_au").value;

  validate(rc.sample);
  return rc;
}

} // namespace mwindex::cli

#endif
