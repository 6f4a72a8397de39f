#include "qft1d/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include "json.hpp"

#include "qft1d/error.hpp"
#include "qft1d/propagation.hpp"

namespace qft1d {

namespace pt = boost::property_tree;

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::free_dirac: return "free_dirac";
    case ScenarioKind::free_kg: return "free_kg";
    case ScenarioKind::vacuum_step: return "vacuum_step";
    case ScenarioKind::klein_step: return "klein_step";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  for (auto k : {ScenarioKind::free_dirac, ScenarioKind::free_kg,
                 ScenarioKind::vacuum_step, ScenarioKind::klein_step}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

bool needs_potential(ScenarioKind kind) {
  return kind == ScenarioKind::vacuum_step || kind == ScenarioKind::klein_step;
}

namespace {

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), r.ptr};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run",
       {"scenario", "field", "units", "times", "dt", "output_dir", "densities",
        "guard_fraction", "guard_threshold"}},
      {"grid", {"n_points", "box_length"}},
      {"packet", {"vacuum", "x0", "width", "p0", "row"}},
      {"potential", {"V0", "d", "alpha"}},
  };
  return keys;
}

pt::ptree read_document(const std::string& text, std::vector<std::string>& errors) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    errors.push_back("malformed document: " + std::string(e.what()));
    return {};
  }
  for (const auto& [section, body] : tree) {
    const auto it = allowed_keys().find(section);
    if (it == allowed_keys().end()) {
      if (body.empty()) {
        errors.push_back("key '" + section + "' outside any section");
      } else {
        errors.push_back("unknown section [" + section + "]");
      }
      continue;
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) {
        errors.push_back("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
  return tree;
}

// Reads typed values from the merged tree, collecting every failure.
class Reader {
 public:
  Reader(const pt::ptree& tree, std::vector<std::string>& errors)
      : tree_(tree), errors_(errors) {}

  bool has(const std::string& section, const std::string& key) const {
    return raw(section, key).has_value();
  }
  bool has_section(const std::string& section) const {
    return tree_.get_child_optional(section).has_value();
  }

  std::optional<std::string> raw(const std::string& section,
                                 const std::string& key) const {
    const auto child = tree_.get_child_optional(section);
    if (!child) return std::nullopt;
    const auto v = child->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    const auto s = raw(section, key);
    if (!s) return std::nullopt;
    const auto v = parse_double(*s);
    if (!v) bad(section, key, *s, "a number");
    return v;
  }

  double number_or(const std::string& section, const std::string& key, double dflt) {
    return number(section, key).value_or(dflt);
  }

  std::optional<std::size_t> count(const std::string& section, const std::string& key) {
    const auto s = raw(section, key);
    if (!s) return std::nullopt;
    std::size_t v = 0;
    const auto r = std::from_chars(s->data(), s->data() + s->size(), v);
    if (r.ec != std::errc() || r.ptr != s->data() + s->size()) {
      bad(section, key, *s, "a non-negative integer");
      return std::nullopt;
    }
    return v;
  }

  std::optional<bool> flag(const std::string& section, const std::string& key) {
    const auto s = raw(section, key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "0" || *s == "no") return false;
    bad(section, key, *s, "a boolean");
    return std::nullopt;
  }

  std::vector<double> numbers(const std::string& section, const std::string& key) {
    std::vector<double> out;
    const auto s = raw(section, key);
    if (!s) return out;
    for (const auto& item : split_list(*s)) {
      const auto v = parse_double(item);
      if (!v) {
        bad(section, key, item, "a number");
      } else {
        out.push_back(*v);
      }
    }
    return out;
  }

  static std::optional<double> parse_double(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
      return std::nullopt;
    }
    return v;
  }

 private:
  void bad(const std::string& section, const std::string& key,
           const std::string& value, const std::string& what) {
    errors_.push_back("[" + section + "] " + key + " = '" + value + "' is not " + what);
  }

  const pt::ptree& tree_;
  std::vector<std::string>& errors_;
};

std::vector<DensityTag> default_densities(ScenarioKind kind) {
  using T = DensityTag;
  switch (kind) {
    case ScenarioKind::free_dirac:
    case ScenarioKind::free_kg:
      return {T::rho_pa, T::rho_an, T::rho_ch, T::rho_blind, T::rho_cross,
              T::first_quantized};
    case ScenarioKind::vacuum_step:
      return {T::rho_pa, T::rho_an, T::rho_ch, T::rho_blind, T::rho_cross};
    case ScenarioKind::klein_step:
      return {T::rho_pa,         T::rho_an,      T::rho_ch,
              T::rho_blind,      T::rho_cross,   T::rho_blind_free,
              T::rho_pa_free,    T::rho_an_free, T::first_quantized};
  }
  return {};
}

struct PresetSpec {
  std::string document;
  std::vector<std::string> notes;
};

PresetSpec preset_spec(const std::string& name) {
  const double c_atomic = UnitSystem::atomic().c;
  if (name == "paper-fig1") {
    return {"[run]\n"
            "scenario = free_dirac\n"
            "units = atomic\n"
            "times = 0, 0.001\n"
            "[grid]\n"
            "n_points = 2048\n"
            "box_length = 1.2\n"
            "[packet]\n"
            "x0 = 0\n"
            "width = " + shortest(2.0 / c_atomic) + "\n"
            "p0 = 100\n",
            {}};
  }
  if (name == "paper-fig2") {
    const double alt = 8e-4 * c_atomic * c_atomic;
    return {"[run]\n"
            "scenario = free_kg\n"
            "units = compton\n"
            "times = 0, 0.0008\n"
            "[grid]\n"
            "n_points = 4096\n"
            "box_length = 64\n"
            "[packet]\n"
            "x0 = 0\n"
            "width = 2\n"
            "p0 = 100\n",
            {"evolution time 8e-4 read in lambda/c units (default); the "
             "alternative reading 8e-4 atomic time units equals " +
             shortest(alt) + " lambda/c and is not run by this preset"}};
  }
  if (name == "paper-fig3") {
    return {"[run]\n"
            "scenario = vacuum_step\n"
            "field = dirac\n"
            "units = compton\n"
            "times = 0, 0.5, 1, 1.5, 2\n"
            "[grid]\n"
            "n_points = 1024\n"
            "box_length = 64\n"
            "[packet]\n"
            "vacuum = true\n"
            "[potential]\n"
            "V0 = 9\n"
            "d = -10\n"
            "alpha = 0.3\n",
            {"step smoothness alpha taken as the length 0.3 lambda",
             "the periodic box closes the step with a second drop of height "
             "V0 at the box edge; vacuum pair densities are not guard-checked"}};
  }
  if (name == "paper-fig4") {
    return {"[run]\n"
            "scenario = klein_step\n"
            "field = dirac\n"
            "units = compton\n"
            "times = 0, 5, 10\n"
            "[grid]\n"
            "n_points = 1024\n"
            "box_length = 128\n"
            "[packet]\n"
            "x0 = -14\n"
            "width = 1\n"
            "p0 = 3\n"
            "[potential]\n"
            "V0 = 9\n"
            "d = -10\n"
            "alpha = 0.3\n",
            {"step smoothness alpha taken as the length 0.3 lambda",
             "packet x0, width and p0 are calibration choices",
             "the periodic box closes the step with a second drop of height "
             "V0 at the box edge; only packet densities are guard-checked"}};
  }
  throw ConfigError("unknown preset '" + name + "' (expected one of " +
                    join(preset_names(), ", ") + ")");
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-fig1", "paper-fig2", "paper-fig3", "paper-fig4"};
}

std::string preset_document(const std::string& name) {
  return preset_spec(name).document;
}

ScenarioConfig parse_config(const std::string& text, const std::string& preset) {
  std::vector<std::string> errors;
  pt::ptree tree;
  std::vector<std::string> notes;
  if (!preset.empty()) {
    const auto spec = preset_spec(preset);
    tree = read_document(spec.document, errors);
    notes = spec.notes;
  }
  const pt::ptree user = read_document(text, errors);
  for (const auto& [section, body] : user) {
    for (const auto& [key, value] : body) {
      tree.put(pt::ptree::path_type(section + '\0' + key, '\0'), value.data());
    }
  }

  Reader in(tree, errors);
  ScenarioConfig cfg;
  cfg.preset = preset;
  cfg.notes = notes;

  const auto scenario = in.raw("run", "scenario");
  if (!scenario) {
    errors.push_back("[run] scenario is required");
  } else {
    try {
      cfg.scenario = scenario_kind_from_string(*scenario);
    } catch (const ConfigError& e) {
      errors.push_back(e.what());
    }
  }

  const bool free_kg = cfg.scenario == ScenarioKind::free_kg;
  cfg.field = free_kg ? FieldKind::klein_gordon : FieldKind::dirac;
  if (const auto f = in.raw("run", "field")) {
    try {
      const auto kind = field_kind_from_string(*f);
      if ((cfg.scenario == ScenarioKind::free_dirac && kind != FieldKind::dirac) ||
          (free_kg && kind != FieldKind::klein_gordon)) {
        errors.push_back("field '" + *f + "' contradicts scenario " +
                         to_string(cfg.scenario));
      }
      cfg.field = kind;
    } catch (const ConfigError& e) {
      errors.push_back(e.what());
    }
  }

  if (const auto u = in.raw("run", "units")) {
    if (*u == "atomic") {
      cfg.units = UnitSystem::atomic();
    } else if (*u == "compton") {
      cfg.units = UnitSystem::compton();
    } else {
      errors.push_back("[run] units must be atomic or compton, got '" + *u + "'");
    }
  }

  cfg.times = in.numbers("run", "times");
  if (cfg.times.empty() && !in.has("run", "times")) {
    errors.push_back("[run] times is required");
  }
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    if (cfg.times[i] < 0.0) errors.push_back("times must be non-negative");
    if (i > 0 && !(cfg.times[i] > cfg.times[i - 1])) {
      errors.push_back("times must be strictly increasing");
    }
  }
  cfg.dt = in.number_or("run", "dt", 0.0);
  if (cfg.dt < 0.0) errors.push_back("[run] dt must be positive when given");
  if (const auto o = in.raw("run", "output_dir")) cfg.output_dir = *o;
  cfg.guard_fraction = in.number_or("run", "guard_fraction", cfg.guard_fraction);
  cfg.guard_threshold = in.number_or("run", "guard_threshold", cfg.guard_threshold);
  if (!(cfg.guard_fraction > 0.0 && cfg.guard_fraction < 0.5)) {
    errors.push_back("[run] guard_fraction must lie in (0, 0.5)");
  }
  if (!(cfg.guard_threshold >= 0.0)) {
    errors.push_back("[run] guard_threshold must be non-negative");
  }
  if (const auto d = in.raw("run", "densities")) {
    for (const auto& name : split_list(*d)) {
      try {
        cfg.densities.push_back(density_tag_from_string(name));
      } catch (const ConfigError& e) {
        errors.push_back(e.what());
      }
    }
  } else {
    cfg.densities = default_densities(cfg.scenario);
  }

  if (const auto n = in.count("grid", "n_points")) cfg.n_points = *n;
  cfg.box_length = in.number_or("grid", "box_length", cfg.box_length);
  try {
    make_grid(cfg.n_points, cfg.box_length, cfg.units);
  } catch (const ConfigError& e) {
    errors.push_back(e.what());
  }

  const bool vacuum = in.flag("packet", "vacuum").value_or(false);
  if (!vacuum && in.has_section("packet")) {
    PacketSpec p;
    p.x0 = in.number_or("packet", "x0", p.x0);
    p.width = in.number_or("packet", "width", p.width);
    p.p0 = in.number_or("packet", "p0", p.p0);
    if (const auto row = in.raw("packet", "row")) {
      if (*row == "upper") {
        p.charge_row = ChargeRow::upper;
      } else if (*row == "lower") {
        p.charge_row = ChargeRow::lower;
      } else {
        errors.push_back("[packet] row must be upper or lower");
      }
    }
    if (!(p.width > 0.0)) errors.push_back("[packet] width must be positive");
    const double half = 0.5 * cfg.box_length;
    if (p.width > 0.0 && (p.support_lo() <= -half || p.support_hi() >= half)) {
      errors.push_back("packet support lies outside the box");
    }
    cfg.packet = p;
  }

  if (in.has_section("potential")) {
    StepParameters s;
    const auto v0 = in.number("potential", "V0");
    const auto d = in.number("potential", "d");
    const auto a = in.number("potential", "alpha");
    if (!v0 || !d || !a) {
      errors.push_back("[potential] needs V0, d and alpha");
    } else {
      s.V0 = *v0;
      s.d = *d;
      s.alpha = *a;
      if (!(s.alpha > 0.0)) errors.push_back("[potential] alpha must be positive");
      if (std::abs(s.d) >= 0.5 * cfg.box_length) {
        errors.push_back("[potential] d lies outside the box");
      }
    }
    cfg.potential = s;
  }

  if (scenario) {
    if (needs_potential(cfg.scenario) && !cfg.potential) {
      errors.push_back("scenario " + to_string(cfg.scenario) +
                       " requires a [potential] section");
    }
    if (!needs_potential(cfg.scenario) && cfg.potential) {
      errors.push_back("scenario " + to_string(cfg.scenario) +
                       " does not allow a [potential] section");
    }
    if (cfg.scenario == ScenarioKind::klein_step && !cfg.packet) {
      errors.push_back("scenario klein_step requires a packet");
    }
    if (cfg.scenario == ScenarioKind::vacuum_step && cfg.packet) {
      errors.push_back("scenario vacuum_step requires [packet] vacuum = true");
    }
  }

  if (errors.empty()) {
    try {
      const double dt = resolved_time_step(cfg);
      for (double t : cfg.times) step_count(t, dt);
    } catch (const ConfigError& e) {
      errors.push_back(std::string(e.what()) + " (set [run] dt explicitly)");
    }
  }

  if (!errors.empty()) {
    throw ConfigError("invalid configuration:\n  - " + join(errors, "\n  - "));
  }
  return cfg;
}

ScenarioConfig load_preset(const std::string& name) {
  return parse_config("", name);
}

double resolved_time_step(const ScenarioConfig& cfg) {
  if (cfg.dt > 0.0) return cfg.dt;
  const auto grid = make_grid(cfg.n_points, cfg.box_length, cfg.units);
  const double v_max = cfg.potential ? std::abs(cfg.potential->V0) : 0.0;
  double t_ref = 0.0;
  for (double t : cfg.times) {
    if (t > 0.0) {
      t_ref = t;
      break;
    }
  }
  return default_time_step(*grid, v_max, t_ref);
}

std::string density_filename(DensityTag tag, double t) {
  return to_string(tag) + "_t" + shortest(t) + ".csv";
}

void export_density(const DensityField& field, const std::filesystem::path& path) {
  std::string out = "x,value\n";
  const auto& x = field.grid->x();
  std::array<char, 96> line{};
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const int n = std::snprintf(line.data(), line.size(), "%.17g,%.17g\n", x[j],
                                field.values[j]);
    out.append(line.data(), static_cast<std::size_t>(n));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << out;
}

DensityTable read_density_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(f, line);
  if (trim(line) != "x,value") {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  DensityTable t;
  while (std::getline(f, line)) {
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    const auto x = Reader::parse_double(trim(line.substr(0, comma)));
    const auto v = comma == std::string::npos
                       ? std::nullopt
                       : Reader::parse_double(trim(line.substr(comma + 1)));
    if (!x || !v) throw std::runtime_error(path.string() + ": bad row '" + line + "'");
    t.x.push_back(*x);
    t.value.push_back(*v);
  }
  return t;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (f) {
    f.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

double guard_band_max(const DensityField& field, double guard_fraction) {
  const double half = 0.5 * field.grid->box_length();
  const double edge = half - guard_fraction * field.grid->box_length();
  return field.max_outside(-edge, edge);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool guarded(const ScenarioConfig& cfg, DensityTag tag) {
  if (!cfg.potential) return true;
  switch (tag) {
    case DensityTag::first_quantized:
    case DensityTag::rho_blind_free:
    case DensityTag::rho_pa_free:
    case DensityTag::rho_an_free:
      return true;
    default:
      return false;
  }
}

DensityField evaluate(DensityTag tag, const DensityTerms& terms,
                      const ScenarioConfig& cfg, const SpinorField& psi,
                      const PacketSpectrum& spectrum, const ModeBasis& basis,
                      const Potential& potential, double dt) {
  switch (tag) {
    case DensityTag::rho_pa: return rho_particle(terms);
    case DensityTag::rho_an: return rho_antiparticle(terms);
    case DensityTag::rho_ch: return rho_charge(terms);
    case DensityTag::rho_blind: return rho_blind(terms);
    case DensityTag::rho_blind_free: return wavepacket_only_density(terms);
    case DensityTag::rho_pa_free: return packet_particle_density(terms);
    case DensityTag::rho_an_free: return packet_antiparticle_density(terms);
    case DensityTag::rho_cross: return rho_cross(terms);
    case DensityTag::first_quantized: {
      const auto evolved = cfg.potential
                               ? evolve_field(psi, potential, cfg.field, terms.t, dt)
                               : evolve_first_quantized(spectrum, basis, terms.t);
      return first_quantized_density(evolved, cfg.field, terms.t);
    }
  }
  throw ContractViolation("unhandled density tag");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace

RunManifest run_scenario(const ScenarioConfig& cfg) {
  const auto t_start = Clock::now();
  RunManifest m;
  m.config = cfg;
  const auto grid = make_grid(cfg.n_points, cfg.box_length, cfg.units);
  const ModeBasis basis(cfg.field, grid);
  const Potential potential =
      cfg.potential ? tanh_step(grid, cfg.potential->V0, cfg.potential->d,
                                cfg.potential->alpha)
                    : Potential::zero(grid);
  m.supercritical = cfg.potential && is_supercritical(cfg.potential->V0, cfg.units);
  m.wrap_step = cfg.potential && cfg.potential->V0 != 0.0;
  m.dt = resolved_time_step(cfg);

  SpinorField psi(grid);
  PacketSpectrum spectrum = PacketSpectrum::vacuum(basis);
  if (cfg.packet) {
    const double edge = 0.5 * cfg.box_length * (1.0 - 2.0 * cfg.guard_fraction);
    if (cfg.packet->support_lo() < -edge || cfg.packet->support_hi() > edge) {
      throw GuardViolation("packet support reaches the box guard band");
    }
    psi = build_packet(*cfg.packet, grid, cfg.field);
    spectrum = decompose(psi, basis);
    m.support_lo = cfg.packet->support_lo();
    m.support_hi = cfg.packet->support_hi();
  }

  ModePropagator propagator(basis, potential, m.dt);
  m.analytic_propagation = propagator.analytic();
  std::filesystem::create_directories(cfg.output_dir);
  m.seconds_setup = seconds_since(t_start);

  for (double t : cfg.times) {
    auto t0 = Clock::now();
    const auto u = propagator.at(t);
    m.seconds_propagation += seconds_since(t0);

    t0 = Clock::now();
    const auto terms = density_terms(u, spectrum, basis);
    for (auto tag : cfg.densities) {
      const auto field =
          evaluate(tag, terms, cfg, psi, spectrum, basis, potential, m.dt);
      if (guarded(cfg, tag)) {
        const double band = guard_band_max(field, cfg.guard_fraction);
        const double peak = field.peak();
        if (band > cfg.guard_threshold * peak) {
          throw GuardViolation(to_string(tag) + " at t=" + shortest(t) +
                               " reaches the box guard band (" + shortest(band) +
                               " > " + shortest(cfg.guard_threshold) + " * peak " +
                               shortest(peak) + ")");
        }
      }
      FileRecord rec;
      rec.path = density_filename(tag, t);
      rec.tag = tag;
      rec.t = t;
      const auto path = cfg.output_dir / rec.path;
      export_density(field, path);
      rec.sha256 = sha256_file(path);
      rec.bytes = std::filesystem::file_size(path);
      m.files.push_back(rec);
    }
    NumberRow row;
    row.report = number_report(rho_particle(terms), rho_antiparticle(terms),
                               rho_blind(terms), rho_cross(terms), cfg.field);
    row.integral_rho_ch = rho_charge(terms).integral();
    m.numbers.push_back(row);
    m.seconds_densities += seconds_since(t0);
  }

  std::string numbers = "t,N_pa,N_an,N_total,integral_rho,integral_rho3,integral_rho_ch\n";
  for (const auto& row : m.numbers) {
    const auto& r = row.report;
    std::array<char, 256> line{};
    const int n = std::snprintf(line.data(), line.size(),
                                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                                r.N_pa, r.N_an, r.N_total, r.integral_rho,
                                r.integral_rho3, row.integral_rho_ch);
    numbers.append(line.data(), static_cast<std::size_t>(n));
  }
  write_text(cfg.output_dir / "numbers.csv", numbers);
  m.numbers_sha256 = sha256_file(cfg.output_dir / "numbers.csv");
  m.seconds_total = seconds_since(t_start);
  write_text(cfg.output_dir / "manifest.json", manifest_json(m));
  return m;
}

std::string manifest_json(const RunManifest& m) {
  using nlohmann::json;
  const auto& c = m.config;
  const auto grid = make_grid(c.n_points, c.box_length, c.units);
  const double e_max = energy(grid->p_max(), Branch::positive, c.units);

  json config = {
      {"preset", c.preset.empty() ? json(nullptr) : json(c.preset)},
      {"scenario", to_string(c.scenario)},
      {"field", to_string(c.field)},
      {"units", {{"name", c.units.name}, {"hbar", c.units.hbar}, {"c", c.units.c},
                 {"m", c.units.m}}},
      {"grid", {{"n_points", c.n_points}, {"box_length", c.box_length}}},
      {"times", c.times},
      {"dt", c.dt > 0.0 ? json(c.dt) : json("auto")},
      {"output_dir", c.output_dir.string()},
  };
  if (c.packet) {
    config["packet"] = {{"x0", c.packet->x0},
                        {"width", c.packet->width},
                        {"p0", c.packet->p0},
                        {"row", c.packet->charge_row == ChargeRow::upper ? "upper" : "lower"}};
  } else {
    config["packet"] = {{"vacuum", true}};
  }
  config["potential"] = c.potential ? json{{"V0", c.potential->V0},
                                           {"d", c.potential->d},
                                           {"alpha", c.potential->alpha},
                                           {"form", "V0 (1 + tanh((x - d)/alpha)) / 2"}}
                                    : json(nullptr);
  std::vector<std::string> tags;
  for (auto t : c.densities) tags.push_back(to_string(t));
  config["densities"] = tags;

  json derived = {
      {"compton_wavelength", c.units.compton_wavelength()},
      {"rest_energy", c.units.rest_energy()},
      {"dx", grid->dx()},
      {"dp", grid->dp()},
      {"p_max", grid->p_max()},
      {"energy_range", {c.units.rest_energy(), e_max}},
      {"supercritical", m.supercritical},
      {"wrap_step", m.wrap_step},
      {"dt", m.dt},
      {"analytic_propagation", m.analytic_propagation},
      {"epsilon", epsilon(c.field)},
      {"density_measure", "per unit length"},
  };
  if (c.packet) {
    derived["light_cone"] = {{"support_lo", m.support_lo},
                             {"support_hi", m.support_hi},
                             {"c", c.units.c}};
  }

  json files = json::array();
  for (const auto& f : m.files) {
    files.push_back({{"path", f.path},
                     {"tag", to_string(f.tag)},
                     {"t", f.t},
                     {"sha256", f.sha256},
                     {"bytes", f.bytes}});
  }
  json numbers = json::array();
  for (const auto& row : m.numbers) {
    const auto& r = row.report;
    numbers.push_back({{"t", r.t},
                       {"N_pa", r.N_pa},
                       {"N_an", r.N_an},
                       {"N_total", r.N_total},
                       {"integral_rho", r.integral_rho},
                       {"integral_rho3", r.integral_rho3},
                       {"integral_rho_ch", row.integral_rho_ch}});
  }

  json doc = {
      {"schema", "qft1d-manifest/1"},
      {"software", {{"name", "qft1d"}, {"version", kVersion}}},
      {"config", config},
      {"derived", derived},
      {"tolerances",
       {{"guard_fraction", c.guard_fraction},
        {"guard_threshold", c.guard_threshold},
        {"guarded_tags", c.potential ? "packet densities only" : "all"}}},
      {"notes", c.notes},
      {"files", files},
      {"numbers", {{"path", "numbers.csv"}, {"sha256", m.numbers_sha256}, {"rows", numbers}}},
      {"timings_s",
       {{"setup", m.seconds_setup},
        {"propagation", m.seconds_propagation},
        {"densities", m.seconds_densities},
        {"total", m.seconds_total}}},
  };
  return doc.dump(2) + "\n";
}

}  // namespace qft1d
