#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qft1d/densities.hpp"
#include "qft1d/lattice.hpp"
#include "qft1d/modes.hpp"
#include "qft1d/wavepackets.hpp"

namespace qft1d {

inline constexpr const char* kVersion = "0.1.0";

enum class ScenarioKind { free_dirac, free_kg, vacuum_step, klein_step };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);
bool needs_potential(ScenarioKind kind);

/// Lengths, momenta, energies and times are expressed in the selected unit
/// system (atomic: a0, hbar/a0, Hartree, hbar/Hartree; compton: lambda,
/// mc, mc^2, lambda/c).
struct ScenarioConfig {
  std::string preset;  // empty when built from a document only
  ScenarioKind scenario = ScenarioKind::free_dirac;
  FieldKind field = FieldKind::dirac;
  UnitSystem units = UnitSystem::compton();
  std::size_t n_points = 1024;
  double box_length = 64.0;
  std::optional<PacketSpec> packet;  // empty: vacuum
  std::optional<StepParameters> potential;
  std::vector<double> times;
  double dt = 0.0;  // 0: chosen automatically
  std::filesystem::path output_dir = "out";
  std::vector<DensityTag> densities;
  double guard_fraction = 0.1;
  double guard_threshold = 1e-12;
  std::vector<std::string> notes;
};

/// Preset names: paper-fig1 .. paper-fig4.
std::vector<std::string> preset_names();
/// The INI document defining a preset.
std::string preset_document(const std::string& name);

/// Parses an INI document with sections [run], [grid], [packet],
/// [potential]. With a preset name, the preset document is read first and
/// keys set by `text` override it. Every problem found is reported in one
/// ConfigError.
ScenarioConfig parse_config(const std::string& text,
                            const std::string& preset = {});
ScenarioConfig load_preset(const std::string& name);

/// Time step actually used: cfg.dt, or the automatic choice.
double resolved_time_step(const ScenarioConfig& cfg);

struct FileRecord {
  std::string path;  // relative to the output directory
  DensityTag tag = DensityTag::rho_blind;
  double t = 0.0;
  std::string sha256;
  std::size_t bytes = 0;
};

struct NumberRow {
  NumberReport report;
  double integral_rho_ch = 0.0;
};

struct RunManifest {
  ScenarioConfig config;
  double dt = 0.0;
  bool analytic_propagation = false;
  bool supercritical = false;
  bool wrap_step = false;
  double support_lo = 0.0;
  double support_hi = 0.0;
  std::vector<FileRecord> files;
  std::vector<NumberRow> numbers;
  std::string numbers_sha256;
  double seconds_setup = 0.0;
  double seconds_propagation = 0.0;
  double seconds_densities = 0.0;
  double seconds_total = 0.0;
};

/// Executes the scenario, writing CSV files, numbers.csv and manifest.json
/// to cfg.output_dir. Throws GuardViolation when a guarded density reaches
/// the box edges.
RunManifest run_scenario(const ScenarioConfig& cfg);

std::string manifest_json(const RunManifest& m);

/// "<tag>_t<time>.csv" with the shortest round-trip spelling of time.
std::string density_filename(DensityTag tag, double t);
/// CSV with header "x,value" and 17 significant digits.
void export_density(const DensityField& field, const std::filesystem::path& path);

struct DensityTable {
  std::vector<double> x;
  std::vector<double> value;
};
DensityTable read_density_csv(const std::filesystem::path& path);

std::string sha256_file(const std::filesystem::path& path);

/// Largest |value| in the outer guard_fraction of the box on either side.
double guard_band_max(const DensityField& field, double guard_fraction);

}  // namespace qft1d
