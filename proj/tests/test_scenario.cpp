#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qft1d/error.hpp"
#include "qft1d/scenario.hpp"

using namespace qft1d;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qft1d_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kSmallKlein =
    "[run]\n"
    "scenario = klein_step\n"
    "times = 0, 1\n"
    "densities = rho_blind, rho_pa, rho_an, rho_cross, rho_ch\n"
    "[grid]\n"
    "n_points = 64\n"
    "box_length = 32\n"
    "[packet]\n"
    "x0 = -6\n"
    "width = 1\n"
    "p0 = 2\n"
    "[potential]\n"
    "V0 = 4\n"
    "d = 0\n"
    "alpha = 0.5\n";

}  // namespace

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(names.size() == 4);
  const auto f3 = load_preset("paper-fig3");
  CHECK(f3.scenario == ScenarioKind::vacuum_step);
  CHECK(f3.field == FieldKind::dirac);
  REQUIRE(f3.potential);
  CHECK(f3.potential->V0 == 9.0);
  CHECK(f3.potential->d == -10.0);
  CHECK_FALSE(f3.packet);
  CHECK_FALSE(f3.notes.empty());

  const auto f1 = load_preset("paper-fig1");
  CHECK(f1.scenario == ScenarioKind::free_dirac);
  CHECK(f1.units.c == 137.036);
  REQUIRE(f1.packet);
  CHECK(f1.packet->width == doctest::Approx(2.0 / 137.036));
  CHECK(f1.packet->p0 == 100.0);
  CHECK(f1.times.back() == 1e-3);

  for (const auto& n : names) CHECK_NOTHROW(load_preset(n));
  CHECK_THROWS_AS(load_preset("paper-fig9"), ConfigError);

  const auto over = parse_config("[grid]\nn_points = 512\n[run]\ntimes = 0, 1\n", "paper-fig3");
  CHECK(over.n_points == 512);
  CHECK(over.times.size() == 2);
  CHECK(over.potential->V0 == 9.0);
}

TEST_CASE("configuration errors") {
  const std::string no_potential =
      "[run]\nscenario = klein_step\ntimes = 0, 1\n[grid]\nn_points = 64\nbox_length = 32\n"
      "[packet]\nx0 = 0\nwidth = 1\np0 = 1\n";
  CHECK(config_error(no_potential).find("requires a [potential]") != std::string::npos);

  const std::string free_with_potential =
      "[run]\nscenario = free_dirac\ntimes = 0, 1\n[grid]\nn_points = 64\nbox_length = 32\n"
      "[packet]\nx0 = 0\nwidth = 1\np0 = 1\n[potential]\nV0 = 1\nd = 0\nalpha = 1\n";
  CHECK(config_error(free_with_potential).find("does not allow") != std::string::npos);

  const std::string unknown =
      "[run]\nscenario = free_dirac\ntimes = 0, 1\n[grid]\nn_point = 64\n";
  CHECK(config_error(unknown).find("n_point") != std::string::npos);

  // Several problems are reported together.
  const std::string many =
      "[run]\nscenario = free_dirac\ntimes = 1, 0.5\ncolour = red\n[grid]\nn_points = 100\n"
      "box_length = 32\n[packet]\nx0 = 0\nwidth = 1\np0 = 1\n";
  const auto msg = config_error(many);
  CHECK(msg.find("colour") != std::string::npos);
  CHECK(msg.find("increasing") != std::string::npos);
  CHECK(msg.find("power of two") != std::string::npos);

  const std::string bad_dt =
      "[run]\nscenario = free_dirac\ntimes = 0, 1\ndt = 0.3\n[grid]\nn_points = 64\n"
      "box_length = 32\n[packet]\nx0 = 0\nwidth = 1\np0 = 1\n";
  CHECK_FALSE(config_error(bad_dt).empty());
  CHECK_FALSE(config_error("[bogus]\nkey = 1\n").empty());
}

TEST_CASE("density files") {
  CHECK(density_filename(DensityTag::rho_blind, 0.5) == "rho_blind_t0.5.csv");
  CHECK(density_filename(DensityTag::rho_pa, 0.001) == "rho_pa_t0.001.csv");
  CHECK(density_filename(DensityTag::rho_an, 0.0) == "rho_an_t0.csv");

  const auto dir = scratch("csv");
  fs::create_directories(dir);
  const auto g = make_grid(8, 3.0, UnitSystem::compton());
  DensityField f{g, Eigen::VectorXd(8), DensityTag::rho_pa, 0.1};
  f.values << 0.1, 1.0 / 3.0, -2e-300, 0.0, std::sqrt(2.0), 1e20, -7.25, 5e-324;
  const auto path = dir / "f.csv";
  export_density(f, path);
  const auto text = slurp(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 9);
  CHECK(text.rfind("x,value\n", 0) == 0);
  const auto table = read_density_csv(path);
  REQUIRE(table.value.size() == 8);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(table.value[j] == f.values[static_cast<Eigen::Index>(j)]);
    CHECK(table.x[j] == g->x()[static_cast<Eigen::Index>(j)]);
  }
  fs::remove_all(dir);
}

TEST_CASE("free vacuum run writes zero densities") {
  const auto dir = scratch("vacuum");
  auto cfg = parse_config(
      "[run]\nscenario = free_dirac\ntimes = 0, 1\n[grid]\nn_points = 64\nbox_length = 32\n"
      "[packet]\nvacuum = true\n");
  cfg.output_dir = dir;
  const auto m = run_scenario(cfg);
  CHECK_FALSE(m.files.empty());
  for (const auto& f : m.files) {
    const auto t = read_density_csv(dir / f.path);
    for (double v : t.value) CHECK(v == 0.0);
    CHECK(sha256_file(dir / f.path) == f.sha256);
  }
  fs::remove_all(dir);
}

TEST_CASE("klein step run outputs") {
  const auto dir = scratch("klein");
  auto cfg = parse_config(kSmallKlein);
  cfg.output_dir = dir;
  const auto m = run_scenario(cfg);
  CHECK(m.supercritical);
  CHECK(m.files.size() == 10);
  CHECK(m.numbers.size() == 2);
  CHECK(fs::exists(dir / "numbers.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(slurp(dir / "numbers.csv")
            .rfind("t,N_pa,N_an,N_total,integral_rho,integral_rho3,integral_rho_ch\n", 0) == 0);

  for (double t : {0.0, 1.0}) {
    auto read = [&](DensityTag tag) {
      return read_density_csv(dir / density_filename(tag, t)).value;
    };
    const auto blind = read(DensityTag::rho_blind);
    const auto pa = read(DensityTag::rho_pa);
    const auto an = read(DensityTag::rho_an);
    const auto cross = read(DensityTag::rho_cross);
    for (std::size_t j = 0; j < blind.size(); ++j) {
      CHECK(std::abs(blind[j] - pa[j] - an[j] - cross[j]) < 1e-12);
    }
  }
  CHECK(m.numbers[0].integral_rho_ch == doctest::Approx(m.numbers[1].integral_rho_ch));

  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["schema"] == "qft1d-manifest/1");
  CHECK(j["software"]["version"] == kVersion);
  CHECK(j["config"]["scenario"] == "klein_step");
  CHECK(j["derived"]["supercritical"] == true);
  CHECK(j["derived"]["dt"].get<double>() == m.dt);
  CHECK(j["files"].size() == m.files.size());
  for (const auto& f : j["files"]) {
    CHECK(sha256_file(dir / f["path"].get<std::string>()) == f["sha256"].get<std::string>());
  }
  CHECK(j["numbers"]["rows"].size() == 2);
  CHECK(j["numbers"]["sha256"] == sha256_file(dir / "numbers.csv"));

  // Determinism: a second run produces byte-identical files.
  const auto dir2 = scratch("klein2");
  cfg.output_dir = dir2;
  const auto m2 = run_scenario(cfg);
  for (std::size_t k = 0; k < m.files.size(); ++k) {
    CHECK(m.files[k].sha256 == m2.files[k].sha256);
  }
  CHECK(m.numbers_sha256 == m2.numbers_sha256);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("guard band violation") {
  const auto dir = scratch("guard");
  auto cfg = parse_config(
      "[run]\nscenario = free_dirac\ntimes = 0, 1\n[grid]\nn_points = 64\nbox_length = 32\n"
      "[packet]\nx0 = 13\nwidth = 0.5\np0 = 1\n");
  cfg.output_dir = dir;
  CHECK_THROWS_AS(run_scenario(cfg), GuardViolation);

  const auto g = make_grid(16, 16.0, UnitSystem::compton());
  DensityField f{g, Eigen::VectorXd::Zero(16), DensityTag::rho_pa, 0.0};
  f.values[0] = 3.0;
  f.values[8] = 10.0;
  CHECK(guard_band_max(f, 0.1) == 3.0);
  f.values[0] = 0.0;
  CHECK(guard_band_max(f, 0.1) == 0.0);
  fs::remove_all(dir);
}
