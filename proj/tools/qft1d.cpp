// qft1d command line: scenario runs, operator-algebra verification, selftest.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qft1d/error.hpp"
#include "qft1d/fock.hpp"
#include "qft1d/scenario.hpp"
#include "qft1d/selftest.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, guard_violation = 2, selftest_failure = 3 };

int run_command(const std::string& config_path, const std::string& preset,
                const std::string& out_dir) {
  std::string text;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot read config file " << config_path << "\n";
      return config_error;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  } else if (preset.empty()) {
    std::cerr << "error: need --config or --preset\n";
    return config_error;
  }
  auto cfg = qft1d::parse_config(text, preset);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const auto m = qft1d::run_scenario(cfg);
  std::printf("%zu files written to %s (dt = %.6g, %.2f s)\n", m.files.size(),
              cfg.output_dir.string().c_str(), m.dt, m.seconds_total);
  for (const auto& row : m.numbers) {
    const auto& r = row.report;
    std::printf("t=%-10.6g N_pa=%.10g N_an=%.10g N_total=%.10g int_rho=%.10g "
                "int_rho3=%.3e int_rho_ch=%.10g\n",
                r.t, r.N_pa, r.N_an, r.N_total, r.integral_rho, r.integral_rho3,
                row.integral_rho_ch);
  }
  return ok;
}

int verify_algebra() {
  bool all = true;
  for (const auto& r : qft1d::run_algebra_suite()) {
    std::printf("%s  %-16s %-34s max defect %.3e over %zu states\n",
                r.passed() ? "PASS" : "FAIL", r.check.c_str(), r.space.c_str(),
                r.max_defect, r.states_checked);
    all = all && r.passed();
  }
  return all ? ok : selftest_failure;
}

int selftest() {
  bool all = true;
  for (const auto& r : qft1d::run_selftest()) {
    std::printf("%s  %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all = all && r.passed;
  }
  return all ? ok : selftest_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1+1D Dirac / Klein-Gordon field simulator with charge-blind densities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run a scenario and write densities");
  run->add_option("--config", config_path, "INI scenario file");
  run->add_option("--preset", preset, "paper-fig1 | paper-fig2 | paper-fig3 | paper-fig4")
      ->check(CLI::IsMember(qft1d::preset_names()));
  run->add_option("--out", out_dir, "output directory (overrides [run] output_dir)");

  auto* algebra = app.add_subcommand("verify-algebra", "check Fock-space raising identities");
  auto* self = app.add_subcommand("selftest", "run the built-in oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : config_error;
  }

  try {
    if (*run) return run_command(config_path, preset, out_dir);
    if (*algebra) return verify_algebra();
    if (*self) return selftest();
  } catch (const qft1d::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const qft1d::GuardViolation& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return guard_violation;
  }
  return ok;
}
