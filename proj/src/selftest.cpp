#include "qft1d/selftest.hpp"

#include <cmath>
#include <cstdio>

#include "qft1d/densities.hpp"
#include "qft1d/fock.hpp"
#include "qft1d/propagation.hpp"

namespace qft1d {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

SelftestResult check(std::string name, double value, double tol) {
  return {std::move(name), value < tol, sci(value) + " (tol " + sci(tol) + ")"};
}

}  // namespace

std::vector<SelftestResult> run_selftest() {
  std::vector<SelftestResult> out;
  const auto units = UnitSystem::compton();
  const auto grid = make_grid(128, 32.0, units);

  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    const ModeBasis basis(kind, grid);
    const auto psi = build_packet({-2.0, 1.0, 1.5, ChargeRow::upper}, grid, kind);
    const auto spectrum = decompose(psi, basis);
    const std::string k = to_string(kind);

    const double t = 3.0;
    const auto u = build_evolution_matrix(basis, Potential::zero(grid), t, 1.0);
    const auto blind = rho_blind(density_terms(u, spectrum, basis));
    const auto r = first_quantized_density(evolve_first_quantized(spectrum, basis, t), kind, t);
    out.push_back(check(k + " free rho_blind vs first-quantized",
                        (blind.values - r.values).cwiseAbs().maxCoeff() / r.peak(), 1e-8));

    const double dt = 1.0 / 64.0;
    const auto split = build_evolution_matrix(basis, Potential::zero(grid), t, dt,
                                              PropagationPath::split_step);
    out.push_back(check(k + " split-step free matrix vs analytic",
                        (split.full() - u.full()).cwiseAbs().maxCoeff(), 1e-9));

    const auto step = tanh_step(grid, 3.0, 0.0, 0.3);
    ModePropagator prop(basis, step, dt);
    const auto u1 = prop.at(1.0);
    const auto u2 = prop.at(2.0);
    out.push_back(check(k + " pseudo-unitarity under a step", metric_defect(u2, kind), 1e-9));
    const double q1 = rho_charge(density_terms(u1, spectrum, basis)).integral();
    const double q2 = rho_charge(density_terms(u2, spectrum, basis)).integral();
    out.push_back(check(k + " charge conservation under a step", std::abs(q2 - q1), 1e-6));
  }

  for (const auto& r : run_algebra_suite()) {
    out.push_back({r.check + " " + r.space, r.passed(),
                   sci(r.max_defect) + " over " + std::to_string(r.states_checked) + " states"});
  }
  return out;
}

}  // namespace qft1d
