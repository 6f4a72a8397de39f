#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qft1d/error.hpp"
#include "qft1d/propagation.hpp"
#include "qft1d/wavepackets.hpp"

using namespace qft1d;

namespace {

// Truncated Taylor series of exp(-i H dt), summed until terms vanish.
Eigen::Matrix2cd taylor_exp(const Eigen::Matrix2cd& h, double dt) {
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
  for (int k = 1; k < 80; ++k) {
    term = term * h * cplx(0.0, -dt / k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("step count") {
  CHECK(step_count(1.0, 0.25) == 4);
  CHECK(step_count(0.0, 0.1) == 0);
  CHECK(step_count(1e-3, 1e-3 / 16384) == 16384);
  CHECK_THROWS_AS(step_count(1.0, 0.3), ConfigError);
  CHECK_THROWS_AS(step_count(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(step_count(-1.0, 0.5), ConfigError);
}

TEST_CASE("kinetic propagator equals the matrix exponential") {
  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    for (double p : {-2.5, 0.0, 0.3, 4.0}) {
      const auto u = UnitSystem::compton();
      const auto k = kinetic_propagator(kind, p, 0.05, u);
      const auto ref = taylor_exp(free_hamiltonian(kind, p, u), 0.05);
      CHECK((k - ref).norm() < 1e-13);
    }
  }
}

TEST_CASE("free evolution matrix is diagonal with opposite phases") {
  const auto g = make_grid(64, 16.0, UnitSystem::compton());
  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    const ModeBasis b(kind, g);
    const double t = 1.5;
    const auto u = build_evolution_matrix(b, Potential::zero(g), t, 0.01);
    CHECK(u.t == t);
    for (Eigen::Index i = 0; i < 64; ++i) {
      const double e = b.abs_energy()[i];
      CHECK(std::abs(u.pp(i, i) - std::polar(1.0, -e * t)) < 1e-14);
      CHECK(std::abs(u.nn(i, i) - std::polar(1.0, e * t)) < 1e-14);
    }
    CHECK(u.pn.isZero(0.0));
    CHECK(u.np.isZero(0.0));
    // Split-step path reproduces the analytic matrix.
    const auto s = build_evolution_matrix(b, Potential::zero(g), t, 1.5 / 64,
                                          PropagationPath::split_step);
    CHECK((s.full() - u.full()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(metric_defect(s, kind) < 1e-12);
  }
}

TEST_CASE("full matrix block layout round trip") {
  const auto id = EvolutionMatrix::identity(3);
  CHECK(id.size() == 3);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(6, 6);
  const auto e = EvolutionMatrix::from_full(m, 2.0);
  CHECK(e.pn(1, 2) == m(1, 5));
  CHECK(e.np(2, 0) == m(5, 0));
  CHECK(e.full() == m);
  CHECK(metric_defect(id, FieldKind::klein_gordon) == 0.0);
}

TEST_CASE("constant potential only adds a global phase") {
  const auto g = make_grid(128, 32.0, UnitSystem::compton());
  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    const auto psi = build_packet({0.0, 1.0, 1.0, ChargeRow::upper}, g, kind);
    const double v0 = 0.7;
    const double t = 2.0;
    const auto a = evolve_field(psi, Potential::constant(g, v0), kind, t, 0.01);
    const auto b = evolve_field(psi, Potential::zero(g), kind, t, 0.01);
    CHECK((a - std::polar(1.0, -v0 * t) * b).max_norm() < 1e-12);
  }
}

TEST_CASE("evolution matrix columns follow the split-step field evolution") {
  const auto g = make_grid(64, 32.0, UnitSystem::compton());
  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    const ModeBasis b(kind, g);
    const auto v = tanh_step(g, 3.0, 0.0, 0.5);
    const double dt = 1.0 / 32;
    ModePropagator prop(b, v, dt);
    CHECK_FALSE(prop.analytic());
    const auto u = prop.at(1.0);
    const auto psi = build_packet({-6.0, 1.0, 1.0, ChargeRow::upper}, g, kind);
    const auto e = b.expand(psi);
    const Eigen::VectorXcd pos = u.pp * e.positive + u.pn * e.negative;
    const Eigen::VectorXcd neg = u.np * e.positive + u.nn * e.negative;
    const auto direct = evolve_field(psi, v, kind, 1.0, dt);
    CHECK((b.synthesize(pos, neg) - direct).max_norm() < 1e-11);
    CHECK(metric_defect(u, kind) < 1e-11);
    CHECK(u.pn.cwiseAbs().maxCoeff() > 1e-6);  // step mixes the sectors

    // Cached powers agree with a fresh propagator, in any request order.
    const auto u2 = prop.at(2.0);
    const auto u_half = prop.at(0.5);
    ModePropagator fresh(b, v, dt);
    CHECK((fresh.at(0.5).full() - u_half.full()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((fresh.at(2.0).full() - u2.full()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u.full() * u.full() - u2.full()).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("Strang splitting is second order") {
  const auto g = make_grid(256, 64.0, UnitSystem::compton());
  const auto v = tanh_step(g, 9.0, -10.0, 0.3);
  const auto psi = build_packet({-14.0, 1.0, 3.0, ChargeRow::upper}, g, FieldKind::dirac);
  const double h = 1.0 / 32;
  const double t = 2.0;
  const auto ref = evolve_field(psi, v, FieldKind::dirac, t, h / 8);
  const double e1 = (evolve_field(psi, v, FieldKind::dirac, t, h) - ref).max_norm();
  const double e2 = (evolve_field(psi, v, FieldKind::dirac, t, h / 2) - ref).max_norm();
  // (1 - 1/64) / (1/4 - 1/64) for an exact h^2 error law.
  CHECK(e1 / e2 == doctest::Approx(4.2).epsilon(0.02));
}

TEST_CASE("default time step rule") {
  const auto g = make_grid(1024, 64.0, UnitSystem::compton());
  const double e_max = energy(g->p_max(), Branch::positive, g->units());
  const double dt = default_time_step(*g, 9.0, 0.5);
  CHECK((9.0 + 2.0 * e_max) * dt < 0.1);
  CHECK((9.0 + 2.0 * e_max) * 2.0 * dt >= 0.1);
  CHECK(step_count(0.5, dt) == 1024);
  CHECK(step_count(2.0, dt) == 4096);
  const double dt0 = default_time_step(*g, 0.0, 0.0);
  CHECK(2.0 * e_max * dt0 < 0.1);
  CHECK_THROWS_AS(ModePropagator(ModeBasis(FieldKind::dirac, g), Potential::zero(g), 0.0),
                  ConfigError);
}
