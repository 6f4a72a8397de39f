#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "qft1d/densities.hpp"

using namespace qft1d;

namespace {

// Sparse Fock vector over slots b_0..b_{n-1}, d_0..d_{n-1}, no truncation.
using Occupation = std::vector<int>;
using State = std::map<Occupation, cplx>;

struct LadderTerm {
  std::size_t slot;
  bool create;
  cplx coeff;
};

void apply_ladder(const State& in, const LadderTerm& op, bool fermi, State& out) {
  for (const auto& [occ, amp] : in) {
    Occupation o = occ;
    int& n = o[op.slot];
    double factor = 0.0;
    if (op.create) {
      if (fermi && n == 1) continue;
      factor = std::sqrt(n + 1.0);
      ++n;
    } else {
      if (n == 0) continue;
      factor = std::sqrt(static_cast<double>(n));
      --n;
    }
    if (fermi) {
      int below = 0;
      for (std::size_t k = 0; k < op.slot; ++k) below += o[k];
      if (below % 2) factor = -factor;
    }
    out[o] += op.coeff * factor * amp;
  }
}

State apply(const State& in, const std::vector<LadderTerm>& op, bool fermi) {
  State out;
  for (const auto& term : op) {
    if (term.coeff != cplx(0.0)) apply_ladder(in, term, fermi, out);
  }
  return out;
}

double norm2(const State& s) {
  double n = 0.0;
  for (const auto& [occ, amp] : s) n += std::norm(amp);
  return n;
}

cplx mode_value(const ModeBasis& b, Branch br, std::size_t p, std::size_t comp, double x) {
  const auto& m = b.mode(br, p);
  return m.spinor[static_cast<Eigen::Index>(comp)] *
         std::polar(1.0 / std::sqrt(b.grid().box_length()), m.p * x);
}

enum class Part { particle, antiparticle, antiparticle_standard, blind };

// Component `comp` at position x of one of the field operators, expressed
// on the initial ladder operators through the evolution amplitudes.
std::vector<LadderTerm> field_operator(const EvolutionMatrix& u, const ModeBasis& b,
                                       Part part, std::size_t comp, double x) {
  const std::size_t n = b.size();
  std::vector<LadderTerm> op;
  const bool with_pa = part == Part::particle || part == Part::blind;
  const bool with_an = part != Part::particle;
  for (std::size_t q = 0; q < n; ++q) {
    cplx cb = 0.0, cdd = 0.0, cbd = 0.0, cd = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      const auto pi = static_cast<Eigen::Index>(p);
      const auto qi = static_cast<Eigen::Index>(q);
      if (with_pa) {
        const cplx phi = mode_value(b, Branch::positive, p, comp, x);
        cb += phi * u.pp(pi, qi);
        cdd += phi * u.pn(pi, qi);
      }
      if (with_an) {
        const cplx phibar = mode_value(b, Branch::negative, p, comp, x);
        if (part == Part::antiparticle_standard) {
          // Psi_an = sum_p d_p(t) conj(phibar_p(x)), d_p(t) = (d_p^dagger(t))^dagger.
          cbd += std::conj(phibar * u.np(pi, qi));
          cd += std::conj(phibar * u.nn(pi, qi));
        } else {
          cbd += phibar * u.np(pi, qi);
          cd += phibar * u.nn(pi, qi);
        }
      }
    }
    op.push_back({q, false, cb});
    op.push_back({n + q, true, cdd});
    op.push_back({q, true, cbd});
    op.push_back({n + q, false, cd});
  }
  return op;
}

Eigen::VectorXd fock_density(const EvolutionMatrix& u, const ModeBasis& b,
                             const PacketSpectrum& s, Part part) {
  const std::size_t n = b.size();
  const bool fermi = b.kind() == FieldKind::dirac;
  State chi;
  const auto a = s.plus_amplitudes();
  const auto c = s.minus_amplitudes();
  for (std::size_t q = 0; q < n; ++q) {
    Occupation o(2 * n, 0);
    o[q] = 1;
    chi[o] += a[static_cast<Eigen::Index>(q)];
    o[q] = 0;
    o[n + q] = 1;
    chi[o] += c[static_cast<Eigen::Index>(q)];
  }
  if (s.is_vacuum()) chi = {{Occupation(2 * n, 0), 1.0}};
  Eigen::VectorXd rho(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double x = b.grid().x()[static_cast<Eigen::Index>(j)];
    double v = 0.0;
    for (std::size_t comp = 0; comp < 2; ++comp) {
      const double sign = (b.kind() == FieldKind::klein_gordon && comp == 1) ? -1.0 : 1.0;
      v += sign * norm2(apply(chi, field_operator(u, b, part, comp, x), fermi));
    }
    rho[static_cast<Eigen::Index>(j)] = v;
  }
  return rho;
}

PacketSpectrum random_spectrum(const ModeBasis& b, std::mt19937_64& rng, bool fock_unit) {
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(b.size());
  PacketSpectrum s{Eigen::VectorXcd(n), Eigen::VectorXcd(n), b.kind(), b.grid().dp()};
  for (auto& z : s.g_plus) z = cplx(g(rng), g(rng));
  for (auto& z : s.g_minus) z = cplx(g(rng), g(rng));
  const double norm = fock_unit ? s.fock_norm() : std::abs(s.normalization());
  s.g_plus /= std::sqrt(norm);
  s.g_minus /= std::sqrt(norm);
  return s;
}

double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("densities match exact Fock-space expectation values under a step") {
  std::mt19937_64 rng(2024);
  const auto g = make_grid(8, 6.0, UnitSystem::compton());
  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    CAPTURE(to_string(kind));
    const ModeBasis b(kind, g);
    const auto v = tanh_step(g, 3.0, 0.0, 0.4);
    const auto u = build_evolution_matrix(b, v, 1.0, 1.0 / 64);
    const auto s = random_spectrum(b, rng, true);
    const auto terms = density_terms(u, s, b);
    CHECK(rel_diff(rho_particle(terms).values, fock_density(u, b, s, Part::particle)) < 1e-12);
    CHECK(rel_diff(rho_antiparticle(terms).values,
                   fock_density(u, b, s, Part::antiparticle)) < 1e-12);
    CHECK(rel_diff(rho_blind(terms).values, fock_density(u, b, s, Part::blind)) < 1e-12);
    const Eigen::VectorXd an_std = fock_density(u, b, s, Part::antiparticle_standard);
    CHECK(rel_diff(rho_charge(terms).values,
                   rho_particle(terms).values + epsilon(kind) * an_std) < 1e-12);

    const auto vac = PacketSpectrum::vacuum(b);
    const auto vt = density_terms(u, vac, b);
    CHECK(rel_diff(rho_blind(vt).values, fock_density(u, b, vac, Part::blind)) < 1e-12);
    CHECK(rho_cross(vt).values.isZero(0.0));
  }
}

TEST_CASE("free densities equal the first-quantized densities") {
  std::mt19937_64 rng(99);
  const auto g = make_grid(128, 24.0, UnitSystem::compton());
  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    const ModeBasis b(kind, g);
    const auto s = random_spectrum(b, rng, false);
    const double t = 2.5;
    const auto u = build_evolution_matrix(b, Potential::zero(g), t, 0.5);
    const auto terms = density_terms(u, s, b);
    const auto psi = evolve_first_quantized(s, b, t);
    const auto r = first_quantized_density(psi, kind, t);
    CHECK(rel_diff(rho_blind(terms).values, r.values) < 1e-8);
    CHECK(rel_diff(wavepacket_only_density(terms).values, rho_blind(terms).values) < 1e-15);
    const auto rp = first_quantized_density(evolve_first_quantized_plus(s, b, t), kind, t);
    const auto rn = first_quantized_density(evolve_first_quantized_minus(s, b, t), kind, t);
    CHECK(rel_diff(rho_particle(terms).values, rp.values) < 1e-9);
    CHECK(rel_diff(rho_antiparticle(terms).values, rn.values) < 1e-9);
    const Eigen::VectorXd cross = r.values - rp.values - rn.values;
    CHECK((rho_cross(terms).values - cross).cwiseAbs().maxCoeff() < 1e-8 * r.peak());

    // Pure sectors.
    const auto tp = density_terms(u, s.only_plus(), b);
    CHECK(rho_cross(tp).values.isZero(0.0));
    CHECK(rho_antiparticle(tp).values.isZero(0.0));
  }
}

TEST_CASE("integral identities and number report") {
  std::mt19937_64 rng(5);
  const auto g = make_grid(128, 32.0, UnitSystem::compton());
  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    const ModeBasis b(kind, g);
    const auto v = tanh_step(g, 9.0, 0.0, 0.3);
    ModePropagator prop(b, v, 1.0 / 128);
    const auto psi = build_packet({-6.0, 1.0, 2.0, ChargeRow::upper}, g, kind);
    const auto s = decompose(psi, b);
    double charge0 = 0.0;
    for (double t : {0.0, 0.5, 1.0}) {
      const auto terms = density_terms(prop.at(t), s, b);
      const auto pa = rho_particle(terms);
      const auto an = rho_antiparticle(terms);
      const auto bl = rho_blind(terms);
      const auto cr = rho_cross(terms);
      const auto rep = number_report(pa, an, bl, cr, kind);
      CHECK(rep.t == t);
      CHECK(rep.N_pa == doctest::Approx(pa.integral()));
      CHECK(rep.N_an == doctest::Approx(-epsilon(kind) * an.integral()));
      CHECK(rep.N_total == doctest::Approx(rep.N_pa + rep.N_an));
      CHECK(std::abs(rep.integral_rho - pa.integral() - an.integral()) <
            1e-8 * std::max(1.0, std::abs(rep.integral_rho)));
      CHECK(std::abs(rep.integral_rho3) <= 1e-8 * std::max(1e-300, cr.integral_abs()));
      const double q = rho_charge(terms).integral();
      if (t == 0.0) charge0 = q;
      CHECK(std::abs(q - charge0) < 1e-10);
      if (kind == FieldKind::dirac) CHECK(bl.values.minCoeff() > -1e-10);
    }
  }
}

TEST_CASE("vacuum behaviour") {
  const auto g = make_grid(128, 32.0, UnitSystem::compton());
  const ModeBasis b(FieldKind::dirac, g);
  const auto vac = PacketSpectrum::vacuum(b);
  const auto free_terms =
      density_terms(build_evolution_matrix(b, Potential::zero(g), 1.0, 0.1), vac, b);
  for (const auto& f : {rho_particle(free_terms), rho_antiparticle(free_terms),
                        rho_charge(free_terms), rho_blind(free_terms),
                        wavepacket_only_density(free_terms)}) {
    CHECK(f.values.isZero(0.0));
  }
  const auto rep = number_report(rho_particle(free_terms), rho_antiparticle(free_terms),
                                 rho_blind(free_terms), rho_cross(free_terms),
                                 FieldKind::dirac);
  CHECK(rep.N_total == 0.0);

  ModePropagator prop(b, tanh_step(g, 9.0, 0.0, 0.3), 1.0 / 128);
  double last = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    const auto terms = density_terms(prop.at(t), vac, b);
    const auto pa = rho_particle(terms);
    const auto an = rho_antiparticle(terms);
    CHECK(rho_cross(terms).values.isZero(0.0));
    CHECK((rho_blind(terms).values - pa.values - an.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(wavepacket_only_density(terms).values.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(pa.integral() == doctest::Approx(an.integral()).epsilon(1e-9));
    CHECK(pa.integral() > last);
    last = pa.integral();
  }
}

TEST_CASE("unit Fock norm packets carry one quantum") {
  const auto g = make_grid(256, 32.0, UnitSystem::compton());
  for (auto kind : {FieldKind::dirac, FieldKind::klein_gordon}) {
    const ModeBasis b(kind, g);
    auto s = decompose(build_packet({0.0, 2.0, 3.0, ChargeRow::upper}, g, kind), b);
    const double f = s.fock_norm();
    s.g_plus /= std::sqrt(f);
    s.g_minus /= std::sqrt(f);
    const auto terms =
        density_terms(build_evolution_matrix(b, Potential::zero(g), 4.0, 0.5), s, b);
    const auto rep = number_report(rho_particle(terms), rho_antiparticle(terms),
                                   rho_blind(terms), rho_cross(terms), kind);
    CHECK(rep.N_total == doctest::Approx(1.0).epsilon(1e-10));
  }
}
