#include "qft1d/densities.hpp"

#include <omp.h>

#include <vector>

#include "qft1d/error.hpp"

namespace qft1d {

namespace {

// sum_q |synthesis of column q|^2_sigma over all columns of `block`.
Eigen::VectorXd incoherent_sum(const Eigen::MatrixXcd& block,
                               const ModeBasis& basis, Branch branch) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
  if (block.isZero(0.0)) return total;
  const Metric sigma = metric(basis.kind());
  std::vector<Eigen::VectorXd> partial(
      static_cast<std::size_t>(omp_get_max_threads()),
      Eigen::VectorXd::Zero(n));
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index q = 0; q < block.cols(); ++q) {
    const Eigen::VectorXcd col = block.col(q);
    const auto f = branch == Branch::positive ? basis.synthesize_positive(col)
                                              : basis.synthesize_negative(col);
    partial[static_cast<std::size_t>(omp_get_thread_num())] +=
        sigma_density(f, sigma);
  }
  for (const auto& p : partial) total += p;
  return total;
}

DensityField make(const DensityTerms& terms, Eigen::VectorXd v, DensityTag tag) {
  return {terms.grid, std::move(v), tag, terms.t};
}

}  // namespace

DensityTerms density_terms(const EvolutionMatrix& u,
                           const PacketSpectrum& spectrum,
                           const ModeBasis& basis) {
  if (u.size() != basis.size() ||
      static_cast<std::size_t>(spectrum.g_plus.size()) != basis.size()) {
    throw ContractViolation("evolution matrix, spectrum and basis disagree in size");
  }
  if (spectrum.kind != basis.kind()) {
    throw ContractViolation("spectrum and basis are for different field kinds");
  }
  const Eigen::VectorXcd a = spectrum.plus_amplitudes();
  const Eigen::VectorXcd c = spectrum.minus_amplitudes();
  const Eigen::VectorXcd ac = a.conjugate();
  const Eigen::VectorXcd cc = c.conjugate();

  DensityTerms t;
  t.t = u.t;
  t.kind = basis.kind();
  t.grid = basis.grid_ptr();
  t.packet_plus = basis.synthesize_positive(u.pp * a);
  t.packet_minus = basis.synthesize_negative(u.nn * c);
  t.mixed_plus = basis.synthesize_positive(u.pn * cc);
  t.mixed_minus = basis.synthesize_negative(u.np * ac);
  t.charge_minus = basis.synthesize_negative(u.nn * cc);
  t.charge_mixed = basis.synthesize_negative(u.np * a);
  t.vacuum_pa = incoherent_sum(u.pn, basis, Branch::positive);
  t.vacuum_an = incoherent_sum(u.np, basis, Branch::negative);
  return t;
}

DensityField rho_particle(const DensityTerms& t) {
  const Metric s = metric(t.kind);
  const double eps = epsilon(t.kind);
  return make(t,
              t.vacuum_pa + sigma_density(t.packet_plus, s) +
                  eps * sigma_density(t.mixed_plus, s),
              DensityTag::rho_pa);
}

DensityField rho_antiparticle(const DensityTerms& t) {
  const Metric s = metric(t.kind);
  const double eps = epsilon(t.kind);
  return make(t,
              t.vacuum_an + sigma_density(t.packet_minus, s) +
                  eps * sigma_density(t.mixed_minus, s),
              DensityTag::rho_an);
}

DensityField rho_cross(const DensityTerms& t) {
  const Metric s = metric(t.kind);
  const double eps = epsilon(t.kind);
  return make(t,
              sigma_cross_density(t.packet_plus, t.packet_minus, s) +
                  eps * sigma_cross_density(t.mixed_plus, t.mixed_minus, s),
              DensityTag::rho_cross);
}

DensityField rho_blind(const DensityTerms& t) {
  Eigen::VectorXd v =
      rho_particle(t).values + rho_antiparticle(t).values + rho_cross(t).values;
  return make(t, std::move(v), DensityTag::rho_blind);
}

DensityField wavepacket_only_density(const DensityTerms& t) {
  Eigen::VectorXd v = rho_blind(t).values - t.vacuum_pa - t.vacuum_an;
  return make(t, std::move(v), DensityTag::rho_blind_free);
}

DensityField packet_particle_density(const DensityTerms& t) {
  return make(t, rho_particle(t).values - t.vacuum_pa, DensityTag::rho_pa_free);
}

DensityField packet_antiparticle_density(const DensityTerms& t) {
  return make(t, rho_antiparticle(t).values - t.vacuum_an,
              DensityTag::rho_an_free);
}

DensityField rho_charge(const DensityTerms& t) {
  const Metric s = metric(t.kind);
  const double eps = epsilon(t.kind);
  // Anti-particle density of the standard field operator: the packet
  // amplitudes enter complex conjugated relative to rho_2.
  const Eigen::VectorXd an = t.vacuum_an + sigma_density(t.charge_minus, s) +
                             eps * sigma_density(t.charge_mixed, s);
  return make(t, rho_particle(t).values + eps * an, DensityTag::rho_ch);
}

DensityField rho_particle(const EvolutionMatrix& u, const PacketSpectrum& s,
                          const ModeBasis& basis) {
  return rho_particle(density_terms(u, s, basis));
}

DensityField rho_antiparticle(const EvolutionMatrix& u, const PacketSpectrum& s,
                              const ModeBasis& basis) {
  return rho_antiparticle(density_terms(u, s, basis));
}

DensityField rho_cross(const EvolutionMatrix& u, const PacketSpectrum& s,
                       const ModeBasis& basis) {
  return rho_cross(density_terms(u, s, basis));
}

DensityField rho_blind(const EvolutionMatrix& u, const PacketSpectrum& s,
                       const ModeBasis& basis) {
  return rho_blind(density_terms(u, s, basis));
}

DensityField wavepacket_only_density(const EvolutionMatrix& u,
                                     const PacketSpectrum& s,
                                     const ModeBasis& basis) {
  return wavepacket_only_density(density_terms(u, s, basis));
}

DensityField rho_charge(const EvolutionMatrix& u, const PacketSpectrum& s,
                        const ModeBasis& basis) {
  return rho_charge(density_terms(u, s, basis));
}

NumberReport number_report(const DensityField& rho_pa,
                           const DensityField& rho_an,
                           const DensityField& rho_blind,
                           const DensityField& rho_cross, FieldKind kind) {
  NumberReport r;
  r.t = rho_pa.t;
  r.N_pa = rho_pa.integral();
  r.N_an = -epsilon(kind) * rho_an.integral();
  r.N_total = r.N_pa + r.N_an;
  r.integral_rho = rho_blind.integral();
  r.integral_rho3 = rho_cross.integral();
  return r;
}

}  // namespace qft1d
