#pragma once

#include <Eigen/Dense>

#include "qft1d/modes.hpp"
#include "qft1d/propagation.hpp"
#include "qft1d/wavepackets.hpp"

namespace qft1d {

/// Expectation values in the one-quantum state
///   |chi>> = sum_q (a_q b_q^dagger + c_q d_q^dagger) |0>>,
/// a = g+ sqrt(dp), c = g- sqrt(dp), evolved with the amplitudes U.
/// Every density below is assembled from these fields (sigma-quadratic
/// forms of mode syntheses):
///   WA = sum_q a_q  P+ U phi_q        WD = sum_q c_q  P- U phibar_q
///   L  = sum_q c*_q P+ U phibar_q     K  = sum_q a*_q P- U phi_q
///   SB = sum_q |P+ U phibar_q|^2      SC = sum_q |P- U phi_q|^2
/// where P+/P- keep the positive/negative energy expansion coefficients.
struct DensityTerms {
  double t = 0.0;
  FieldKind kind = FieldKind::dirac;
  GridPtr grid;
  SpinorField packet_plus;       // WA
  SpinorField packet_minus;      // WD
  SpinorField mixed_plus;        // L
  SpinorField mixed_minus;       // K
  SpinorField charge_minus;      // sum c*_q P- U phibar_q
  SpinorField charge_mixed;      // sum a_q P- U phi_q
  Eigen::VectorXd vacuum_pa;     // SB
  Eigen::VectorXd vacuum_an;     // SC
};

DensityTerms density_terms(const EvolutionMatrix& u,
                           const PacketSpectrum& spectrum,
                           const ModeBasis& basis);

/// rho_1 = SB + |WA|^2 + eps |L|^2 (particle density).
DensityField rho_particle(const DensityTerms& terms);
/// rho_2 = SC + |WD|^2 + eps |K|^2 (anti-particle density).
DensityField rho_antiparticle(const DensityTerms& terms);
/// rho_3 = 2 Re(WA^dagger sigma WD) + 2 eps Re(L^dagger sigma K).
DensityField rho_cross(const DensityTerms& terms);
/// rho = rho_1 + rho_2 + rho_3 = <<chi| nu^dagger sigma nu |chi>>.
DensityField rho_blind(const DensityTerms& terms);
/// rho_blind with the vacuum pair-creation terms SB and SC removed.
DensityField wavepacket_only_density(const DensityTerms& terms);
/// rho_1 - SB and rho_2 - SC: the packet-dependent parts of rho_1, rho_2.
DensityField packet_particle_density(const DensityTerms& terms);
DensityField packet_antiparticle_density(const DensityTerms& terms);
/// Particle density minus the anti-particle density of the standard field
/// operator, counted with charge signs; integrates to N_pa - N_an.
DensityField rho_charge(const DensityTerms& terms);

DensityField rho_particle(const EvolutionMatrix& u, const PacketSpectrum& s,
                          const ModeBasis& basis);
DensityField rho_antiparticle(const EvolutionMatrix& u, const PacketSpectrum& s,
                              const ModeBasis& basis);
DensityField rho_cross(const EvolutionMatrix& u, const PacketSpectrum& s,
                       const ModeBasis& basis);
DensityField rho_blind(const EvolutionMatrix& u, const PacketSpectrum& s,
                       const ModeBasis& basis);
DensityField wavepacket_only_density(const EvolutionMatrix& u,
                                     const PacketSpectrum& s,
                                     const ModeBasis& basis);
DensityField rho_charge(const EvolutionMatrix& u, const PacketSpectrum& s,
                        const ModeBasis& basis);

struct NumberReport {
  double t = 0.0;
  double N_pa = 0.0;
  double N_an = 0.0;
  double N_total = 0.0;
  double integral_rho = 0.0;
  double integral_rho3 = 0.0;
};

/// N_pa = int rho_pa, N_an = -eps int rho_an, N_total = N_pa + N_an.
NumberReport number_report(const DensityField& rho_pa,
                           const DensityField& rho_an,
                           const DensityField& rho_blind,
                           const DensityField& rho_cross, FieldKind kind);

}  // namespace qft1d
