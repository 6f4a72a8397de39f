#pragma once

#include <string>

#include <Eigen/Dense>

#include "qft1d/lattice.hpp"
#include "qft1d/modes.hpp"

namespace qft1d {

enum class ChargeRow { upper, lower };

/// cos^8 packet G(x) = cos^8((x - x0)/D) exp(i p0 x / hbar) on
/// [x0 - D pi/2, x0 + D pi/2], placed in one spinor row.
struct PacketSpec {
  double x0 = 0.0;
  double width = 1.0;  // D
  double p0 = 0.0;
  ChargeRow charge_row = ChargeRow::upper;

  double support_lo() const;
  double support_hi() const;
};

/// Positive/negative energy amplitudes over the momentum lattice, in
/// continuum normalization: sum |g+|^2 dp - eps sum |g-|^2 dp equals the
/// sigma-norm of the field. The matching discrete expansion coefficients
/// are g * sqrt(dp).
struct PacketSpectrum {
  Eigen::VectorXcd g_plus;
  Eigen::VectorXcd g_minus;
  FieldKind kind = FieldKind::dirac;
  double dp = 1.0;

  static PacketSpectrum vacuum(const ModeBasis& basis);

  Eigen::VectorXcd plus_amplitudes() const { return g_plus * std::sqrt(dp); }
  Eigen::VectorXcd minus_amplitudes() const { return g_minus * std::sqrt(dp); }

  /// sum |g+|^2 dp - eps sum |g-|^2 dp.
  double normalization() const;
  /// <<chi|chi>> of the Fock state sum (g+ b^dagger + g- d^dagger)|0>>.
  double fock_norm() const;
  bool is_vacuum() const;

  PacketSpectrum only_plus() const;
  PacketSpectrum only_minus() const;
};

/// Normalized so that |pseudo_inner(psi, psi)| = 1 under the metric of
/// `kind`. Values outside the support are exactly zero. Throws ConfigError
/// if the support does not lie strictly inside the box.
SpinorField build_packet(const PacketSpec& spec, GridPtr grid, FieldKind kind);

/// g+ = <phi_p, psi>_sigma, g- = -eps <phibar_p, psi>_sigma, both divided
/// by sqrt(dp).
PacketSpectrum decompose(const SpinorField& psi, const ModeBasis& basis);

/// sum g+ e^{-iEt} phi_p + sum g- e^{+iEt} phibar_p (free evolution).
SpinorField evolve_first_quantized(const PacketSpectrum& spectrum,
                                   const ModeBasis& basis, double t);

/// Positive- and negative-energy parts of the first-quantized evolution.
SpinorField evolve_first_quantized_plus(const PacketSpectrum& spectrum,
                                        const ModeBasis& basis, double t);
SpinorField evolve_first_quantized_minus(const PacketSpectrum& spectrum,
                                         const ModeBasis& basis, double t);

enum class DensityTag {
  rho_pa,
  rho_an,
  rho_ch,
  rho_blind,
  rho_blind_free,  // packet-only part of rho_blind (pair terms removed)
  rho_pa_free,     // rho_pa without the vacuum pair term
  rho_an_free,     // rho_an without the vacuum pair term
  rho_cross,
  first_quantized,
};

std::string to_string(DensityTag tag);
DensityTag density_tag_from_string(const std::string& name);

/// Real density sampled on a grid.
struct DensityField {
  GridPtr grid;
  Eigen::VectorXd values;
  DensityTag tag = DensityTag::first_quantized;
  double t = 0.0;

  /// sum_x dx value.
  double integral() const;
  double integral_abs() const;
  double peak() const;
  /// max |value| over lattice points with x < lo or x > hi.
  double max_outside(double lo, double hi) const;
  /// sum x |value| / sum |value|.
  double centroid() const;
};

/// r = psi^dagger sigma psi.
DensityField first_quantized_density(const SpinorField& psi, FieldKind kind,
                                     double t = 0.0);

}  // namespace qft1d
