#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qft1d/lattice.hpp"
#include "qft1d/modes.hpp"

namespace qft1d {

/// Evolution amplitudes between free modes at time t. Column q of each
/// block holds the expansion coefficients of e^{-iHt} applied to mode q:
///   e^{-iHt} phi_q    = sum_p pp(p,q) phi_p + np(p,q) phibar_p
///   e^{-iHt} phibar_q = sum_p pn(p,q) phi_p + nn(p,q) phibar_p
/// so that pn is U_{phi phibar} and np is U_{phibar phi}.
struct EvolutionMatrix {
  double t = 0.0;
  Eigen::MatrixXcd pp;
  Eigen::MatrixXcd pn;
  Eigen::MatrixXcd np;
  Eigen::MatrixXcd nn;

  std::size_t size() const { return static_cast<std::size_t>(pp.rows()); }
  /// [[pp, pn], [np, nn]].
  Eigen::MatrixXcd full() const;
  static EvolutionMatrix from_full(const Eigen::MatrixXcd& m, double t);
  static EvolutionMatrix identity(std::size_t n);
};

/// Number of steps t / dt; throws ConfigError if dt does not divide t.
std::int64_t step_count(double t, double dt);

/// Strang split-operator propagation of a field under H0 + V:
/// half potential phase, exact kinetic 2x2 exponential per momentum,
/// half potential phase, repeated t/dt times.
SpinorField evolve_field(const SpinorField& psi, const Potential& potential,
                         FieldKind kind, double t, double dt);

/// exp(-i H0(p) dt / hbar) = cos(E dt) - i sin(E dt) H0(p) / E, valid for
/// both field kinds since H0(p)^2 = E^2.
Eigen::Matrix2cd kinetic_propagator(FieldKind kind, double p, double dt,
                                    const UnitSystem& units);

enum class PropagationPath {
  automatic,   // analytic diagonal form when V == 0, split-step otherwise
  split_step,  // always the numerical propagator
};

/// Builds EvolutionMatrix values for one basis, potential and step size.
/// The single-step amplitude matrix is assembled by evolving every basis
/// column for one dt (in parallel); later times are its integer powers,
/// built from cached binary powers S^(2^k) on top of the last result.
class ModePropagator {
 public:
  ModePropagator(const ModeBasis& basis, Potential potential, double dt,
                 PropagationPath path = PropagationPath::automatic);

  EvolutionMatrix at(double t);
  bool analytic() const { return analytic_; }
  double dt() const { return dt_; }

 private:
  EvolutionMatrix free_matrix(double t) const;
  void ensure_step_matrix();
  const Eigen::MatrixXcd& step_power(std::size_t k);

  const ModeBasis& basis_;
  Potential potential_;
  double dt_;
  bool analytic_;
  Eigen::MatrixXcd step_;
  std::vector<Eigen::MatrixXcd> powers_;
  bool have_step_ = false;
  std::int64_t cached_steps_ = 0;
  Eigen::MatrixXcd cached_;
};

EvolutionMatrix build_evolution_matrix(
    const ModeBasis& basis, const Potential& potential, double t, double dt,
    PropagationPath path = PropagationPath::automatic);

/// max |U^dagger G U - G| with G = diag(I, -eps I).
double metric_defect(const EvolutionMatrix& u, FieldKind kind);

/// Default step: largest dt = t_ref / 2^k with (|V|max + 2 E_max) dt <
/// 0.1 hbar, so that dt divides t_ref and its binary fractions. Falls back
/// to the Compton time as t_ref when t_ref <= 0.
double default_time_step(const Grid& grid, double v_max, double t_ref);

}  // namespace qft1d
