#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qft1d/lattice.hpp"

namespace qft1d {

enum class FieldKind { dirac, klein_gordon };

/// -1 for Dirac (fermions), +1 for Klein-Gordon (bosons).
constexpr int epsilon(FieldKind kind) {
  return kind == FieldKind::dirac ? -1 : 1;
}

constexpr Metric metric(FieldKind kind) {
  return kind == FieldKind::dirac ? Metric::identity : Metric::tau3;
}

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& name);

enum class Branch { positive, negative };

/// +-sqrt(p^2 c^2 + m^2 c^4).
double energy(double p, Branch branch, const UnitSystem& units);

/// Free-Hamiltonian plane wave. The lattice wavefunction is
/// <x|mode> = spinor * exp(i p x / hbar) / sqrt(L).
struct Mode {
  double p = 0.0;
  Branch branch = Branch::positive;
  double energy = 0.0;
  Eigen::Vector2cd spinor = Eigen::Vector2cd::Zero();
};

/// Momentum-space free Hamiltonians.
Eigen::Matrix2cd dirac_hamiltonian(double p, const UnitSystem& units);
Eigen::Matrix2cd kg_hamiltonian(double p, const UnitSystem& units);
Eigen::Matrix2cd free_hamiltonian(FieldKind kind, double p,
                                  const UnitSystem& units);

/// Eigenmode of c sigma_1 p + sigma_3 m c^2, unit Euclidean norm.
Mode dirac_mode(double p, Branch branch, const Grid& grid);

/// Eigenmode of the Feshbach-Villars matrix (p^2/2m)(tau_3 + i tau_2) +
/// m c^2 tau_3, with tau_3-norm +1 (positive) or -1 (negative).
Mode kg_mode(double p, Branch branch, const Grid& grid);

/// Full set of positive and negative energy modes on a lattice, one per
/// lattice momentum in ascending order. The pseudo-norm of a positive mode
/// is +1 and of a negative mode -epsilon, so expansion coefficients of a
/// field are sigma-projections scaled by those signs.
class ModeBasis {
 public:
  ModeBasis(FieldKind kind, GridPtr grid);

  FieldKind kind() const { return kind_; }
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return pos_.size(); }

  const std::vector<Mode>& positive_modes() const { return pos_; }
  const std::vector<Mode>& negative_modes() const { return neg_; }
  const Mode& mode(Branch b, std::size_t i) const {
    return b == Branch::positive ? pos_[i] : neg_[i];
  }
  /// sigma-norm of a mode of the given branch: +1 or -epsilon.
  double norm_sign(Branch b) const;

  /// |E_p| for every lattice momentum.
  const Eigen::VectorXd& abs_energy() const { return abs_energy_; }

  SpinorField mode_field(Branch b, std::size_t i) const;

  /// sum_i pos_i phi_i(x) + neg_i phibar_i(x).
  SpinorField synthesize(const Eigen::VectorXcd& pos,
                         const Eigen::VectorXcd& neg) const;
  SpinorField synthesize_positive(const Eigen::VectorXcd& pos) const;
  SpinorField synthesize_negative(const Eigen::VectorXcd& neg) const;

  struct Expansion {
    Eigen::VectorXcd positive;
    Eigen::VectorXcd negative;
  };
  /// Inverse of synthesize.
  Expansion expand(const SpinorField& f) const;

  /// Raw sigma-projections <mode_i, f>_sigma, no norm-sign scaling.
  Expansion project(const SpinorField& f) const;

 private:
  FieldKind kind_;
  GridPtr grid_;
  std::vector<Mode> pos_;
  std::vector<Mode> neg_;
  Eigen::VectorXd abs_energy_;
};

struct StepParameters {
  double V0 = 0.0;
  double d = 0.0;
  double alpha = 1.0;
};

/// Static background potential sampled on the grid. Enters both
/// Hamiltonians as V(x) times the 2x2 identity.
struct Potential {
  GridPtr grid;
  Eigen::VectorXd values;
  StepParameters descriptor;

  bool is_zero() const { return values.size() == 0 || values.isZero(0.0); }
  double max_abs() const {
    return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  }

  static Potential zero(GridPtr grid);
  static Potential constant(GridPtr grid, double value);
};

/// V(x) = V0 (1 + tanh((x - d) / alpha)) / 2. Throws ConfigError for
/// alpha <= 0.
Potential tanh_step(GridPtr grid, double V0, double d, double alpha);

/// V0 > 2 m c^2.
bool is_supercritical(double V0, const UnitSystem& units);

}  // namespace qft1d
