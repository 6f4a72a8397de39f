#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qft1d/lattice.hpp"

namespace qft1d {

enum class Statistics { fermi, bose };
enum class Species { particle, antiparticle };
enum class Ladder { create, annihilate };

std::string to_string(Statistics s);

/// Occupancy-truncated Fock space over n particle modes b_0..b_{n-1} and n
/// anti-particle modes d_0..d_{n-1}. A basis state is a tuple of 2n
/// occupancies; slot k < n is b_k, slot n + k is d_k. Index encoding is
/// mixed radix with slot 0 least significant.
class FockSpace {
 public:
  FockSpace(std::size_t n_modes, Statistics statistics,
            std::size_t max_occupancy = 1);

  std::size_t n_modes() const { return n_modes_; }
  Statistics statistics() const { return statistics_; }
  std::size_t max_occupancy() const { return max_occupancy_; }
  std::size_t dim() const { return dim_; }
  std::size_t slots() const { return 2 * n_modes_; }

  std::size_t slot(std::size_t mode, Species species) const;
  std::size_t occupancy(std::size_t state, std::size_t slot) const;
  std::vector<std::size_t> occupancies(std::size_t state) const;
  std::size_t index(const std::vector<std::size_t>& occupancies) const;
  std::size_t total_occupancy(std::size_t state) const;
  /// Net charge: particle occupancies minus anti-particle occupancies.
  long charge(std::size_t state) const;
  /// States on which raising by one quantum stays inside the truncation
  /// (every state for fermi; total occupancy < max_occupancy for bose).
  bool admissible(std::size_t state) const;
  std::size_t vacuum() const { return 0; }

 private:
  std::size_t n_modes_;
  Statistics statistics_;
  std::size_t max_occupancy_;
  std::size_t dim_;
  std::vector<std::size_t> stride_;
};

using SparseMatrixC = Eigen::SparseMatrix<cplx>;

struct FockOperator {
  const FockSpace* space = nullptr;
  SparseMatrixC matrix;

  FockOperator adjoint() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return matrix * v; }
};

FockOperator operator+(const FockOperator& a, const FockOperator& b);
FockOperator operator-(const FockOperator& a, const FockOperator& b);
FockOperator operator*(const FockOperator& a, const FockOperator& b);
FockOperator operator*(cplx s, const FockOperator& a);

FockOperator identity_operator(const FockSpace& space);
FockOperator zero_operator(const FockSpace& space);

/// Ladder operator for one mode. Fermi operators carry Jordan-Wigner signs
/// (-1)^(occupied slots below) so that anticommutators are exact.
FockOperator build_ladder(const FockSpace& space, std::size_t mode,
                          Species species, Ladder kind);

/// sum_p (coeffs_phi[p] b_p^dagger + coeffs_phibar[p] d_p^dagger).
FockOperator build_nu_dagger(const FockSpace& space,
                             const Eigen::VectorXcd& coeffs_phi,
                             const Eigen::VectorXcd& coeffs_phibar);

/// sum_p (c1[p] b_p^dagger + c2[p] d_p): creates a particle or removes an
/// anti-particle, raising the charge by one.
FockOperator build_field_dagger(const FockSpace& space,
                                const Eigen::VectorXcd& c1,
                                const Eigen::VectorXcd& c2);

/// sum_p (b_p^dagger b_p + d_p^dagger d_p).
FockOperator number_operator(const FockSpace& space);
/// sum_p (b_p^dagger b_p - d_p^dagger d_p).
FockOperator charge_operator(const FockSpace& space);

struct AlgebraReport {
  std::string check;
  std::string space;
  double max_defect = 0.0;
  std::size_t states_checked = 0;
  std::vector<std::size_t> violating_states;
  double tolerance = 1e-13;

  bool passed() const { return violating_states.empty() && states_checked > 0; }
};

/// Max over admissible basis states s of |(N nu^dagger - nu^dagger (N + 1)) e_s|.
AlgebraReport check_number_raising(const FockSpace& space,
                                   const FockOperator& nu_dagger,
                                   double tolerance = 1e-13);
/// Same with Q and the charge-raising field operator.
AlgebraReport check_charge_raising(const FockSpace& space,
                                   const FockOperator& psi_dagger,
                                   double tolerance = 1e-13);
/// CAR (fermi) or CCR (bose, states where the mode is below truncation)
/// between every pair of ladder operators of the same species.
AlgebraReport check_canonical_relations(const FockSpace& space,
                                        double tolerance = 1e-13);

/// Default battery: fermi n_modes 1..3 and bose n_modes 2 with
/// max_occupancy 3, fixed pseudo-random complex coefficients.
std::vector<AlgebraReport> run_algebra_suite(unsigned long seed = 20240611UL);

}  // namespace qft1d
