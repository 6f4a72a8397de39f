#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace qft1d {

using cplx = std::complex<double>;

/// Physical constants of a run. hbar is fixed to one; the Compton
/// wavelength is derived.
struct UnitSystem {
  double hbar = 1.0;
  double c = 1.0;
  double m = 1.0;
  std::string name = "compton";

  double compton_wavelength() const { return hbar / (m * c); }
  double rest_energy() const { return m * c * c; }
  /// Time for light to cross one Compton wavelength.
  double compton_time() const { return compton_wavelength() / c; }

  static UnitSystem atomic();   // c = 137.036, m = 1
  static UnitSystem compton();  // c = 1, m = 1
};

/// Pseudo scalar product metric: identity (Dirac) or tau_3 (Klein-Gordon).
enum class Metric { identity, tau3 };

namespace detail {
class Fourier;
}

/// Periodic position lattice x_j = -L/2 + j dx and its Fourier dual
/// p_i = 2 pi hbar (i - N/2) / L, stored in ascending order.
class Grid {
 public:
  Grid(std::size_t n_points, double box_length, UnitSystem units);

  std::size_t size() const { return n_; }
  double box_length() const { return length_; }
  double dx() const { return dx_; }
  double dp() const { return dp_; }
  const UnitSystem& units() const { return units_; }
  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& p() const { return p_; }
  double p_max() const { return p_.cwiseAbs().maxCoeff(); }

  /// Index of momentum p on the lattice; throws ContractViolation when p
  /// is not a lattice momentum.
  std::size_t momentum_index(double p) const;

  /// F_i = sum_j f_j exp(-i p_i x_j / hbar), i in ascending-p order.
  Eigen::VectorXcd to_momentum(const Eigen::VectorXcd& values) const;
  /// Inverse of to_momentum: f_j = (1/N) sum_i F_i exp(i p_i x_j / hbar).
  Eigen::VectorXcd to_position(const Eigen::VectorXcd& spectrum) const;

 private:
  std::size_t n_;
  double length_;
  double dx_;
  double dp_;
  UnitSystem units_;
  Eigen::VectorXd x_;
  Eigen::VectorXd p_;
  std::shared_ptr<detail::Fourier> fourier_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws ConfigError unless n_points is a power of two >= 8 and
/// box_length > 0.
GridPtr make_grid(std::size_t n_points, double box_length, UnitSystem units);

/// Two-component complex field on a grid (Dirac spinor or
/// Feshbach-Villars doublet).
struct SpinorField {
  GridPtr grid;
  Eigen::VectorXcd upper;
  Eigen::VectorXcd lower;

  SpinorField() = default;
  explicit SpinorField(GridPtr g);
  SpinorField(GridPtr g, Eigen::VectorXcd up, Eigen::VectorXcd low);

  std::size_t size() const { return static_cast<std::size_t>(upper.size()); }
  /// Largest |component| over the lattice.
  double max_norm() const;

  SpinorField& operator+=(const SpinorField& other);
  SpinorField& operator-=(const SpinorField& other);
  SpinorField& operator*=(cplx s);
};

SpinorField operator+(SpinorField a, const SpinorField& b);
SpinorField operator-(SpinorField a, const SpinorField& b);
SpinorField operator*(cplx s, SpinorField a);

/// Componentwise spectrum of a field, in the same layout as SpinorField.
struct SpinorSpectrum {
  Eigen::VectorXcd upper;
  Eigen::VectorXcd lower;
};

SpinorSpectrum to_momentum(const SpinorField& f);
SpinorField to_position(GridPtr grid, const SpinorSpectrum& s);

/// sum_x dx f^dagger sigma g.
cplx pseudo_inner(const SpinorField& f, const SpinorField& g, Metric sigma);

/// Same product evaluated from the spectra: (dx / N) sum_p F^dagger sigma G.
cplx pseudo_inner_spectral(const SpinorField& f, const SpinorField& g,
                           Metric sigma);

/// Pointwise f^dagger sigma f.
Eigen::VectorXd sigma_density(const SpinorField& f, Metric sigma);

/// Pointwise 2 Re(f^dagger sigma g).
Eigen::VectorXd sigma_cross_density(const SpinorField& f, const SpinorField& g,
                                    Metric sigma);

void require_same_grid(const SpinorField& f, const SpinorField& g);

}  // namespace qft1d
