#include "qft1d/modes.hpp"

#include <cmath>

#include "qft1d/error.hpp"

namespace qft1d {

std::string to_string(FieldKind kind) {
  return kind == FieldKind::dirac ? "dirac" : "klein_gordon";
}

FieldKind field_kind_from_string(const std::string& name) {
  if (name == "dirac") return FieldKind::dirac;
  if (name == "klein_gordon" || name == "kg") return FieldKind::klein_gordon;
  throw ConfigError("unknown field kind '" + name + "'");
}

double energy(double p, Branch branch, const UnitSystem& units) {
  const double pc = p * units.c;
  const double mc2 = units.rest_energy();
  const double e = std::sqrt(pc * pc + mc2 * mc2);
  return branch == Branch::positive ? e : -e;
}

Eigen::Matrix2cd dirac_hamiltonian(double p, const UnitSystem& units) {
  const double mc2 = units.rest_energy();
  const double cp = units.c * p;
  Eigen::Matrix2cd h;
  h << mc2, cp, cp, -mc2;
  return h;
}

Eigen::Matrix2cd kg_hamiltonian(double p, const UnitSystem& units) {
  const double mc2 = units.rest_energy();
  const double k = p * p / (2.0 * units.m);
  // tau_3 + i tau_2 = [[1, 1], [-1, -1]]
  Eigen::Matrix2cd h;
  h << k + mc2, k, -k, -k - mc2;
  return h;
}

Eigen::Matrix2cd free_hamiltonian(FieldKind kind, double p,
                                  const UnitSystem& units) {
  return kind == FieldKind::dirac ? dirac_hamiltonian(p, units)
                                  : kg_hamiltonian(p, units);
}

Mode dirac_mode(double p, Branch branch, const Grid& grid) {
  grid.momentum_index(p);
  const auto& u = grid.units();
  const double mc2 = u.rest_energy();
  const double cp = u.c * p;
  const double e = energy(p, Branch::positive, u);
  const double norm = std::sqrt(2.0 * e * (e + mc2));
  Mode mode;
  mode.p = p;
  mode.branch = branch;
  mode.energy = energy(p, branch, u);
  if (branch == Branch::positive) {
    mode.spinor << (mc2 + e) / norm, cp / norm;
  } else {
    mode.spinor << -cp / norm, (mc2 + e) / norm;
  }
  return mode;
}

Mode kg_mode(double p, Branch branch, const Grid& grid) {
  grid.momentum_index(p);
  const auto& u = grid.units();
  const double mc2 = u.rest_energy();
  const double signed_e = energy(p, branch, u);
  const double norm = 2.0 * std::sqrt(mc2 * std::abs(signed_e));
  Mode mode;
  mode.p = p;
  mode.branch = branch;
  mode.energy = signed_e;
  mode.spinor << (mc2 + signed_e) / norm, (mc2 - signed_e) / norm;
  return mode;
}

ModeBasis::ModeBasis(FieldKind kind, GridPtr grid)
    : kind_(kind), grid_(std::move(grid)) {
  const std::size_t n = grid_->size();
  pos_.resize(n);
  neg_.resize(n);
  abs_energy_.resize(static_cast<Eigen::Index>(n));
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const double p = grid_->p()[static_cast<Eigen::Index>(i)];
    if (kind_ == FieldKind::dirac) {
      pos_[i] = dirac_mode(p, Branch::positive, *grid_);
      neg_[i] = dirac_mode(p, Branch::negative, *grid_);
    } else {
      pos_[i] = kg_mode(p, Branch::positive, *grid_);
      neg_[i] = kg_mode(p, Branch::negative, *grid_);
    }
    abs_energy_[static_cast<Eigen::Index>(i)] = pos_[i].energy;
  }
}

double ModeBasis::norm_sign(Branch b) const {
  return b == Branch::positive ? 1.0 : -static_cast<double>(epsilon(kind_));
}

SpinorField ModeBasis::mode_field(Branch b, std::size_t i) const {
  Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size()));
  coeff[static_cast<Eigen::Index>(i)] = 1.0;
  return b == Branch::positive ? synthesize_positive(coeff)
                               : synthesize_negative(coeff);
}

SpinorField ModeBasis::synthesize(const Eigen::VectorXcd& pos,
                                  const Eigen::VectorXcd& neg) const {
  const auto n = static_cast<Eigen::Index>(size());
  if (pos.size() != n || neg.size() != n) {
    throw ContractViolation("coefficient vectors do not match the basis size");
  }
  const double scale =
      static_cast<double>(n) / std::sqrt(grid_->box_length());
  SpinorSpectrum s{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& up = pos_[static_cast<std::size_t>(i)].spinor;
    const auto& un = neg_[static_cast<std::size_t>(i)].spinor;
    s.upper[i] = scale * (pos[i] * up[0] + neg[i] * un[0]);
    s.lower[i] = scale * (pos[i] * up[1] + neg[i] * un[1]);
  }
  return to_position(grid_, s);
}

SpinorField ModeBasis::synthesize_positive(const Eigen::VectorXcd& pos) const {
  return synthesize(pos, Eigen::VectorXcd::Zero(pos.size()));
}

SpinorField ModeBasis::synthesize_negative(const Eigen::VectorXcd& neg) const {
  return synthesize(Eigen::VectorXcd::Zero(neg.size()), neg);
}

ModeBasis::Expansion ModeBasis::project(const SpinorField& f) const {
  if (f.size() != size()) {
    throw ContractViolation("field does not live on the basis grid");
  }
  const auto s = to_momentum(f);
  const auto n = static_cast<Eigen::Index>(size());
  const double scale = grid_->dx() / std::sqrt(grid_->box_length());
  const double low = metric(kind_) == Metric::tau3 ? -1.0 : 1.0;
  Expansion e{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& up = pos_[static_cast<std::size_t>(i)].spinor;
    const auto& un = neg_[static_cast<std::size_t>(i)].spinor;
    e.positive[i] = scale * (std::conj(up[0]) * s.upper[i] +
                             low * std::conj(up[1]) * s.lower[i]);
    e.negative[i] = scale * (std::conj(un[0]) * s.upper[i] +
                             low * std::conj(un[1]) * s.lower[i]);
  }
  return e;
}

ModeBasis::Expansion ModeBasis::expand(const SpinorField& f) const {
  auto e = project(f);
  e.negative *= norm_sign(Branch::negative);
  return e;
}

Potential Potential::zero(GridPtr grid) {
  Potential v;
  v.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->size()));
  v.grid = std::move(grid);
  return v;
}

Potential Potential::constant(GridPtr grid, double value) {
  Potential v;
  v.values = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid->size()), value);
  v.descriptor.V0 = value;
  v.grid = std::move(grid);
  return v;
}

Potential tanh_step(GridPtr grid, double V0, double d, double alpha) {
  if (!(alpha > 0.0)) {
    throw ConfigError("step smoothness alpha must be positive");
  }
  Potential v;
  v.descriptor = {V0, d, alpha};
  v.values = grid->x().unaryExpr([&](double x) {
    return 0.5 * V0 * (1.0 + std::tanh((x - d) / alpha));
  });
  v.grid = std::move(grid);
  return v;
}

bool is_supercritical(double V0, const UnitSystem& units) {
  return V0 > 2.0 * units.rest_energy();
}

}  // namespace qft1d
