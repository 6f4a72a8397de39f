#include "qft1d/propagation.hpp"

#include <cmath>
#include <vector>

#include "qft1d/error.hpp"

namespace qft1d {

Eigen::MatrixXcd EvolutionMatrix::full() const {
  const auto n = pp.rows();
  Eigen::MatrixXcd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = pp;
  m.topRightCorner(n, n) = pn;
  m.bottomLeftCorner(n, n) = np;
  m.bottomRightCorner(n, n) = nn;
  return m;
}

EvolutionMatrix EvolutionMatrix::from_full(const Eigen::MatrixXcd& m, double t) {
  const auto n = m.rows() / 2;
  return {t, m.topLeftCorner(n, n), m.topRightCorner(n, n),
          m.bottomLeftCorner(n, n), m.bottomRightCorner(n, n)};
}

EvolutionMatrix EvolutionMatrix::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return {0.0, Eigen::MatrixXcd::Identity(k, k), Eigen::MatrixXcd::Zero(k, k),
          Eigen::MatrixXcd::Zero(k, k), Eigen::MatrixXcd::Identity(k, k)};
}

std::int64_t step_count(double t, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (t < 0.0) throw ConfigError("evolution time must be non-negative");
  const double ratio = t / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("time step does not divide the evolution time");
  }
  return static_cast<std::int64_t>(n);
}

Eigen::Matrix2cd kinetic_propagator(FieldKind kind, double p, double dt,
                                    const UnitSystem& units) {
  const double e = energy(p, Branch::positive, units);
  const double phase = e * dt / units.hbar;
  return std::cos(phase) * Eigen::Matrix2cd::Identity() -
         cplx(0.0, std::sin(phase) / e) * free_hamiltonian(kind, p, units);
}

namespace {

std::vector<Eigen::Matrix2cd> kinetic_table(const Grid& grid, FieldKind kind,
                                            double dt) {
  std::vector<Eigen::Matrix2cd> table(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table[i] = kinetic_propagator(kind, grid.p()[static_cast<Eigen::Index>(i)],
                                  dt, grid.units());
  }
  return table;
}

void apply_kinetic(SpinorField& f, const std::vector<Eigen::Matrix2cd>& table) {
  auto s = to_momentum(f);
  for (Eigen::Index i = 0; i < s.upper.size(); ++i) {
    const auto& k = table[static_cast<std::size_t>(i)];
    const cplx up = s.upper[i];
    const cplx low = s.lower[i];
    s.upper[i] = k(0, 0) * up + k(0, 1) * low;
    s.lower[i] = k(1, 0) * up + k(1, 1) * low;
  }
  f.upper = f.grid->to_position(s.upper);
  f.lower = f.grid->to_position(s.lower);
}

void apply_phase(SpinorField& f, const Eigen::VectorXcd& phase) {
  f.upper.array() *= phase.array();
  f.lower.array() *= phase.array();
}

}  // namespace

SpinorField evolve_field(const SpinorField& psi, const Potential& potential,
                         FieldKind kind, double t, double dt) {
  const auto steps = step_count(t, dt);
  SpinorField f = psi;
  if (steps == 0) return f;
  if (potential.values.size() != static_cast<Eigen::Index>(psi.size())) {
    throw ContractViolation("potential does not live on the field grid");
  }
  const auto& grid = *psi.grid;
  const double hbar = grid.units().hbar;
  const auto table = kinetic_table(grid, kind, dt);
  const bool with_potential = !potential.is_zero();
  Eigen::VectorXcd half;
  Eigen::VectorXcd full;
  if (with_potential) {
    half = potential.values.unaryExpr(
        [&](double v) { return std::polar(1.0, -0.5 * v * dt / hbar); });
    full = half.cwiseProduct(half);
    apply_phase(f, half);
  }
  for (std::int64_t s = 0; s < steps; ++s) {
    apply_kinetic(f, table);
    if (with_potential) apply_phase(f, s + 1 < steps ? full : half);
  }
  return f;
}

ModePropagator::ModePropagator(const ModeBasis& basis, Potential potential,
                               double dt, PropagationPath path)
    : basis_(basis),
      potential_(std::move(potential)),
      dt_(dt),
      analytic_(path == PropagationPath::automatic && potential_.is_zero()) {
  if (!(dt_ > 0.0)) throw ConfigError("time step must be positive");
  if (potential_.values.size() != static_cast<Eigen::Index>(basis_.size())) {
    throw ContractViolation("potential does not live on the basis grid");
  }
}

EvolutionMatrix ModePropagator::free_matrix(double t) const {
  const double hbar = basis_.grid().units().hbar;
  const Eigen::VectorXcd minus = basis_.abs_energy().unaryExpr(
      [&](double e) { return std::polar(1.0, -e * t / hbar); });
  const auto n = static_cast<Eigen::Index>(basis_.size());
  EvolutionMatrix u;
  u.t = t;
  u.pp = minus.asDiagonal();
  u.nn = minus.conjugate().asDiagonal();
  u.pn = Eigen::MatrixXcd::Zero(n, n);
  u.np = Eigen::MatrixXcd::Zero(n, n);
  return u;
}

void ModePropagator::ensure_step_matrix() {
  if (have_step_) return;
  const auto n = static_cast<Eigen::Index>(basis_.size());
  step_.resize(2 * n, 2 * n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index col = 0; col < 2 * n; ++col) {
    const Branch b = col < n ? Branch::positive : Branch::negative;
    const auto i = static_cast<std::size_t>(col < n ? col : col - n);
    const auto evolved = evolve_field(basis_.mode_field(b, i), potential_,
                                      basis_.kind(), dt_, dt_);
    const auto e = basis_.expand(evolved);
    step_.col(col).head(n) = e.positive;
    step_.col(col).tail(n) = e.negative;
  }
  have_step_ = true;
  cached_steps_ = 0;
  cached_ = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
}

const Eigen::MatrixXcd& ModePropagator::step_power(std::size_t k) {
  if (powers_.empty()) powers_.push_back(step_);
  while (powers_.size() <= k) {
    Eigen::MatrixXcd sq;
    sq.noalias() = powers_.back() * powers_.back();
    powers_.push_back(std::move(sq));
  }
  return powers_[k];
}

EvolutionMatrix ModePropagator::at(double t) {
  const auto steps = step_count(t, dt_);
  if (analytic_) return free_matrix(t);
  ensure_step_matrix();
  if (steps < cached_steps_) {
    cached_steps_ = 0;
    cached_.setIdentity();
  }
  // Multiply in the binary powers S^(2^k) of the remaining step count.
  auto remaining = steps - cached_steps_;
  Eigen::MatrixXcd tmp;
  for (std::size_t k = 0; remaining > 0; ++k, remaining >>= 1) {
    if (remaining & 1) {
      tmp.noalias() = step_power(k) * cached_;
      cached_.swap(tmp);
    }
  }
  cached_steps_ = steps;
  return EvolutionMatrix::from_full(cached_, t);
}

EvolutionMatrix build_evolution_matrix(const ModeBasis& basis,
                                       const Potential& potential, double t,
                                       double dt, PropagationPath path) {
  ModePropagator prop(basis, potential, dt, path);
  return prop.at(t);
}

double metric_defect(const EvolutionMatrix& u, FieldKind kind) {
  const auto full = u.full();
  const auto n = u.pp.rows();
  Eigen::VectorXd g(2 * n);
  g.head(n).setOnes();
  g.tail(n).setConstant(-static_cast<double>(epsilon(kind)));
  const Eigen::MatrixXcd gm = g.cast<cplx>().asDiagonal();
  const Eigen::MatrixXcd defect = full.adjoint() * gm * full - gm;
  return defect.cwiseAbs().maxCoeff();
}

double default_time_step(const Grid& grid, double v_max, double t_ref) {
  const auto& u = grid.units();
  const double e_max = energy(grid.p_max(), Branch::positive, u);
  const double scale = std::abs(v_max) + 2.0 * e_max;
  double dt = t_ref > 0.0 ? t_ref : u.compton_time();
  while (scale * dt / u.hbar >= 0.1) dt *= 0.5;
  return dt;
}

}  // namespace qft1d
