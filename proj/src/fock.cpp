#include "qft1d/fock.hpp"

#include <random>

#include "qft1d/error.hpp"

namespace qft1d {

std::string to_string(Statistics s) {
  return s == Statistics::fermi ? "fermi" : "bose";
}

FockSpace::FockSpace(std::size_t n_modes, Statistics statistics,
                     std::size_t max_occupancy)
    : n_modes_(n_modes), statistics_(statistics), max_occupancy_(max_occupancy) {
  if (n_modes == 0) throw ContractViolation("Fock space needs at least one mode");
  if (statistics == Statistics::fermi && max_occupancy != 1) {
    throw ContractViolation("fermi statistics require max_occupancy = 1");
  }
  if (max_occupancy == 0) throw ContractViolation("max_occupancy must be positive");
  const std::size_t radix = max_occupancy + 1;
  dim_ = 1;
  stride_.resize(2 * n_modes);
  for (std::size_t k = 0; k < 2 * n_modes; ++k) {
    stride_[k] = dim_;
    if (dim_ > (std::size_t{1} << 24) / radix) {
      throw ContractViolation("Fock space too large");
    }
    dim_ *= radix;
  }
}

std::size_t FockSpace::slot(std::size_t mode, Species species) const {
  if (mode >= n_modes_) throw ContractViolation("mode index out of range");
  return species == Species::particle ? mode : n_modes_ + mode;
}

std::size_t FockSpace::occupancy(std::size_t state, std::size_t s) const {
  return (state / stride_[s]) % (max_occupancy_ + 1);
}

std::vector<std::size_t> FockSpace::occupancies(std::size_t state) const {
  std::vector<std::size_t> occ(slots());
  for (std::size_t s = 0; s < slots(); ++s) occ[s] = occupancy(state, s);
  return occ;
}

std::size_t FockSpace::index(const std::vector<std::size_t>& occ) const {
  if (occ.size() != slots()) throw ContractViolation("occupancy tuple has wrong length");
  std::size_t i = 0;
  for (std::size_t s = 0; s < slots(); ++s) {
    if (occ[s] > max_occupancy_) throw ContractViolation("occupancy above truncation");
    i += occ[s] * stride_[s];
  }
  return i;
}

std::size_t FockSpace::total_occupancy(std::size_t state) const {
  std::size_t n = 0;
  for (std::size_t s = 0; s < slots(); ++s) n += occupancy(state, s);
  return n;
}

long FockSpace::charge(std::size_t state) const {
  long q = 0;
  for (std::size_t k = 0; k < n_modes_; ++k) {
    q += static_cast<long>(occupancy(state, k));
    q -= static_cast<long>(occupancy(state, n_modes_ + k));
  }
  return q;
}

bool FockSpace::admissible(std::size_t state) const {
  return statistics_ == Statistics::fermi || total_occupancy(state) < max_occupancy_;
}

namespace {

const FockSpace& same_space(const FockOperator& a, const FockOperator& b) {
  if (a.space != b.space || a.space == nullptr) {
    throw ContractViolation("operators act on different Fock spaces");
  }
  return *a.space;
}

}  // namespace

FockOperator FockOperator::adjoint() const {
  return {space, SparseMatrixC(matrix.adjoint())};
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  return {&same_space(a, b), SparseMatrixC(a.matrix + b.matrix)};
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  return {&same_space(a, b), SparseMatrixC(a.matrix - b.matrix)};
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  return {&same_space(a, b), SparseMatrixC(a.matrix * b.matrix)};
}

FockOperator operator*(cplx s, const FockOperator& a) {
  return {a.space, SparseMatrixC(s * a.matrix)};
}

FockOperator identity_operator(const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  SparseMatrixC m(d, d);
  m.setIdentity();
  return {&space, m};
}

FockOperator zero_operator(const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  return {&space, SparseMatrixC(d, d)};
}

FockOperator build_ladder(const FockSpace& space, std::size_t mode,
                          Species species, Ladder kind) {
  const std::size_t s = space.slot(mode, species);
  const bool fermi = space.statistics() == Statistics::fermi;
  std::vector<Eigen::Triplet<cplx>> entries;
  for (std::size_t state = 0; state < space.dim(); ++state) {
    auto occ = space.occupancies(state);
    const std::size_t n = occ[s];
    double amp = 0.0;
    if (kind == Ladder::create) {
      if (n == space.max_occupancy()) continue;
      amp = std::sqrt(static_cast<double>(n + 1));
      occ[s] = n + 1;
    } else {
      if (n == 0) continue;
      amp = std::sqrt(static_cast<double>(n));
      occ[s] = n - 1;
    }
    if (fermi) {
      std::size_t below = 0;
      for (std::size_t k = 0; k < s; ++k) below += occ[k];
      if (below % 2 == 1) amp = -amp;
    }
    entries.emplace_back(static_cast<Eigen::Index>(space.index(occ)),
                         static_cast<Eigen::Index>(state), cplx(amp, 0.0));
  }
  const auto d = static_cast<Eigen::Index>(space.dim());
  SparseMatrixC m(d, d);
  m.setFromTriplets(entries.begin(), entries.end());
  return {&space, m};
}

namespace {

void require_coefficients(const FockSpace& space, const Eigen::VectorXcd& a,
                          const Eigen::VectorXcd& b) {
  const auto n = static_cast<Eigen::Index>(space.n_modes());
  if (a.size() != n || b.size() != n) {
    throw ContractViolation("need one coefficient per mode");
  }
}

FockOperator linear_combination(const FockSpace& space,
                                const Eigen::VectorXcd& c1, Ladder kind1,
                                const Eigen::VectorXcd& c2, Ladder kind2) {
  require_coefficients(space, c1, c2);
  FockOperator op = zero_operator(space);
  for (std::size_t p = 0; p < space.n_modes(); ++p) {
    const auto i = static_cast<Eigen::Index>(p);
    if (c1[i] != cplx(0.0)) {
      op = op + c1[i] * build_ladder(space, p, Species::particle, kind1);
    }
    if (c2[i] != cplx(0.0)) {
      op = op + c2[i] * build_ladder(space, p, Species::antiparticle, kind2);
    }
  }
  return op;
}

}  // namespace

FockOperator build_nu_dagger(const FockSpace& space,
                             const Eigen::VectorXcd& coeffs_phi,
                             const Eigen::VectorXcd& coeffs_phibar) {
  return linear_combination(space, coeffs_phi, Ladder::create, coeffs_phibar,
                            Ladder::create);
}

FockOperator build_field_dagger(const FockSpace& space,
                                const Eigen::VectorXcd& c1,
                                const Eigen::VectorXcd& c2) {
  return linear_combination(space, c1, Ladder::create, c2, Ladder::annihilate);
}

namespace {

// Diagonal operator with entry f(state).
template <class F>
FockOperator diagonal(const FockSpace& space, F f) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  std::vector<Eigen::Triplet<cplx>> entries;
  for (std::size_t s = 0; s < space.dim(); ++s) {
    const double v = f(s);
    if (v != 0.0) {
      const auto i = static_cast<Eigen::Index>(s);
      entries.emplace_back(i, i, cplx(v, 0.0));
    }
  }
  SparseMatrixC m(d, d);
  m.setFromTriplets(entries.begin(), entries.end());
  return {&space, m};
}

FockOperator occupation_sum(const FockSpace& space, double particle_sign,
                            double antiparticle_sign) {
  FockOperator op = zero_operator(space);
  for (std::size_t p = 0; p < space.n_modes(); ++p) {
    const auto bd = build_ladder(space, p, Species::particle, Ladder::create);
    const auto dd = build_ladder(space, p, Species::antiparticle, Ladder::create);
    op = op + cplx(particle_sign) * (bd * bd.adjoint());
    op = op + cplx(antiparticle_sign) * (dd * dd.adjoint());
  }
  return op;
}

// max over admissible basis states of the column norm of `defect`.
AlgebraReport column_report(const FockSpace& space, const FockOperator& defect,
                            std::string check, double tolerance) {
  AlgebraReport r;
  r.check = std::move(check);
  r.space = to_string(space.statistics()) + " n_modes=" +
            std::to_string(space.n_modes()) +
            " max_occupancy=" + std::to_string(space.max_occupancy());
  r.tolerance = tolerance;
  for (std::size_t s = 0; s < space.dim(); ++s) {
    if (!space.admissible(s)) continue;
    ++r.states_checked;
    const double d = defect.matrix.col(static_cast<Eigen::Index>(s)).norm();
    r.max_defect = std::max(r.max_defect, d);
    if (!(d < tolerance)) r.violating_states.push_back(s);
  }
  return r;
}

}  // namespace

FockOperator number_operator(const FockSpace& space) {
  return occupation_sum(space, 1.0, 1.0);
}

FockOperator charge_operator(const FockSpace& space) {
  return occupation_sum(space, 1.0, -1.0);
}

AlgebraReport check_number_raising(const FockSpace& space,
                                   const FockOperator& nu_dagger,
                                   double tolerance) {
  const auto n = number_operator(space);
  const auto one = identity_operator(space);
  const auto defect = n * nu_dagger - nu_dagger * (n + one);
  return column_report(space, defect, "number_raising", tolerance);
}

AlgebraReport check_charge_raising(const FockSpace& space,
                                   const FockOperator& psi_dagger,
                                   double tolerance) {
  const auto q = charge_operator(space);
  const auto one = identity_operator(space);
  const auto defect = q * psi_dagger - psi_dagger * (q + one);
  return column_report(space, defect, "charge_raising", tolerance);
}

AlgebraReport check_canonical_relations(const FockSpace& space,
                                        double tolerance) {
  AlgebraReport r;
  r.check = space.statistics() == Statistics::fermi ? "anticommutators"
                                                    : "commutators";
  r.space = to_string(space.statistics()) + " n_modes=" +
            std::to_string(space.n_modes()) +
            " max_occupancy=" + std::to_string(space.max_occupancy());
  r.tolerance = tolerance;
  const bool fermi = space.statistics() == Statistics::fermi;
  const double sign = fermi ? 1.0 : -1.0;
  std::vector<FockOperator> ann;
  for (auto species : {Species::particle, Species::antiparticle}) {
    for (std::size_t p = 0; p < space.n_modes(); ++p) {
      ann.push_back(build_ladder(space, p, species, Ladder::annihilate));
    }
  }
  const auto one = identity_operator(space);
  for (std::size_t i = 0; i < ann.size(); ++i) {
    for (std::size_t j = 0; j < ann.size(); ++j) {
      const auto& a = ann[i];
      const auto ad = ann[j].adjoint();
      FockOperator rel = a * ad + cplx(sign) * (ad * a);
      if (i == j) rel = rel - one;
      const auto aa = a * ann[j] + cplx(sign) * (ann[j] * a);
      for (std::size_t s = 0; s < space.dim(); ++s) {
        // Bose relations only hold where slot j can still be raised.
        if (!fermi && space.occupancy(s, j) >= space.max_occupancy()) continue;
        ++r.states_checked;
        const auto col = static_cast<Eigen::Index>(s);
        const double d = std::max(rel.matrix.col(col).norm(), aa.matrix.col(col).norm());
        r.max_defect = std::max(r.max_defect, d);
        if (!(d < tolerance)) r.violating_states.push_back(s);
      }
    }
  }
  return r;
}

std::vector<AlgebraReport> run_algebra_suite(unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto coeffs = [&](std::size_t n) {
    Eigen::VectorXcd c(static_cast<Eigen::Index>(n));
    for (auto& v : c) v = cplx(gauss(rng), gauss(rng));
    return c;
  };
  struct Case {
    std::size_t n_modes;
    Statistics stats;
    std::size_t max_occ;
  };
  const std::vector<Case> cases = {{1, Statistics::fermi, 1},
                                   {2, Statistics::fermi, 1},
                                   {3, Statistics::fermi, 1},
                                   {2, Statistics::bose, 3}};
  std::vector<AlgebraReport> reports;
  for (const auto& c : cases) {
    FockSpace space(c.n_modes, c.stats, c.max_occ);
    reports.push_back(check_canonical_relations(space));
    reports.push_back(check_number_raising(
        space, build_nu_dagger(space, coeffs(c.n_modes), coeffs(c.n_modes))));
    reports.push_back(check_charge_raising(
        space, build_field_dagger(space, coeffs(c.n_modes), coeffs(c.n_modes))));
  }
  return reports;
}

}  // namespace qft1d
