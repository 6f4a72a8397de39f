#include "qft1d/lattice.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "qft1d/error.hpp"

namespace qft1d {

namespace detail {

// FFTW plans for one transform length. Planning is serialized (the FFTW
// planner is not reentrant); execution through fftw_execute_dft on caller
// buffers is thread-safe.
class Fourier {
 public:
  explicit Fourier(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
  }
  ~Fourier() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  Fourier(const Fourier&) = delete;
  Fourier& operator=(const Fourier&) = delete;

  void forward(const cplx* in, cplx* out) const { run(forward_, in, out); }
  void backward(const cplx* in, cplx* out) const { run(backward_, in, out); }

 private:
  static void run(fftw_plan plan, const cplx* in, cplx* out) {
    // fftw_complex is layout-compatible with std::complex<double>.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  std::size_t n_;
  fftw_plan forward_{};
  fftw_plan backward_{};
};

}  // namespace detail

UnitSystem UnitSystem::atomic() {
  return UnitSystem{1.0, 137.036, 1.0, "atomic"};
}

UnitSystem UnitSystem::compton() {
  return UnitSystem{1.0, 1.0, 1.0, "compton"};
}

Grid::Grid(std::size_t n_points, double box_length, UnitSystem units)
    : n_(n_points),
      length_(box_length),
      dx_(box_length / static_cast<double>(n_points)),
      dp_(2.0 * std::numbers::pi * units.hbar / box_length),
      units_(std::move(units)),
      x_(static_cast<Eigen::Index>(n_points)),
      p_(static_cast<Eigen::Index>(n_points)),
      fourier_(std::make_shared<detail::Fourier>(n_points)) {
  const auto half = static_cast<double>(n_ / 2);
  for (std::size_t j = 0; j < n_; ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    x_[i] = -0.5 * length_ + static_cast<double>(j) * dx_;
    p_[i] = (static_cast<double>(j) - half) * dp_;
  }
}

std::size_t Grid::momentum_index(double p) const {
  const double shifted = p / dp_ + static_cast<double>(n_ / 2);
  const double idx = std::round(shifted);
  if (idx < 0 || idx >= static_cast<double>(n_) ||
      std::abs(shifted - idx) > 1e-9 * std::max(1.0, std::abs(shifted))) {
    throw ContractViolation("momentum is not on the lattice");
  }
  return static_cast<std::size_t>(idx);
}

// With x_0 = -L/2, exp(-i p_n x_j) = (-1)^n exp(-2 pi i n j / N): the
// lattice spectrum is the FFT with a sign flip on odd n and a shift of
// the zero momentum to index N/2.
Eigen::VectorXcd Grid::to_momentum(const Eigen::VectorXcd& values) const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::VectorXcd buf(n);
  fourier_->forward(values.data(), buf.data());
  Eigen::VectorXcd out(n);
  const Eigen::Index half = n / 2;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = (i - half + n) % n;
    const bool odd = ((i - half) & 1) != 0;
    out[i] = odd ? -buf[k] : buf[k];
  }
  return out;
}

Eigen::VectorXcd Grid::to_position(const Eigen::VectorXcd& spectrum) const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::VectorXcd buf(n);
  const Eigen::Index half = n / 2;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = (i - half + n) % n;
    const bool odd = ((i - half) & 1) != 0;
    buf[k] = odd ? -spectrum[i] : spectrum[i];
  }
  Eigen::VectorXcd out(n);
  fourier_->backward(buf.data(), out.data());
  out /= static_cast<double>(n);
  return out;
}

GridPtr make_grid(std::size_t n_points, double box_length, UnitSystem units) {
  if (n_points < 8 || (n_points & (n_points - 1)) != 0) {
    throw ConfigError("grid n_points must be a power of two >= 8, got " +
                      std::to_string(n_points));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw ConfigError("grid box_length must be positive");
  }
  if (!(units.c > 0.0) || !(units.m > 0.0)) {
    throw ConfigError("unit system needs positive c and m");
  }
  return std::make_shared<const Grid>(n_points, box_length, std::move(units));
}

SpinorField::SpinorField(GridPtr g)
    : grid(std::move(g)),
      upper(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid->size()))),
      lower(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid->size()))) {}

SpinorField::SpinorField(GridPtr g, Eigen::VectorXcd up, Eigen::VectorXcd low)
    : grid(std::move(g)), upper(std::move(up)), lower(std::move(low)) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  if (upper.size() != n || lower.size() != n) {
    throw ContractViolation("spinor components do not match the grid size");
  }
}

double SpinorField::max_norm() const {
  return std::max(upper.cwiseAbs().maxCoeff(), lower.cwiseAbs().maxCoeff());
}

void require_same_grid(const SpinorField& f, const SpinorField& g) {
  if (f.grid != g.grid &&
      (!f.grid || !g.grid || f.grid->size() != g.grid->size() ||
       f.grid->box_length() != g.grid->box_length())) {
    throw ContractViolation("fields live on different grids");
  }
}

SpinorField& SpinorField::operator+=(const SpinorField& other) {
  require_same_grid(*this, other);
  upper += other.upper;
  lower += other.lower;
  return *this;
}

SpinorField& SpinorField::operator-=(const SpinorField& other) {
  require_same_grid(*this, other);
  upper -= other.upper;
  lower -= other.lower;
  return *this;
}

SpinorField& SpinorField::operator*=(cplx s) {
  upper *= s;
  lower *= s;
  return *this;
}

SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
SpinorField operator*(cplx s, SpinorField a) { return a *= s; }

SpinorSpectrum to_momentum(const SpinorField& f) {
  return {f.grid->to_momentum(f.upper), f.grid->to_momentum(f.lower)};
}

SpinorField to_position(GridPtr grid, const SpinorSpectrum& s) {
  auto up = grid->to_position(s.upper);
  auto low = grid->to_position(s.lower);
  return SpinorField(std::move(grid), std::move(up), std::move(low));
}

namespace {
double lower_sign(Metric sigma) { return sigma == Metric::tau3 ? -1.0 : 1.0; }
}  // namespace

cplx pseudo_inner(const SpinorField& f, const SpinorField& g, Metric sigma) {
  require_same_grid(f, g);
  const cplx sum = f.upper.dot(g.upper) + lower_sign(sigma) * f.lower.dot(g.lower);
  return f.grid->dx() * sum;
}

cplx pseudo_inner_spectral(const SpinorField& f, const SpinorField& g,
                           Metric sigma) {
  require_same_grid(f, g);
  const auto fs = to_momentum(f);
  const auto gs = to_momentum(g);
  const cplx sum =
      fs.upper.dot(gs.upper) + lower_sign(sigma) * fs.lower.dot(gs.lower);
  return f.grid->dx() / static_cast<double>(f.size()) * sum;
}

Eigen::VectorXd sigma_density(const SpinorField& f, Metric sigma) {
  return f.upper.cwiseAbs2() + lower_sign(sigma) * f.lower.cwiseAbs2();
}

Eigen::VectorXd sigma_cross_density(const SpinorField& f, const SpinorField& g,
                                    Metric sigma) {
  require_same_grid(f, g);
  const Eigen::VectorXcd up = f.upper.conjugate().cwiseProduct(g.upper);
  const Eigen::VectorXcd low = f.lower.conjugate().cwiseProduct(g.lower);
  return 2.0 * (up.real() + lower_sign(sigma) * low.real());
}

}  // namespace qft1d
