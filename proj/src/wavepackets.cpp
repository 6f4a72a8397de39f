#include "qft1d/wavepackets.hpp"

#include <cmath>
#include <numbers>

#include "qft1d/error.hpp"

namespace qft1d {

double PacketSpec::support_lo() const {
  return x0 - 0.5 * std::numbers::pi * width;
}

double PacketSpec::support_hi() const {
  return x0 + 0.5 * std::numbers::pi * width;
}

PacketSpectrum PacketSpectrum::vacuum(const ModeBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  return {Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n), basis.kind(),
          basis.grid().dp()};
}

double PacketSpectrum::normalization() const {
  return dp * (g_plus.squaredNorm() - epsilon(kind) * g_minus.squaredNorm());
}

double PacketSpectrum::fock_norm() const {
  return dp * (g_plus.squaredNorm() + g_minus.squaredNorm());
}

bool PacketSpectrum::is_vacuum() const {
  return g_plus.isZero(0.0) && g_minus.isZero(0.0);
}

PacketSpectrum PacketSpectrum::only_plus() const {
  PacketSpectrum s = *this;
  s.g_minus.setZero();
  return s;
}

PacketSpectrum PacketSpectrum::only_minus() const {
  PacketSpectrum s = *this;
  s.g_plus.setZero();
  return s;
}

SpinorField build_packet(const PacketSpec& spec, GridPtr grid,
                         [[maybe_unused]] FieldKind kind) {
  if (!(spec.width > 0.0)) {
    throw ConfigError("packet width D must be positive");
  }
  const double lo = spec.support_lo();
  const double hi = spec.support_hi();
  const double half_box = 0.5 * grid->box_length();
  if (!(lo > -half_box + grid->dx()) || !(hi < half_box - grid->dx())) {
    throw ConfigError("packet support must lie strictly inside the box");
  }
  const auto& x = grid->x();
  const double hbar = grid->units().hbar;
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] <= lo || x[j] >= hi) continue;
    const double c = std::cos((x[j] - spec.x0) / spec.width);
    const double c2 = c * c;
    const double c4 = c2 * c2;
    g[j] = c4 * c4 * std::polar(1.0, spec.p0 * x[j] / hbar);
  }
  const double norm = std::sqrt(grid->dx() * g.squaredNorm());
  g /= norm;
  SpinorField psi(grid);
  if (spec.charge_row == ChargeRow::upper) {
    psi.upper = g;
  } else {
    psi.lower = g;
  }
  return psi;
}

PacketSpectrum decompose(const SpinorField& psi, const ModeBasis& basis) {
  const auto e = basis.expand(psi);
  const double dp = basis.grid().dp();
  const double s = 1.0 / std::sqrt(dp);
  return {e.positive * s, e.negative * s, basis.kind(), dp};
}

namespace {

Eigen::VectorXcd phases(const ModeBasis& basis, double t, double sign) {
  const double hbar = basis.grid().units().hbar;
  return basis.abs_energy().unaryExpr(
      [&](double e) { return std::polar(1.0, sign * e * t / hbar); });
}

}  // namespace

SpinorField evolve_first_quantized_plus(const PacketSpectrum& spectrum,
                                        const ModeBasis& basis, double t) {
  return basis.synthesize_positive(
      spectrum.plus_amplitudes().cwiseProduct(phases(basis, t, -1.0)));
}

SpinorField evolve_first_quantized_minus(const PacketSpectrum& spectrum,
                                         const ModeBasis& basis, double t) {
  return basis.synthesize_negative(
      spectrum.minus_amplitudes().cwiseProduct(phases(basis, t, +1.0)));
}

SpinorField evolve_first_quantized(const PacketSpectrum& spectrum,
                                   const ModeBasis& basis, double t) {
  return basis.synthesize(
      spectrum.plus_amplitudes().cwiseProduct(phases(basis, t, -1.0)),
      spectrum.minus_amplitudes().cwiseProduct(phases(basis, t, +1.0)));
}

std::string to_string(DensityTag tag) {
  switch (tag) {
    case DensityTag::rho_pa: return "rho_pa";
    case DensityTag::rho_an: return "rho_an";
    case DensityTag::rho_ch: return "rho_ch";
    case DensityTag::rho_blind: return "rho_blind";
    case DensityTag::rho_blind_free: return "rho_blind_free";
    case DensityTag::rho_pa_free: return "rho_pa_free";
    case DensityTag::rho_an_free: return "rho_an_free";
    case DensityTag::rho_cross: return "rho_cross";
    case DensityTag::first_quantized: return "first_quantized";
  }
  return "unknown";
}

DensityTag density_tag_from_string(const std::string& name) {
  for (auto tag : {DensityTag::rho_pa, DensityTag::rho_an, DensityTag::rho_ch,
                   DensityTag::rho_blind, DensityTag::rho_blind_free,
                   DensityTag::rho_pa_free, DensityTag::rho_an_free,
                   DensityTag::rho_cross, DensityTag::first_quantized}) {
    if (to_string(tag) == name) return tag;
  }
  throw ConfigError("unknown density tag '" + name + "'");
}

double DensityField::integral() const { return grid->dx() * values.sum(); }

double DensityField::integral_abs() const {
  return grid->dx() * values.cwiseAbs().sum();
}

double DensityField::peak() const { return values.cwiseAbs().maxCoeff(); }

double DensityField::max_outside(double lo, double hi) const {
  const auto& x = grid->x();
  double m = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] < lo || x[j] > hi) m = std::max(m, std::abs(values[j]));
  }
  return m;
}

double DensityField::centroid() const {
  const Eigen::VectorXd w = values.cwiseAbs();
  return grid->x().dot(w) / w.sum();
}

DensityField first_quantized_density(const SpinorField& psi, FieldKind kind,
                                     double t) {
  return {psi.grid, sigma_density(psi, metric(kind)),
          DensityTag::first_quantized, t};
}

}  // namespace qft1d
