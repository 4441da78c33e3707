#include "magicfreq/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "magicfreq/angular.hpp"

namespace magicfreq {

std::array<double, 3> PolarizationComponents::intensities() const {
  return {std::norm(minus), std::norm(zero), std::norm(plus)};
}

PolarizationComponents polarization_components(const Geometry& g) {
  const double ct = std::cos(g.theta), st = std::sin(g.theta);
  const double cp = std::cos(g.phi), sp = std::sin(g.phi);
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return {
      std::complex<double>(ct * cp, -sp) * inv_sqrt2,
      std::complex<double>(-st * cp, 0.0),
      std::complex<double>(ct * cp, sp) * inv_sqrt2,
  };
}

double magic_angle() { return std::acos(std::sqrt(2.0 / 3.0)); }

void FrequencyRange::validate() const {
  if (!std::isfinite(lo_hz) || !std::isfinite(hi_hz) || !(lo_hz < hi_hz))
    throw std::invalid_argument("frequency range must satisfy lo < hi");
}

double equal_absorption_fraction(HalfInt ground_f, HalfInt excited_f) {
  if (excited_f.twice() == 0) return -1.0;
  const double f = ground_f.value();
  const double fp = excited_f.value();
  const double kron = (ground_f == excited_f) ? 1.0 : 0.0;
  return ((3.0 * kron - 1.0) * (2.0 * fp + 1.0) + f - fp) / (2.0 * fp * (fp + 1.0));
}

AbsorptionModel::AbsorptionModel(SpeciesLine line, HalfInt ground_f, BroadeningModel broadening)
    : line_(std::move(line)),
      ground_f_(ground_f),
      broadening_(broadening),
      sigma_hz_(0.0),
      transitions_(transitions_from(line_, ground_f)),
      sublevels_(projections(ground_f)) {
  broadening_.validate();
  sigma_hz_ = doppler_sigma(line_.frequency_hz, broadening_.temperature_k, line_.mass_kg);

  for (const Transition& t : transitions_) {
    Channel c;
    c.f_excited = t.f_excited;
    c.offset_hz = t.offset_hz;
    const double six_j = wigner6j(line_.ground_j, line_.excited_j, 1, t.f_excited, ground_f_, line_.nuclear_spin);
    c.six_j_sq = six_j * six_j;
    c.strength = (t.f_excited.twice() + 1) * c.six_j_sq;
    c.fraction = equal_absorption_fraction(ground_f_, t.f_excited);
    c.cg_sq.reserve(sublevels_.size());
    for (HalfInt m : sublevels_) {
      std::array<double, 3> row{};
      for (int q = -1; q <= 1; ++q) {
        // Only m' = m - q couples |F m> to |F' m'> through the q component.
        const HalfInt m_excited = m - HalfInt(q);
        if (abs(m_excited) > t.f_excited) continue;
        const double cg = clebsch_gordan(t.f_excited, m_excited, 1, q, ground_f_, m);
        row[static_cast<std::size_t>(q + 1)] = cg * cg;
      }
      c.cg_sq.push_back(row);
    }
    channels_.push_back(std::move(c));
  }
}

std::size_t AbsorptionModel::index_of(HalfInt m) const {
  if (!same_parity(ground_f_, m) || abs(m) > ground_f_)
    throw std::invalid_argument("m_F=" + m.to_string() + " is not a sublevel of F=" + ground_f_.to_string());
  return static_cast<std::size_t>((m + ground_f_).twice() / 2);
}

double AbsorptionModel::detuning_of(const Channel& c, double laser_detuning_hz) const {
  return c.offset_hz + broadening_.pressure_shift_hz - laser_detuning_hz;
}

std::vector<double> AbsorptionModel::component_weights(double detuning_hz) const {
  std::vector<double> w;
  w.reserve(channels_.size());
  for (const Channel& c : channels_) w.push_back(line_weight(broadening_, detuning_of(c, detuning_hz), sigma_hz_));
  return w;
}

double AbsorptionModel::gamma_rel(HalfInt m, double detuning_hz, const Geometry& g) const {
  const std::size_t i = index_of(m);
  const auto intensity = polarization_components(g).intensities();
  double total = 0.0;
  for (const Channel& c : channels_) {
    const auto& cg = c.cg_sq[i];
    // |E_-q|^2 multiplies the channel driven by q.
    const double angular = intensity[2] * cg[0] + intensity[1] * cg[1] + intensity[0] * cg[2];
    total += line_weight(broadening_, detuning_of(c, detuning_hz), sigma_hz_) * c.strength * angular;
  }
  return total;
}

std::vector<double> AbsorptionModel::rates(double detuning_hz, const Geometry& g) const {
  const auto intensity = polarization_components(g).intensities();
  const auto weights = component_weights(detuning_hz);
  std::vector<double> out(sublevels_.size(), 0.0);
  for (std::size_t k = 0; k < channels_.size(); ++k) {
    const Channel& c = channels_[k];
    const double scale = weights[k] * c.strength;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& cg = c.cg_sq[i];
      out[i] += scale * (intensity[2] * cg[0] + intensity[1] * cg[1] + intensity[0] * cg[2]);
    }
  }
  return out;
}

double AbsorptionModel::equal_absorption_sum(double detuning_hz) const {
  double total = 0.0;
  for (const Channel& c : channels_)
    total += line_weight(broadening_, detuning_of(c, detuning_hz), sigma_hz_) * c.six_j_sq * c.fraction;
  return total;
}

double AbsorptionModel::s_f(double detuning_hz) const {
  const auto r = rates(detuning_hz, Geometry{0.0, 0.0});
  double sum = 0.0;
  for (double v : r) sum += v;
  return sum / static_cast<double>(r.size());
}

double AbsorptionModel::s_f_max(const FrequencyRange& range) const {
  range.validate();
  constexpr double grid_step = 1e6;
  constexpr double tolerance = 1e3;

  const auto grid = uniform_grid(range.lo_hz, range.hi_hz, grid_step);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = s_f(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  // Golden-section search on the cells adjacent to the best grid point.
  double a = std::max(range.lo_hz, grid[best] - grid_step);
  double b = std::min(range.hi_hz, grid[best] + grid_step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = s_f(x1), f2 = s_f(x2);
  while (b - a > tolerance) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = s_f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = s_f(x1);
    }
  }
  return std::max({best_value, f1, f2});
}

double AbsorptionModel::delta_gamma(double detuning_hz, const Geometry& g, double s_f_max) const {
  if (!(s_f_max > 0)) throw std::invalid_argument("delta_gamma: S_F^M must be positive");
  const auto r = rates(detuning_hz, g);
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  return (*hi - *lo) / s_f_max;
}

SublevelProfile AbsorptionModel::profile(std::span<const double> detuning_hz, const Geometry& g) const {
  SublevelProfile p;
  p.ground_f = ground_f_;
  p.detuning_hz.assign(detuning_hz.begin(), detuning_hz.end());
  p.rates.assign(sublevels_.size(), std::vector<double>(detuning_hz.size()));
  for (std::size_t k = 0; k < detuning_hz.size(); ++k) {
    const auto r = rates(detuning_hz[k], g);
    for (std::size_t i = 0; i < r.size(); ++i) p.rates[i][k] = r[i];
  }
  return p;
}

DeltaGammaSurface AbsorptionModel::surface(std::span<const double> theta, std::span<const double> detuning_hz,
                                           double phi, double s_f_max) const {
  if (theta.empty() || detuning_hz.empty()) throw std::invalid_argument("surface: empty grid");
  DeltaGammaSurface s;
  s.theta.assign(theta.begin(), theta.end());
  s.detuning_hz.assign(detuning_hz.begin(), detuning_hz.end());
  s.phi = phi;
  s.s_f_max = s_f_max;
  s.values.assign(theta.size(), std::vector<double>(detuning_hz.size()));
  for (std::size_t i = 0; i < theta.size(); ++i)
    for (std::size_t k = 0; k < detuning_hz.size(); ++k)
      s.values[i][k] = delta_gamma(detuning_hz[k], Geometry{theta[i], phi}, s_f_max);
  return s;
}

double gamma_rel(const SpeciesLine& line, HalfInt ground_f, HalfInt m, double detuning_hz, const Geometry& g,
                 const BroadeningModel& b) {
  return AbsorptionModel(line, ground_f, b).gamma_rel(m, detuning_hz, g);
}

double equal_absorption_sum(const SpeciesLine& line, HalfInt ground_f, double detuning_hz,
                            const BroadeningModel& b) {
  return AbsorptionModel(line, ground_f, b).equal_absorption_sum(detuning_hz);
}

double s_f(const SpeciesLine& line, HalfInt ground_f, double detuning_hz, const BroadeningModel& b) {
  return AbsorptionModel(line, ground_f, b).s_f(detuning_hz);
}

double s_f_max(const SpeciesLine& line, HalfInt ground_f, const BroadeningModel& b, const FrequencyRange& range) {
  return AbsorptionModel(line, ground_f, b).s_f_max(range);
}

double delta_gamma(const SpeciesLine& line, HalfInt ground_f, double detuning_hz, const Geometry& g,
                   const BroadeningModel& b, double s_f_max_value) {
  return AbsorptionModel(line, ground_f, b).delta_gamma(detuning_hz, g, s_f_max_value);
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0) || !std::isfinite(step)) throw std::invalid_argument("grid step must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) throw std::invalid_argument("grid requires lo <= hi");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

}  // namespace magicfreq
