#include "magicfreq/magic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace magicfreq {

namespace {

int sign_of(double v) { return (v > 0) - (v < 0); }

// Tolerance used when re-converging roots for the temperature derivative;
// small enough that the difference quotient is clean.
constexpr double kFineToleranceHz = 1e-3;

std::optional<double> follow_root(const AbsorptionModel& model, double guess_hz) {
  const ScalarFunction f = [&model](double x) { return model.equal_absorption_sum(x); };
  for (double half_width = 0.5e6; half_width <= 64e6; half_width *= 2) {
    const double lo = guess_hz - half_width;
    const double hi = guess_hz + half_width;
    if (sign_of(f(lo)) * sign_of(f(hi)) < 0) return bisect(f, lo, hi, kFineToleranceHz);
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::pair<double, double>> sign_change_brackets(const ScalarFunction& f, const FrequencyRange& range,
                                                            double step_hz) {
  range.validate();
  const auto grid = uniform_grid(range.lo_hz, range.hi_hz, step_hz);
  std::vector<std::pair<double, double>> out;
  int last_sign = 0;
  double last_x = 0.0;
  for (double x : grid) {
    const int s = sign_of(f(x));
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) out.emplace_back(last_x, x);
    last_sign = s;
    last_x = x;
  }
  return out;
}

double bisect(const ScalarFunction& f, double lo_hz, double hi_hz, double tolerance_hz) {
  if (lo_hz > hi_hz) std::swap(lo_hz, hi_hz);
  const int s_lo = sign_of(f(lo_hz));
  const int s_hi = sign_of(f(hi_hz));
  if (s_lo == 0) return lo_hz;
  if (s_hi == 0) return hi_hz;
  if (s_lo == s_hi) throw std::invalid_argument("bisect: no sign change in bracket");

  while (hi_hz - lo_hz > tolerance_hz) {
    const double mid = 0.5 * (lo_hz + hi_hz);
    if (mid <= lo_hz || mid >= hi_hz) break;
    const int s = sign_of(f(mid));
    if (s == 0) return mid;
    if (s == s_lo)
      lo_hz = mid;
    else
      hi_hz = mid;
  }
  return 0.5 * (lo_hz + hi_hz);
}

std::vector<Geometry> window_geometry_sample() {
  std::vector<Geometry> out;
  constexpr double pi = std::numbers::pi;
  for (int i = 0; i < 32; ++i) {
    const double theta = i * pi / 32;
    const double c = std::cos(theta);
    if (std::abs(c * c - 2.0 / 3.0) <= 0.05) continue;
    for (int j = 0; j < 16; ++j) out.push_back({theta, j * pi / 16});
  }
  return out;
}

double robustness_window(const AbsorptionModel& model, double root_hz, double s_f_max_value, double threshold,
                         double step_hz, double limit_hz) {
  if (!(step_hz > 0)) throw std::invalid_argument("robustness_window: step must be positive");
  const auto geometries = window_geometry_sample();
  auto worst = [&](double detuning) {
    double w = 0.0;
    for (const Geometry& g : geometries) w = std::max(w, model.delta_gamma(detuning, g, s_f_max_value));
    return w;
  };

  if (!(worst(root_hz) < threshold)) return 0.0;
  double accepted = 0.0;
  for (int k = 1;; ++k) {
    const double delta = k * step_hz;
    if (delta > limit_hz) break;
    if (!(worst(root_hz - delta) < threshold) || !(worst(root_hz + delta) < threshold)) break;
    accepted = delta;
  }
  return accepted;
}

double robustness_window(const SpeciesLine& line, HalfInt ground_f, const BroadeningModel& b, double root_hz,
                         double threshold) {
  const AbsorptionModel model(line, ground_f, b);
  const double norm = model.s_f_max({root_hz - 1e9, root_hz + 1e9});
  return robustness_window(model, root_hz, norm, threshold);
}

double temperature_sensitivity(const SpeciesLine& line, HalfInt ground_f, const BroadeningModel& b, double root_hz,
                               double temperature_step_k, std::string* diagnostic) {
  if (!(temperature_step_k > 0) || !(b.temperature_k - temperature_step_k > 0))
    throw std::invalid_argument("temperature_sensitivity: step must be positive and below T");

  const AbsorptionModel cooler(line, ground_f, b.at_temperature(b.temperature_k - temperature_step_k));
  const AbsorptionModel warmer(line, ground_f, b.at_temperature(b.temperature_k + temperature_step_k));
  const auto r_cool = follow_root(cooler, root_hz);
  const auto r_warm = follow_root(warmer, root_hz);
  if (!r_cool || !r_warm) {
    if (diagnostic)
      *diagnostic = "root near " + std::to_string(root_hz * 1e-6) + " MHz lost at T " +
                    (r_cool ? "+ " : "- ") + std::to_string(temperature_step_k) + " K";
    return std::numeric_limits<double>::quiet_NaN();
  }
  return (*r_warm - *r_cool) / (2.0 * temperature_step_k);
}

std::vector<MagicFrequencyResult> find_magic_frequencies(const SpeciesLine& line, HalfInt ground_f,
                                                         const BroadeningModel& b, const FrequencyRange& scan,
                                                         const MagicSearchOptions& options) {
  scan.validate();
  const AbsorptionModel model(line, ground_f, b);
  const ScalarFunction f = [&model](double x) { return model.equal_absorption_sum(x); };

  const auto brackets = sign_change_brackets(f, scan, options.grid_step_hz);
  std::vector<MagicFrequencyResult> results;
  if (brackets.empty()) return results;

  const double norm = model.s_f_max(scan);
  for (const auto& [lo, hi] : brackets) {
    MagicFrequencyResult r;
    r.bracket_hz = {lo, hi};
    r.detuning_hz = bisect(f, lo, hi, options.tolerance_hz);
    r.s_f = model.s_f(r.detuning_hz);
    r.window_halfwidth_hz = robustness_window(model, r.detuning_hz, norm, options.window_threshold,
                                              options.window_step_hz, options.window_limit_hz);
    // Below 2 K the +-1 K difference would reach T <= 0; shrink the step instead.
    const double t_step = std::min(options.temperature_step_k, 0.5 * b.temperature_k);
    r.temp_sensitivity_hz_per_k = temperature_sensitivity(line, ground_f, b, r.detuning_hz, t_step, &r.diagnostic);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace magicfreq
