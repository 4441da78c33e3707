#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "magicfreq/absorption.hpp"

namespace magicfreq {

/// A zero of the equal-absorption sum and how robust it is.
struct MagicFrequencyResult {
  double detuning_hz = 0.0;
  /// S_F at the root (relative units).
  double s_f = 0.0;
  /// Largest delta with Delta-Gamma_F below threshold over the geometry
  /// sample for every detuning within root +- delta.
  double window_halfwidth_hz = 0.0;
  /// d(root)/dT; NaN when the root could not be followed to T +- 1 K.
  double temp_sensitivity_hz_per_k = 0.0;
  /// Grid cell in which the sign change was found.
  std::pair<double, double> bracket_hz{0.0, 0.0};
  /// Empty unless something was degraded (e.g. root lost under perturbation).
  std::string diagnostic;
};

struct MagicSearchOptions {
  double grid_step_hz = 1e6;
  /// Bisection stops below this bracket width. 1 kHz is enough to locate a root;
  /// the default goes further so that sublevel rates agree to ~1e-12 at the result.
  double tolerance_hz = 1e-3;
  double window_threshold = 0.01;
  double window_step_hz = 0.1e6;
  /// The window search gives up beyond this halfwidth.
  double window_limit_hz = 200e6;
  /// Temperature step of the central difference, K.
  double temperature_step_k = 1.0;
};

using ScalarFunction = std::function<double(double)>;

/// Cells [x_i, x_j] of a uniform grid over `range` across which f changes
/// sign. Samples where f is exactly zero (e.g. underflowed far wings) carry
/// no sign; a bracket then spans from the last signed sample to the next.
std::vector<std::pair<double, double>> sign_change_brackets(const ScalarFunction& f, const FrequencyRange& range,
                                                            double step_hz);

/// Bisection on a bracket with a sign change until the bracket is narrower
/// than tolerance_hz (or cannot shrink further). Returns the midpoint.
/// Throws std::invalid_argument when f(lo) and f(hi) have the same strict sign.
double bisect(const ScalarFunction& f, double lo_hz, double hi_hz, double tolerance_hz);

/// Deterministic geometry sample for the robustness window: theta = i pi/32
/// (i < 32), phi = j pi/16 (j < 16), minus points with |cos^2(theta) - 2/3| <= 0.05.
std::vector<Geometry> window_geometry_sample();

/// All magic frequencies in the scan range, ascending. An empty result means
/// no sign change was found. Throws std::invalid_argument for a degenerate range.
std::vector<MagicFrequencyResult> find_magic_frequencies(const SpeciesLine& line, HalfInt ground_f,
                                                         const BroadeningModel& b, const FrequencyRange& scan,
                                                         const MagicSearchOptions& options = {});

/// Central difference of the root position over T +- step, each side
/// re-converged by bisection. NaN when the root cannot be followed;
/// `diagnostic` (if given) then says why.
double temperature_sensitivity(const SpeciesLine& line, HalfInt ground_f, const BroadeningModel& b,
                               double root_hz, double temperature_step_k = 1.0,
                               std::string* diagnostic = nullptr);

/// Largest halfwidth (multiple of step_hz) for which Delta-Gamma_F stays
/// below threshold at every detuning within root +- halfwidth, maximized over
/// window_geometry_sample(). S_F^M is taken from `s_f_max_value`.
double robustness_window(const AbsorptionModel& model, double root_hz, double s_f_max_value,
                         double threshold = 0.01, double step_hz = 0.1e6, double limit_hz = 200e6);

/// Same, with S_F^M taken over root +- 1 GHz.
double robustness_window(const SpeciesLine& line, HalfInt ground_f, const BroadeningModel& b, double root_hz,
                         double threshold = 0.01);

}  // namespace magicfreq
