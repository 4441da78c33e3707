#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "magicfreq/atomdata.hpp"
#include "magicfreq/half_int.hpp"
#include "magicfreq/lineshape.hpp"

namespace magicfreq {

/// Orientation of a linearly polarized beam relative to the magnetic field
/// (the quantization axis).
struct Geometry {
  /// Angle between B and the wave vector k, rad.
  double theta = 0.0;
  /// Angle between the polarization vector and the B-k plane, rad.
  double phi = 0.0;
};

/// Spherical components of a unit linear polarization vector in the frame
/// where z is along B.
struct PolarizationComponents {
  std::complex<double> minus;  // E_-1
  std::complex<double> zero;   // E_0
  std::complex<double> plus;   // E_+1

  /// |E_q|^2 for q = -1, 0, +1.
  std::array<double, 3> intensities() const;
};

/// E_0 = -sin(theta) cos(phi), E_+-1 = (cos(theta) cos(phi) +- i sin(phi)) / sqrt(2).
PolarizationComponents polarization_components(const Geometry& g);

/// Geometry of the equal-intensity solution |E_+1|^2 = 1/3 at phi = 0,
/// i.e. cos^2(theta) = 2/3.
double magic_angle();

/// Closed detuning interval, Hz.
struct FrequencyRange {
  double lo_hz = 0.0;
  double hi_hz = 0.0;

  void validate() const;
};

/// Relative absorption rates per Zeeman sublevel over a detuning grid.
struct SublevelProfile {
  HalfInt ground_f;
  std::vector<double> detuning_hz;
  /// rates[i][k]: sublevel m = -F + i at detuning_hz[k].
  std::vector<std::vector<double>> rates;
};

/// Delta-Gamma_F on a (theta, detuning) grid; values[i][k] belongs to
/// theta[i] and detuning_hz[k].
struct DeltaGammaSurface {
  std::vector<double> theta;
  std::vector<double> detuning_hz;
  double phi = 0.0;
  double s_f_max = 0.0;
  std::vector<std::vector<double>> values;
};

/// Relative absorption of linearly polarized light from the Zeeman sublevels
/// of one ground hyperfine level F.
///
/// Detunings passed to the methods are the laser detuning Delta_L from the
/// transition to the lowest level of the excited manifold. The detuning of
/// each component is then offset(F') + pressure_shift - Delta_L. Natural,
/// laser and Zeeman widths are neglected; only the Doppler (or Voigt) width
/// enters. All angular factors are tabulated on construction, so the
/// evaluation methods are cheap and safe to call concurrently.
class AbsorptionModel {
 public:
  AbsorptionModel(SpeciesLine line, HalfInt ground_f, BroadeningModel broadening);

  const SpeciesLine& line() const { return line_; }
  HalfInt ground_f() const { return ground_f_; }
  const BroadeningModel& broadening() const { return broadening_; }
  double doppler_sigma_hz() const { return sigma_hz_; }
  /// -F .. F
  const std::vector<HalfInt>& sublevels() const { return sublevels_; }
  std::span<const Transition> transitions() const { return transitions_; }

  /// Broadening weight of every allowed F' (ascending F') at the given laser detuning.
  std::vector<double> component_weights(double detuning_hz) const;

  /// Gamma^rel_m: sum over F' of weight * (2F'+1) {J J' 1; F' F I}^2 *
  /// sum_q |E_-q|^2 <F' m-q; 1 q | F m>^2.
  double gamma_rel(HalfInt m, double detuning_hz, const Geometry& g) const;

  /// gamma_rel for every sublevel, in the order of sublevels().
  std::vector<double> rates(double detuning_hz, const Geometry& g) const;

  /// Frequency-dependent factor of Gamma_m1 - Gamma_m2 once (1 - 3|E_+1|^2)
  /// and (m1^2 - m2^2) are taken out: sum over F' of weight * 6j^2 *
  /// [(3 delta_FF' - 1)(2F'+1) + F - F'] / [2F'(F'+1)], where the fraction
  /// is -1 for F' = 0. Magic frequencies are its zeros.
  double equal_absorption_sum(double detuning_hz) const;

  /// Sublevel-averaged rate (1/(2F+1)) sum_m Gamma^rel_m; independent of
  /// geometry, evaluated at theta = phi = 0.
  double s_f(double detuning_hz) const;

  /// Maximum of s_f over the range: 1 MHz grid, then golden-section
  /// refinement to 1 kHz.
  double s_f_max(const FrequencyRange& range) const;

  /// [max_m Gamma^rel_m - min_m Gamma^rel_m] / s_f_max.
  double delta_gamma(double detuning_hz, const Geometry& g, double s_f_max) const;

  SublevelProfile profile(std::span<const double> detuning_hz, const Geometry& g) const;

  DeltaGammaSurface surface(std::span<const double> theta, std::span<const double> detuning_hz, double phi,
                            double s_f_max) const;

 private:
  struct Channel {
    HalfInt f_excited;
    double offset_hz;
    double six_j_sq;
    /// (2F'+1) {6j}^2
    double strength;
    /// Bracketed fraction of equal_absorption_sum.
    double fraction;
    /// cg_sq[i][q+1] = <F' m-q; 1 q | F m>^2 with m = sublevels_[i].
    std::vector<std::array<double, 3>> cg_sq;
  };

  std::size_t index_of(HalfInt m) const;
  double detuning_of(const Channel& c, double laser_detuning_hz) const;

  SpeciesLine line_;
  HalfInt ground_f_;
  BroadeningModel broadening_;
  double sigma_hz_;
  std::vector<Transition> transitions_;
  std::vector<HalfInt> sublevels_;
  std::vector<Channel> channels_;
};

/// The bracketed fraction of equal_absorption_sum for one (F, F') pair.
double equal_absorption_fraction(HalfInt ground_f, HalfInt excited_f);

// Free-function forms of the AbsorptionModel methods.

double gamma_rel(const SpeciesLine& line, HalfInt ground_f, HalfInt m, double detuning_hz, const Geometry& g,
                 const BroadeningModel& b);
double equal_absorption_sum(const SpeciesLine& line, HalfInt ground_f, double detuning_hz,
                            const BroadeningModel& b);
double s_f(const SpeciesLine& line, HalfInt ground_f, double detuning_hz, const BroadeningModel& b);
double s_f_max(const SpeciesLine& line, HalfInt ground_f, const BroadeningModel& b, const FrequencyRange& range);
double delta_gamma(const SpeciesLine& line, HalfInt ground_f, double detuning_hz, const Geometry& g,
                   const BroadeningModel& b, double s_f_max_value);

/// Evenly spaced grid lo, lo+step, ..., ending at the last point <= hi (hi
/// included when it lies on the grid to within 1e-9 of a step).
std::vector<double> uniform_grid(double lo, double hi, double step);

}  // namespace magicfreq
