#pragma once

#include <complex>

namespace magicfreq {

enum class BroadeningKind { doppler, voigt };

/// Spectral broadening of every hyperfine component of a line.
struct BroadeningModel {
  BroadeningKind kind = BroadeningKind::doppler;
  double temperature_k = 295.0;
  /// Lorentzian half width at half maximum (Voigt only), Hz.
  double lorentz_hwhm_hz = 0.0;
  /// Added to every transition frequency of the line (Voigt only), Hz.
  double pressure_shift_hz = 0.0;

  static BroadeningModel doppler(double temperature_k);
  static BroadeningModel voigt(double temperature_k, double lorentz_hwhm_hz, double pressure_shift_hz);

  /// Same model at a different temperature.
  BroadeningModel at_temperature(double temperature_k) const;

  /// Throws std::invalid_argument on T <= 0, gamma < 0, or a Doppler model
  /// carrying Lorentzian width or shift.
  void validate() const;
};

/// Gaussian standard deviation of the Doppler profile, f * sqrt(k_B T / m c^2), in Hz.
double doppler_sigma(double optical_frequency_hz, double temperature_k, double mass_kg);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0.
///
/// Poppe & Wijers, ACM TOMS 16 (1990) 38, Algorithm 680: power series near
/// the origin, truncated Taylor expansion (Gautschi) in the intermediate
/// region and Laplace continued fraction outside. About 14 significant
/// digits; on the real axis Re w is returned as exp(-x^2) exactly.
std::complex<double> faddeeva(std::complex<double> z);

/// exp(-detuning^2 / (2 sigma^2)); peak value 1.
double doppler_weight(double detuning_hz, double sigma_hz);

/// Re w((detuning + i gamma) / (sigma sqrt 2)). This is the Gaussian above
/// convolved with an area-normalized Lorentzian of HWHM gamma, so gamma = 0
/// reproduces doppler_weight.
double voigt_weight(double detuning_hz, double lorentz_hwhm_hz, double sigma_hz);

/// Spectral weight of one hyperfine component. The caller includes any
/// pressure shift in the detuning.
double line_weight(const BroadeningModel& model, double detuning_hz, double sigma_hz);

}  // namespace magicfreq
