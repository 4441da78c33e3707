#include "magicfreq/lineshape.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "magicfreq/atomdata.hpp"

namespace magicfreq {

BroadeningModel BroadeningModel::doppler(double temperature_k) {
  BroadeningModel m;
  m.kind = BroadeningKind::doppler;
  m.temperature_k = temperature_k;
  m.validate();
  return m;
}

BroadeningModel BroadeningModel::voigt(double temperature_k, double lorentz_hwhm_hz, double pressure_shift_hz) {
  BroadeningModel m;
  m.kind = BroadeningKind::voigt;
  m.temperature_k = temperature_k;
  m.lorentz_hwhm_hz = lorentz_hwhm_hz;
  m.pressure_shift_hz = pressure_shift_hz;
  m.validate();
  return m;
}

BroadeningModel BroadeningModel::at_temperature(double t) const {
  BroadeningModel m = *this;
  m.temperature_k = t;
  m.validate();
  return m;
}

void BroadeningModel::validate() const {
  if (!(temperature_k > 0) || !std::isfinite(temperature_k))
    throw std::invalid_argument("temperature must be positive, got " + std::to_string(temperature_k));
  if (!(lorentz_hwhm_hz >= 0) || !std::isfinite(lorentz_hwhm_hz))
    throw std::invalid_argument("Lorentzian half width must be >= 0");
  if (!std::isfinite(pressure_shift_hz)) throw std::invalid_argument("pressure shift must be finite");
  if (kind == BroadeningKind::doppler && (lorentz_hwhm_hz != 0.0 || pressure_shift_hz != 0.0))
    throw std::invalid_argument("Doppler broadening takes no Lorentzian width or pressure shift");
}

double doppler_sigma(double optical_frequency_hz, double temperature_k, double mass_kg) {
  if (!(optical_frequency_hz > 0) || !(temperature_k > 0) || !(mass_kg > 0))
    throw std::invalid_argument("doppler_sigma: frequency, temperature and mass must be positive");
  constexpr double c = PhysicalConstants::speed_of_light;
  return optical_frequency_hz * std::sqrt(PhysicalConstants::boltzmann * temperature_k / (mass_kg * c * c));
}

std::complex<double> faddeeva(std::complex<double> z) {
  constexpr double factor = 2.0 * std::numbers::inv_sqrtpi;
  const double xi = z.real();
  const double yi = z.imag();
  if (yi < 0) throw std::invalid_argument("faddeeva: implemented for Im z >= 0 only");

  const double xabs = std::abs(xi);
  const double yabs = yi;
  const double x = xabs / 6.3;
  const double y = yabs / 4.4;
  double qrho = x * x + y * y;
  const double xquad = xabs * xabs - yabs * yabs;
  const double yquad = 2 * xabs * yabs;

  double u = 0, v = 0;
  if (qrho < 0.085264) {
    // Power series of erfc around the origin, then multiply by exp(-z^2).
    qrho = (1 - 0.85 * y) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6 + 72 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -factor * (xsum * yabs + ysum * xabs) + 1.0;
    const double v1 = factor * (xsum * xabs - ysum * yabs);
    const double daux = std::exp(-xquad);
    const double u2 = daux * std::cos(yquad);
    const double v2 = -daux * std::sin(yquad);
    u = u1 * u2 - v1 * v2;
    v = u1 * v2 + v1 * u2;
  } else {
    double h = 0;
    int kapn = 0;
    int nu = 0;
    if (qrho > 1.0) {
      qrho = std::sqrt(qrho);
      nu = static_cast<int>(3 + 1442 / (26 * qrho + 77));
    } else {
      qrho = (1 - y) * std::sqrt(1 - qrho);
      h = 1.88 * qrho;
      kapn = static_cast<int>(std::lround(7 + 34 * qrho));
      nu = static_cast<int>(std::lround(16 + 26 * qrho));
    }
    const double h2 = 2 * h;
    const bool taylor = h > 0;
    double qlambda = taylor ? std::pow(h2, kapn) : 0.0;

    double rx = 0, ry = 0, sx = 0, sy = 0;
    for (int n = nu; n >= 0; --n) {
      const double np1 = n + 1;
      double tx = yabs + h + np1 * rx;
      const double ty = xabs - np1 * ry;
      const double c = 0.5 / (tx * tx + ty * ty);
      rx = c * tx;
      ry = c * ty;
      if (taylor && n <= kapn) {
        tx = qlambda + sx;
        sx = rx * tx - ry * sy;
        sy = ry * tx + rx * sy;
        qlambda /= h2;
      }
    }
    u = factor * (taylor ? sx : rx);
    v = factor * (taylor ? sy : ry);
    if (yabs == 0.0) u = std::exp(-xabs * xabs);
  }
  // w(-x + iy) = conj(w(x + iy))
  if (xi < 0) v = -v;
  return {u, v};
}

double doppler_weight(double detuning_hz, double sigma_hz) {
  const double r = detuning_hz / sigma_hz;
  return std::exp(-0.5 * r * r);
}

double voigt_weight(double detuning_hz, double lorentz_hwhm_hz, double sigma_hz) {
  const double scale = 1.0 / (sigma_hz * std::numbers::sqrt2);
  return faddeeva({detuning_hz * scale, lorentz_hwhm_hz * scale}).real();
}

double line_weight(const BroadeningModel& model, double detuning_hz, double sigma_hz) {
  if (!(sigma_hz > 0)) throw std::invalid_argument("line_weight: sigma must be positive");
  switch (model.kind) {
    case BroadeningKind::doppler:
      return doppler_weight(detuning_hz, sigma_hz);
    case BroadeningKind::voigt:
      return voigt_weight(detuning_hz, model.lorentz_hwhm_hz, sigma_hz);
  }
  return 0.0;
}

}  // namespace magicfreq
