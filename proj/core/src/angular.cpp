#include "magicfreq/angular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace magicfreq {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kMaxFactorial = 256;

const cpp_int& factorial(int n) {
  static const std::vector<cpp_int> table = [] {
    std::vector<cpp_int> t(kMaxFactorial + 1);
    t[0] = 1;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0 || n > kMaxFactorial) throw std::invalid_argument("factorial argument out of range");
  return table[static_cast<std::size_t>(n)];
}

// Integer value of a sum of half-integers given in twice-units.
int whole(int twice_sum) { return twice_sum / 2; }

void require_magnitude(HalfInt j) {
  if (j.twice() < 0) throw std::invalid_argument("negative angular momentum " + j.to_string());
}

void require_projection(HalfInt j, HalfInt m) {
  require_magnitude(j);
  if (!same_parity(j, m))
    throw std::invalid_argument("projection " + m.to_string() + " incompatible with j = " + j.to_string());
}

// Delta(a b c)^2 = (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!
cpp_rational triangle_coefficient(HalfInt a, HalfInt b, HalfInt c) {
  const int ta = a.twice(), tb = b.twice(), tc = c.twice();
  return cpp_rational(factorial(whole(ta + tb - tc)) * factorial(whole(ta - tb + tc)) *
                          factorial(whole(-ta + tb + tc)),
                      factorial(whole(ta + tb + tc) + 1));
}

// sign * sqrt(prefactor_sq) * sum, with a single rounding step at the end.
double assemble(int sign, const cpp_rational& prefactor_sq, const cpp_rational& sum) {
  if (sum == 0) return 0.0;
  const cpp_rational magnitude_sq = prefactor_sq * sum * sum;
  const double magnitude = std::sqrt(static_cast<double>(magnitude_sq));
  return (sum < 0 ? -sign : sign) * magnitude;
}

}  // namespace

bool triangle(HalfInt a, HalfInt b, HalfInt c) {
  const int ta = a.twice(), tb = b.twice(), tc = c.twice();
  if (ta < 0 || tb < 0 || tc < 0) return false;
  if ((ta + tb + tc) % 2 != 0) return false;
  return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  require_projection(j1, m1);
  require_projection(j2, m2);
  require_projection(j3, m3);

  if ((m1 + m2 + m3).twice() != 0) return 0.0;
  if (abs(m1) > j1 || abs(m2) > j2 || abs(m3) > j3) return 0.0;
  if (!triangle(j1, j2, j3)) return 0.0;

  const int a = j1.twice(), b = j2.twice(), c = j3.twice();
  const int ma = m1.twice(), mb = m2.twice(), mc = m3.twice();

  const int kmin = std::max({0, whole(b - c - ma), whole(a - c + mb)});
  const int kmax = std::min({whole(a + b - c), whole(a - ma), whole(b + mb)});

  cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const cpp_int den = factorial(k) * factorial(whole(c - b + ma) + k) * factorial(whole(c - a - mb) + k) *
                        factorial(whole(a + b - c) - k) * factorial(whole(a - ma) - k) *
                        factorial(whole(b + mb) - k);
    if (k % 2 == 0)
      sum += cpp_rational(1, den);
    else
      sum -= cpp_rational(1, den);
  }

  const cpp_rational prefactor_sq =
      triangle_coefficient(j1, j2, j3) * factorial(whole(a + ma)) * factorial(whole(a - ma)) *
      factorial(whole(b + mb)) * factorial(whole(b - mb)) * factorial(whole(c + mc)) * factorial(whole(c - mc));

  // (-1)^(j1 - j2 - m3); the exponent is an integer once the triangle rule holds.
  const int phase = whole(a - b - mc);
  return assemble(phase % 2 == 0 ? 1 : -1, prefactor_sq, sum);
}

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  require_projection(J, M);
  if (m1 + m2 != M) {
    // Still validate the remaining arguments before reporting a selection-rule zero.
    require_projection(j1, m1);
    require_projection(j2, m2);
    return 0.0;
  }
  const double three_j = wigner3j(j1, j2, J, m1, m2, -M);
  if (three_j == 0.0) return 0.0;
  // <j1 m1; j2 m2 | J M> = (-1)^(j1 - j2 + M) sqrt(2J+1) (j1 j2 J; m1 m2 -M)
  const int phase = whole(j1.twice() - j2.twice() + M.twice());
  const double sign = (phase % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt(static_cast<double>(J.twice() + 1)) * three_j;
}

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  for (HalfInt j : {j1, j2, j3, j4, j5, j6}) require_magnitude(j);
  if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) || !triangle(j4, j5, j3))
    return 0.0;

  const int a1 = whole(j1.twice() + j2.twice() + j3.twice());
  const int a2 = whole(j1.twice() + j5.twice() + j6.twice());
  const int a3 = whole(j4.twice() + j2.twice() + j6.twice());
  const int a4 = whole(j4.twice() + j5.twice() + j3.twice());
  const int b1 = whole(j1.twice() + j2.twice() + j4.twice() + j5.twice());
  const int b2 = whole(j2.twice() + j3.twice() + j5.twice() + j6.twice());
  const int b3 = whole(j3.twice() + j1.twice() + j6.twice() + j4.twice());

  const int tmin = std::max({a1, a2, a3, a4});
  const int tmax = std::min({b1, b2, b3});

  cpp_rational sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    const cpp_int den = factorial(t - a1) * factorial(t - a2) * factorial(t - a3) * factorial(t - a4) *
                        factorial(b1 - t) * factorial(b2 - t) * factorial(b3 - t);
    const cpp_rational term(factorial(t + 1), den);
    if (t % 2 == 0)
      sum += term;
    else
      sum -= term;
  }

  const cpp_rational prefactor_sq = triangle_coefficient(j1, j2, j3) * triangle_coefficient(j1, j5, j6) *
                                    triangle_coefficient(j4, j2, j6) * triangle_coefficient(j4, j5, j3);
  return assemble(1, prefactor_sq, sum);
}

}  // namespace magicfreq
