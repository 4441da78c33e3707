#pragma once

#include "magicfreq/half_int.hpp"

namespace magicfreq {

/// True when a, b, c satisfy |a-b| <= c <= a+b and a+b+c is an integer.
bool triangle(HalfInt a, HalfInt b, HalfInt c);

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3).
///
/// Evaluated from the Racah sum in exact rational arithmetic; the only
/// rounding is the final conversion and square root. Returns exactly 0 when
/// the triangle rule, m1+m2+m3 = 0 or |m| <= j fails. Throws
/// std::invalid_argument for a negative j or when j and m differ in parity.
double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>, Condon-Shortley phase.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; 0 when any of the four triads
/// (j1 j2 j3), (j1 j5 j6), (j4 j2 j6), (j4 j5 j3) is not a triangle.
double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

}  // namespace magicfreq
