#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "magicfreq/absorption.hpp"
#include "magicfreq/half_int.hpp"

namespace magicfreq {

using Complex = std::complex<double>;

/// (2F+1) x (2F+1) density matrix of one hyperfine level. Rows and columns
/// are indexed by m = -F .. F in ascending order.
class DensityMatrix {
 public:
  explicit DensityMatrix(HalfInt f);

  /// 1/(2F+1) times the identity, scaled to the given trace.
  static DensityMatrix uniform(HalfInt f, double trace = 1.0);
  /// |F m><F m| scaled by `population`.
  static DensityMatrix pure_sublevel(HalfInt f, HalfInt m, double population = 1.0);
  /// Diagonal matrix with the given populations for m = -F .. F.
  static DensityMatrix diagonal(HalfInt f, const std::vector<double>& populations);

  HalfInt f() const { return f_; }
  std::size_t dim() const { return dim_; }

  Complex& operator()(HalfInt m1, HalfInt m2);
  const Complex& operator()(HalfInt m1, HalfInt m2) const;
  Complex& at_index(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& at_index(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

  Complex trace() const;
  /// max |rho_ij - conj(rho_ji)|
  double hermiticity_defect() const;
  bool is_hermitian(double tolerance = 1e-12) const;
  /// Frobenius norm of the off-diagonal part.
  double coherence_norm() const;
  /// Populations rho_mm for m = -F .. F (real parts).
  std::vector<double> populations() const;

  DensityMatrix& operator+=(const DensityMatrix& o);
  DensityMatrix& operator*=(Complex s);

 private:
  std::size_t index(HalfInt m) const;

  HalfInt f_;
  std::size_t dim_;
  std::vector<Complex> data_;
};

DensityMatrix operator+(DensityMatrix a, const DensityMatrix& b);
DensityMatrix operator*(Complex s, DensityMatrix a);

/// Irreducible rank-kappa component of a density matrix, q = -kappa .. kappa.
struct PolarizationMoment {
  int rank = 0;
  std::vector<Complex> components;

  Complex at(int q) const { return components.at(static_cast<std::size_t>(q + rank)); }
  Complex& at(int q) { return components.at(static_cast<std::size_t>(q + rank)); }
};

/// rho^(kappa)_q = sum_{m1,m2} (-1)^(F-m1) <F m2; F -m1 | kappa q> rho_{m1 m2}
/// for kappa = 0 .. 2F (the triangle rule forbids higher ranks).
std::vector<PolarizationMoment> density_to_moments(const DensityMatrix& rho);

/// Inverse of density_to_moments, using orthogonality of the coupling
/// coefficients. Requires one moment of each rank 0 .. 2F with 2 kappa + 1
/// components; throws std::invalid_argument otherwise. The result is not
/// checked for hermiticity; use DensityMatrix::is_hermitian.
DensityMatrix moments_to_density(const std::vector<PolarizationMoment>& moments, HalfInt f);

/// Total population of the level recovered from the scalar moment,
/// sqrt(2F+1) rho^(0)_0.
double population_from_moments(const std::vector<PolarizationMoment>& moments, HalfInt f);

/// sum_m rho_mm Gamma^rel_m at the given detuning and geometry. The rate
/// model is population-only: coherences are ignored, with a warning written
/// to `warnings` (if non-null) when their norm exceeds 1e-9.
double total_absorption(const DensityMatrix& rho, const AbsorptionModel& model, double detuning_hz,
                        const Geometry& g, std::ostream* warnings = nullptr);

/// Exact fraction of a uniformly populated ground manifold that sits in
/// level F: (2F+1) / sum_F'' (2F''+1).
struct Fraction {
  long numerator = 0;
  long denominator = 1;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};
Fraction uniform_ground_fraction(const SpeciesLine& line, HalfInt ground_f);

/// The F block of a uniformly populated ground manifold (each of the
/// sum (2F+1) states holding 1/N).
DensityMatrix uniform_ground_block(const SpeciesLine& line, HalfInt ground_f);

}  // namespace magicfreq
