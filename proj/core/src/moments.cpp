#include "magicfreq/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "magicfreq/angular.hpp"

namespace magicfreq {

DensityMatrix::DensityMatrix(HalfInt f) : f_(f), dim_(0) {
  if (f.twice() < 0) throw std::invalid_argument("density matrix needs F >= 0");
  dim_ = static_cast<std::size_t>(f.twice() + 1);
  data_.assign(dim_ * dim_, Complex{});
}

DensityMatrix DensityMatrix::uniform(HalfInt f, double trace) {
  DensityMatrix rho(f);
  const double p = trace / static_cast<double>(rho.dim_);
  for (std::size_t i = 0; i < rho.dim_; ++i) rho.at_index(i, i) = p;
  return rho;
}

DensityMatrix DensityMatrix::pure_sublevel(HalfInt f, HalfInt m, double population) {
  DensityMatrix rho(f);
  rho(m, m) = population;
  return rho;
}

DensityMatrix DensityMatrix::diagonal(HalfInt f, const std::vector<double>& populations) {
  DensityMatrix rho(f);
  if (populations.size() != rho.dim_)
    throw std::invalid_argument("expected " + std::to_string(rho.dim_) + " populations for F=" + f.to_string());
  for (std::size_t i = 0; i < rho.dim_; ++i) rho.at_index(i, i) = populations[i];
  return rho;
}

std::size_t DensityMatrix::index(HalfInt m) const {
  if (!same_parity(f_, m) || abs(m) > f_)
    throw std::invalid_argument("m=" + m.to_string() + " is not a sublevel of F=" + f_.to_string());
  return static_cast<std::size_t>((m + f_).twice() / 2);
}

Complex& DensityMatrix::operator()(HalfInt m1, HalfInt m2) { return at_index(index(m1), index(m2)); }
const Complex& DensityMatrix::operator()(HalfInt m1, HalfInt m2) const { return at_index(index(m1), index(m2)); }

Complex DensityMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < dim_; ++i) t += at_index(i, i);
  return t;
}

double DensityMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      worst = std::max(worst, std::abs(at_index(i, j) - std::conj(at_index(j, i))));
  return worst;
}

bool DensityMatrix::is_hermitian(double tolerance) const { return hermiticity_defect() <= tolerance; }

double DensityMatrix::coherence_norm() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (i != j) sum += std::norm(at_index(i, j));
  return std::sqrt(sum);
}

std::vector<double> DensityMatrix::populations() const {
  std::vector<double> p(dim_);
  for (std::size_t i = 0; i < dim_; ++i) p[i] = at_index(i, i).real();
  return p;
}

DensityMatrix& DensityMatrix::operator+=(const DensityMatrix& o) {
  if (o.f_ != f_) throw std::invalid_argument("adding density matrices of different F");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

DensityMatrix& DensityMatrix::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

DensityMatrix operator+(DensityMatrix a, const DensityMatrix& b) { return a += b; }
DensityMatrix operator*(Complex s, DensityMatrix a) { return a *= s; }

namespace {

// (-1)^(F-m) <F m2; F -m1 | kappa q>, the kernel shared by both directions.
double moment_kernel(HalfInt f, HalfInt m1, HalfInt m2, int kappa, int q) {
  const double cg = clebsch_gordan(f, m2, f, -m1, kappa, q);
  if (cg == 0.0) return 0.0;
  const int phase = (f - m1).twice() / 2;
  return (phase % 2 == 0) ? cg : -cg;
}

}  // namespace

std::vector<PolarizationMoment> density_to_moments(const DensityMatrix& rho) {
  const HalfInt f = rho.f();
  const auto ms = projections(f);
  const int max_rank = f.twice();
  std::vector<PolarizationMoment> out;
  out.reserve(static_cast<std::size_t>(max_rank + 1));
  for (int kappa = 0; kappa <= max_rank; ++kappa) {
    PolarizationMoment pm;
    pm.rank = kappa;
    pm.components.assign(static_cast<std::size_t>(2 * kappa + 1), Complex{});
    for (HalfInt m1 : ms) {
      for (HalfInt m2 : ms) {
        // q = m2 - m1 is the only component this element feeds.
        const HalfInt q = m2 - m1;
        if (std::abs(q.twice()) > 2 * kappa) continue;
        const int qi = q.twice() / 2;
        pm.at(qi) += moment_kernel(f, m1, m2, kappa, qi) * rho(m1, m2);
      }
    }
    out.push_back(std::move(pm));
  }
  return out;
}

DensityMatrix moments_to_density(const std::vector<PolarizationMoment>& moments, HalfInt f) {
  const int max_rank = f.twice();
  if (moments.size() != static_cast<std::size_t>(max_rank + 1))
    throw std::invalid_argument("need moments of every rank 0.." + std::to_string(max_rank) + " for F=" +
                                f.to_string() + ", got " + std::to_string(moments.size()));
  std::vector<const PolarizationMoment*> by_rank(static_cast<std::size_t>(max_rank + 1), nullptr);
  for (const auto& pm : moments) {
    if (pm.rank < 0 || pm.rank > max_rank) throw std::invalid_argument("moment rank out of range");
    if (pm.components.size() != static_cast<std::size_t>(2 * pm.rank + 1))
      throw std::invalid_argument("moment of rank " + std::to_string(pm.rank) + " needs " +
                                  std::to_string(2 * pm.rank + 1) + " components");
    if (by_rank[static_cast<std::size_t>(pm.rank)])
      throw std::invalid_argument("duplicate moment of rank " + std::to_string(pm.rank));
    by_rank[static_cast<std::size_t>(pm.rank)] = &pm;
  }

  DensityMatrix rho(f);
  const auto ms = projections(f);
  for (HalfInt m1 : ms) {
    for (HalfInt m2 : ms) {
      const HalfInt q = m2 - m1;
      const int qi = q.twice() / 2;
      Complex v{};
      for (int kappa = std::abs(qi); kappa <= max_rank; ++kappa)
        v += moment_kernel(f, m1, m2, kappa, qi) * by_rank[static_cast<std::size_t>(kappa)]->at(qi);
      rho(m1, m2) = v;
    }
  }
  return rho;
}

double population_from_moments(const std::vector<PolarizationMoment>& moments, HalfInt f) {
  for (const auto& pm : moments)
    if (pm.rank == 0) return std::sqrt(static_cast<double>(f.twice() + 1)) * pm.at(0).real();
  throw std::invalid_argument("no rank-0 moment supplied");
}

double total_absorption(const DensityMatrix& rho, const AbsorptionModel& model, double detuning_hz,
                        const Geometry& g, std::ostream* warnings) {
  if (rho.f() != model.ground_f())
    throw std::invalid_argument("density matrix F does not match the absorption model");
  if (warnings && rho.coherence_norm() > 1e-9)
    *warnings << "warning: total_absorption ignores Zeeman coherences (off-diagonal norm "
              << rho.coherence_norm() << ")\n";
  const auto rates = model.rates(detuning_hz, g);
  double total = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) total += rho.at_index(i, i).real() * rates[i];
  return total;
}

Fraction uniform_ground_fraction(const SpeciesLine& line, HalfInt ground_f) {
  const auto levels = line.ground_levels();
  if (std::find(levels.begin(), levels.end(), ground_f) == levels.end())
    throw std::invalid_argument("F=" + ground_f.to_string() + " is not a ground level of " + line.label());
  long total = 0;
  for (HalfInt f : levels) total += f.twice() + 1;
  const long own = ground_f.twice() + 1;
  const long g = std::gcd(own, total);
  return {own / g, total / g};
}

DensityMatrix uniform_ground_block(const SpeciesLine& line, HalfInt ground_f) {
  const auto levels = line.ground_levels();
  if (std::find(levels.begin(), levels.end(), ground_f) == levels.end())
    throw std::invalid_argument("F=" + ground_f.to_string() + " is not a ground level of " + line.label());
  long total = 0;
  for (HalfInt f : levels) total += f.twice() + 1;
  DensityMatrix rho(ground_f);
  for (std::size_t i = 0; i < rho.dim(); ++i) rho.at_index(i, i) = 1.0 / static_cast<double>(total);
  return rho;
}

}  // namespace magicfreq
