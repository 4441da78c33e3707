#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "magicfreq/moments.hpp"

namespace magicfreq {

/// Density matrices as JSON: {"F": "2", "re": [[...]], "im": [[...]]}, with
/// row i / column j holding m1 = -F + i, m2 = -F + j.
///
/// Moments as JSON: {"F": "2", "moments": [{"rank": 0, "re": [...], "im": [...]}, ...]},
/// component k of a rank-kappa entry holding q = -kappa + k.
///
/// Parsers throw std::invalid_argument with a message naming the offending
/// field. Writers use `significant_digits` for every number; 0 means
/// shortest round-trip representation.

DensityMatrix density_from_json(std::string_view text);
std::string density_to_json(const DensityMatrix& rho, int significant_digits = 0);

struct MomentSet {
  HalfInt f;
  std::vector<PolarizationMoment> moments;
};

MomentSet moments_from_json(std::string_view text);
std::string moments_to_json(const MomentSet& set, int significant_digits = 0);

/// Rounds to the given number of significant decimal digits (0: unchanged).
double round_significant(double value, int significant_digits);

}  // namespace magicfreq
