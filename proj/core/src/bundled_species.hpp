#pragma once

#include <span>
#include <string_view>

namespace magicfreq::detail {

struct BundledSpecies {
  std::string_view name;
  std::string_view text;
};

/// Generated at configure time from core/data/*.species.
std::span<const BundledSpecies> bundled_species_table();

}  // namespace magicfreq::detail
