#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "magicfreq/half_int.hpp"

namespace magicfreq {

/// CODATA 2018 exact SI values. Everything that needs k_B or c reads them here.
struct PhysicalConstants {
  static constexpr double boltzmann = 1.380649e-23;      // J/K
  static constexpr double speed_of_light = 299792458.0;  // m/s
};

struct ExcitedLevel {
  HalfInt f;
  /// Transition frequency above the lowest level of the excited manifold, Hz.
  double offset_hz = 0.0;
};

/// One alkali D line of one isotope.
struct SpeciesLine {
  std::string species;  // "Rb87"
  std::string line;     // "D2"
  HalfInt nuclear_spin;
  double mass_kg = 0.0;
  HalfInt ground_j = half(1);
  HalfInt excited_j;
  /// Optical frequency of the line; sets the Doppler width.
  double frequency_hz = 0.0;
  /// Sorted by F', one entry per F' in |J'-I| .. J'+I.
  std::vector<ExcitedLevel> excited_levels;
  /// Free-text provenance of the numbers.
  std::string source;

  /// Ground hyperfine levels |J-I| .. J+I.
  std::vector<HalfInt> ground_levels() const;
  /// "Rb87 D2"
  std::string label() const;
};

/// Dipole-allowed excited level reachable from a ground level. The offset is
/// measured from the lowest level of the whole excited manifold, which is the
/// zero of the laser detuning, whether or not that level is itself allowed.
struct Transition {
  HalfInt f_excited;
  double offset_hz = 0.0;
};

class SpeciesFormatError : public std::runtime_error {
 public:
  SpeciesFormatError(std::string origin, int line, const std::string& what);
  const std::string& origin() const { return origin_; }
  int line() const { return line_; }

 private:
  std::string origin_;
  int line_;
};

/// Throws std::invalid_argument naming the first field that breaks an invariant.
void validate(const SpeciesLine& line);

/// Parses the species text format (see FORMATS.md) and validates the result.
/// `origin` is used in error messages.
SpeciesLine parse_species(std::string_view text, std::string_view origin = "<string>");

SpeciesLine load_species(const std::filesystem::path& path);

/// Inverse of parse_species. Numbers use shortest round-trip formatting, so
/// parse_species(serialize_species(x)) reproduces every field bit for bit.
std::string serialize_species(const SpeciesLine& line);

/// Excited levels with |F - F'| <= 1, ascending in F'. Throws
/// std::invalid_argument when F is not a ground level of the line.
std::vector<Transition> transitions_from(const SpeciesLine& line, HalfInt ground_f);

/// rb87_d1, rb87_d2, rb85_d2, cs_d2, na_d2
std::vector<std::string> bundled_species_names();
SpeciesLine bundled_species(std::string_view name);

/// A bundled name, or else a path to a species file.
SpeciesLine resolve_species(std::string_view name_or_path);

}  // namespace magicfreq
