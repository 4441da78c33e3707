#include "magicfreq/atomdata.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "bundled_species.hpp"

namespace magicfreq {

namespace {

constexpr int kFormatVersion = 1;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

class Parser {
 public:
  explicit Parser(std::string_view origin) : origin_(origin) {}

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw SpeciesFormatError(origin_, line, what);
  }

  double number(std::string_view text, int line, std::string_view key) const {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      fail(line, "'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
    return v;
  }

  HalfInt quantum(std::string_view text, int line, std::string_view key) const {
    try {
      return HalfInt::parse(text);
    } catch (const std::invalid_argument& e) {
      fail(line, "'" + std::string(key) + "': " + e.what());
    }
  }

 private:
  std::string origin_;
};

}  // namespace

SpeciesFormatError::SpeciesFormatError(std::string origin, int line, const std::string& what)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + what), origin_(std::move(origin)), line_(line) {}

std::vector<HalfInt> SpeciesLine::ground_levels() const {
  std::vector<HalfInt> out;
  for (HalfInt f = abs(ground_j - nuclear_spin); f <= ground_j + nuclear_spin; f += 1) out.push_back(f);
  return out;
}

std::string SpeciesLine::label() const { return species + " " + line; }

void validate(const SpeciesLine& s) {
  auto bad = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("species field '" + field + "': " + why);
  };
  if (s.species.empty()) bad("species", "empty");
  if (s.line.empty()) bad("line", "empty");
  if (s.nuclear_spin.twice() < 0) bad("I", "negative");
  if (s.ground_j != half(1)) bad("J_ground", "must be 1/2 for an alkali D line");
  if (s.excited_j.twice() <= 0) bad("J_excited", "must be positive");
  if (!(s.mass_kg > 0)) bad("mass_kg", "must be positive");
  if (!(s.frequency_hz > 0)) bad("frequency_hz", "must be positive");

  const HalfInt lo = abs(s.excited_j - s.nuclear_spin);
  const HalfInt hi = s.excited_j + s.nuclear_spin;
  const auto expected = static_cast<std::size_t>((hi - lo).twice() / 2 + 1);
  if (s.excited_levels.size() != expected)
    bad("fprime", "expected " + std::to_string(expected) + " excited levels " + lo.to_string() + ".." +
                      hi.to_string() + ", got " + std::to_string(s.excited_levels.size()));
  HalfInt f = lo;
  for (std::size_t i = 0; i < s.excited_levels.size(); ++i, f += 1) {
    const ExcitedLevel& level = s.excited_levels[i];
    if (level.f != f) bad("fprime", "expected F'=" + f.to_string() + " at position " + std::to_string(i) +
                                        ", got F'=" + level.f.to_string() + " (missing or duplicate level)");
    if (i == 0 && level.offset_hz != 0.0) bad("fprime", "lowest excited level must have offset 0");
    if (i > 0 && !(level.offset_hz > s.excited_levels[i - 1].offset_hz))
      bad("fprime", "offsets must increase strictly with F' (F'=" + level.f.to_string() + ")");
  }
}

SpeciesLine parse_species(std::string_view text, std::string_view origin) {
  const Parser p(origin);
  SpeciesLine s;
  std::map<std::string, int, std::less<>> seen;
  std::optional<int> version;
  int line_no = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.starts_with("fprime")) {
      std::istringstream fields{std::string(line)};
      std::string tag, twice_text, offset_text, extra;
      fields >> tag >> twice_text >> offset_text;
      if (tag != "fprime" || offset_text.empty() || (fields >> extra))
        p.fail(line_no, "expected 'fprime <2F'> <offset_hz>'");
      int twice = 0;
      auto [ptr, ec] = std::from_chars(twice_text.data(), twice_text.data() + twice_text.size(), twice);
      if (ec != std::errc{} || ptr != twice_text.data() + twice_text.size() || twice < 0)
        p.fail(line_no, "fprime: '" + twice_text + "' is not a non-negative integer 2F'");
      const double offset = p.number(offset_text, line_no, "fprime");
      const HalfInt f = half(twice);
      for (const auto& existing : s.excited_levels)
        if (existing.f == f) p.fail(line_no, "duplicate excited level F'=" + f.to_string());
      s.excited_levels.push_back({f, offset});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) p.fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) p.fail(line_no, "'" + key + "' has no value");
    if (!seen.emplace(key, line_no).second) p.fail(line_no, "duplicate key '" + key + "'");

    if (key == "version") {
      version = static_cast<int>(p.number(value, line_no, key));
      if (*version != kFormatVersion) p.fail(line_no, "unsupported format version " + std::string(value));
    } else if (key == "species") {
      s.species = value;
    } else if (key == "line") {
      s.line = value;
    } else if (key == "I") {
      s.nuclear_spin = p.quantum(value, line_no, key);
    } else if (key == "mass_kg") {
      s.mass_kg = p.number(value, line_no, key);
    } else if (key == "J_ground") {
      s.ground_j = p.quantum(value, line_no, key);
    } else if (key == "J_excited") {
      s.excited_j = p.quantum(value, line_no, key);
    } else if (key == "frequency_hz") {
      s.frequency_hz = p.number(value, line_no, key);
    } else if (key == "source") {
      s.source = value;
    } else {
      p.fail(line_no, "unknown key '" + key + "'");
    }
  }

  if (!version) p.fail(line_no, "missing 'version'");
  for (const char* key : {"species", "line", "I", "mass_kg", "J_ground", "J_excited", "frequency_hz"})
    if (!seen.contains(key)) p.fail(line_no, std::string("missing required key '") + key + "'");
  if (s.excited_levels.empty()) p.fail(line_no, "no 'fprime' lines");

  std::sort(s.excited_levels.begin(), s.excited_levels.end(),
            [](const ExcitedLevel& a, const ExcitedLevel& b) { return a.f < b.f; });
  validate(s);
  return s;
}

SpeciesLine load_species(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open species file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_species(text.str(), path.string());
}

std::string serialize_species(const SpeciesLine& s) {
  std::ostringstream out;
  out << "version = " << kFormatVersion << "\n";
  out << "species = " << s.species << "\n";
  out << "line = " << s.line << "\n";
  out << "I = " << s.nuclear_spin.to_string() << "\n";
  out << "mass_kg = " << format_double(s.mass_kg) << "  # kg\n";
  out << "J_ground = " << s.ground_j.to_string() << "\n";
  out << "J_excited = " << s.excited_j.to_string() << "\n";
  out << "frequency_hz = " << format_double(s.frequency_hz) << "  # Hz\n";
  if (!s.source.empty()) out << "source = " << s.source << "\n";
  for (const auto& level : s.excited_levels)
    out << "fprime " << level.f.twice() << " " << format_double(level.offset_hz) << "\n";
  return out.str();
}

std::vector<Transition> transitions_from(const SpeciesLine& s, HalfInt ground_f) {
  const auto grounds = s.ground_levels();
  if (std::find(grounds.begin(), grounds.end(), ground_f) == grounds.end())
    throw std::invalid_argument("F=" + ground_f.to_string() + " is not a ground level of " + s.label());
  std::vector<Transition> out;
  for (const auto& level : s.excited_levels)
    if (abs(level.f - ground_f) <= HalfInt(1)) out.push_back({level.f, level.offset_hz});
  return out;
}

std::vector<std::string> bundled_species_names() {
  std::vector<std::string> names;
  for (const auto& entry : detail::bundled_species_table()) names.emplace_back(entry.name);
  return names;
}

SpeciesLine bundled_species(std::string_view name) {
  for (const auto& entry : detail::bundled_species_table())
    if (entry.name == name) return parse_species(entry.text, std::string("bundled:") + std::string(name));
  throw std::invalid_argument("no bundled species '" + std::string(name) + "'");
}

SpeciesLine resolve_species(std::string_view name_or_path) {
  for (const auto& entry : detail::bundled_species_table())
    if (entry.name == name_or_path) return bundled_species(name_or_path);
  return load_species(std::filesystem::path(name_or_path));
}

}  // namespace magicfreq
