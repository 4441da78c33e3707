#include "magicfreq/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

namespace magicfreq {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string(what) + ": invalid JSON: " + e.what());
  }
}

HalfInt read_f(const json& j) {
  if (!j.contains("F")) bad("missing field 'F'");
  const json& f = j.at("F");
  HalfInt value;
  if (f.is_string())
    value = HalfInt::parse(f.get<std::string>());
  else if (f.is_number_integer())
    value = HalfInt(f.get<int>());
  else if (f.is_number())
    value = HalfInt::parse(std::to_string(f.get<double>()));
  else
    bad("field 'F' must be a string such as \"2\" or \"3/2\"");
  if (value.twice() < 0) bad("field 'F' must be non-negative");
  return value;
}

std::vector<double> read_row(const json& j, const std::string& field, std::size_t expected) {
  if (!j.is_array() || j.size() != expected)
    bad("field '" + field + "' must be an array of " + std::to_string(expected) + " numbers");
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : j) {
    if (!v.is_number()) bad("field '" + field + "' contains a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

json number(double v, int digits) { return round_significant(v, digits); }

}  // namespace

double round_significant(double value, int significant_digits) {
  if (significant_digits <= 0 || !std::isfinite(value)) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return std::strtod(buf, nullptr);
}

DensityMatrix density_from_json(std::string_view text) {
  const json j = parse(text, "density matrix");
  const HalfInt f = read_f(j);
  DensityMatrix rho(f);
  const std::size_t n = rho.dim();
  if (!j.contains("re")) bad("missing field 're'");
  const json& re = j.at("re");
  if (!re.is_array() || re.size() != n) bad("field 're' must have " + std::to_string(n) + " rows");
  const json im = j.contains("im") ? j.at("im") : json::array();
  if (!im.empty() && im.size() != n) bad("field 'im' must have " + std::to_string(n) + " rows");
  for (std::size_t r = 0; r < n; ++r) {
    const auto re_row = read_row(re[r], "re[" + std::to_string(r) + "]", n);
    const auto im_row = im.empty() ? std::vector<double>(n, 0.0) : read_row(im[r], "im[" + std::to_string(r) + "]", n);
    for (std::size_t c = 0; c < n; ++c) rho.at_index(r, c) = {re_row[c], im_row[c]};
  }
  return rho;
}

std::string density_to_json(const DensityMatrix& rho, int significant_digits) {
  json re = json::array(), im = json::array();
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    json re_row = json::array(), im_row = json::array();
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      re_row.push_back(number(rho.at_index(r, c).real(), significant_digits));
      im_row.push_back(number(rho.at_index(r, c).imag(), significant_digits));
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  json out;
  out["F"] = rho.f().to_string();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out.dump(2) + "\n";
}

MomentSet moments_from_json(std::string_view text) {
  const json j = parse(text, "moments");
  MomentSet set;
  set.f = read_f(j);
  if (!j.contains("moments") || !j.at("moments").is_array()) bad("missing array field 'moments'");
  for (const auto& entry : j.at("moments")) {
    if (!entry.contains("rank") || !entry.at("rank").is_number_integer()) bad("moment entry without integer 'rank'");
    PolarizationMoment pm;
    pm.rank = entry.at("rank").get<int>();
    if (pm.rank < 0) bad("negative moment rank");
    const std::size_t n = static_cast<std::size_t>(2 * pm.rank + 1);
    const std::string where = "moments[rank " + std::to_string(pm.rank) + "]";
    if (!entry.contains("re")) bad(where + " missing 're'");
    const auto re = read_row(entry.at("re"), where + ".re", n);
    const auto im = entry.contains("im") ? read_row(entry.at("im"), where + ".im", n) : std::vector<double>(n, 0.0);
    pm.components.resize(n);
    for (std::size_t k = 0; k < n; ++k) pm.components[k] = {re[k], im[k]};
    set.moments.push_back(std::move(pm));
  }
  return set;
}

std::string moments_to_json(const MomentSet& set, int significant_digits) {
  json list = json::array();
  for (const auto& pm : set.moments) {
    json re = json::array(), im = json::array();
    for (const auto& c : pm.components) {
      re.push_back(number(c.real(), significant_digits));
      im.push_back(number(c.imag(), significant_digits));
    }
    list.push_back({{"rank", pm.rank}, {"re", std::move(re)}, {"im", std::move(im)}});
  }
  json out;
  out["F"] = set.f.to_string();
  out["moments"] = std::move(list);
  return out.dump(2) + "\n";
}

}  // namespace magicfreq
