#include "magicfreq/half_int.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace magicfreq {

std::string HalfInt::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("not an angular-momentum value: '" + std::string(whole) + "'");
  return v;
}

}  // namespace

HalfInt HalfInt::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty angular-momentum value");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const int num = parse_int(text.substr(0, slash), text);
    const int den = parse_int(text.substr(slash + 1), text);
    if (den == 2) return from_twice(num);
    if (den == 1) return HalfInt(num);
    throw std::invalid_argument("denominator must be 1 or 2: '" + std::string(text) + "'");
  }
  if (text.find('.') != std::string_view::npos) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw std::invalid_argument("not an angular-momentum value: '" + std::string(text) + "'");
    const double twice = 2.0 * v;
    if (std::abs(twice - std::round(twice)) > 1e-12)
      throw std::invalid_argument("not a multiple of 1/2: '" + std::string(text) + "'");
    return from_twice(static_cast<int>(std::lround(twice)));
  }
  return HalfInt(parse_int(text, text));
}

std::vector<HalfInt> projections(HalfInt j) {
  if (j.twice() < 0) throw std::invalid_argument("negative angular momentum " + j.to_string());
  std::vector<HalfInt> out;
  out.reserve(static_cast<std::size_t>(j.twice() + 1));
  for (int t = -j.twice(); t <= j.twice(); t += 2) out.push_back(HalfInt::from_twice(t));
  return out;
}

}  // namespace magicfreq
