#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace magicfreq {

/// Angular-momentum quantum number stored as twice its value, so that both
/// integer and half-integer j (and projections m) are exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int value) : twice_(2 * value) {}  // NOLINT: implicit from integers is intended

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice_ -= o.twice_;
    return *this;
  }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }

  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
  friend constexpr bool operator==(HalfInt, HalfInt) = default;

  /// "3/2", "-1/2", "2".
  std::string to_string() const;

  /// Accepts "3/2", "-5/2", "2", "1.5". Throws std::invalid_argument.
  static HalfInt parse(std::string_view text);

 private:
  int twice_ = 0;
};

constexpr HalfInt half(int twice) { return HalfInt::from_twice(twice); }

constexpr HalfInt abs(HalfInt h) { return h.twice() < 0 ? -h : h; }

/// j - m is an integer.
constexpr bool same_parity(HalfInt j, HalfInt m) { return (j.twice() - m.twice()) % 2 == 0; }

/// -j, -j+1, ..., j
std::vector<HalfInt> projections(HalfInt j);

}  // namespace magicfreq
