#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace coopbandit {

/// Mass e^{-depth/6} * center_mass, kept as the exact integer pair.
///
/// center_mass is min{|N(c)|, K} of the owning center and depth the hop count
/// from it. The nil mass (center_mass == 0) sits below every other value.
/// Distinct pairs never compare equal: m1/m2 = e^{(d1-d2)/6} has no solution in
/// positive integers unless d1 == d2, so the ordering is strict and total.
class Mass {
 public:
  constexpr Mass() = default;
  constexpr Mass(std::uint32_t center_mass, std::uint32_t depth)
      : center_mass_(center_mass), depth_(center_mass == 0 ? 0 : depth) {}

  static constexpr Mass nil() { return Mass(); }

  constexpr std::uint32_t center_mass() const { return center_mass_; }
  constexpr std::uint32_t depth() const { return depth_; }
  constexpr bool is_nil() const { return center_mass_ == 0; }

  /// One hop further from the center: e^{-1/6} times this mass.
  constexpr Mass decayed() const { return is_nil() ? nil() : Mass(center_mass_, depth_ + 1); }

  /// 6 ln m - d; monotone in the represented value.
  long double log_score() const {
    return 6.0L * std::log(static_cast<long double>(center_mass_)) - static_cast<long double>(depth_);
  }

  double value() const {
    return is_nil() ? 0.0 : std::exp(-static_cast<double>(depth_) / 6.0) * center_mass_;
  }

  friend constexpr bool operator==(const Mass&, const Mass&) = default;

  friend std::strong_ordering operator<=>(const Mass& a, const Mass& b) {
    if (a == b) return std::strong_ordering::equal;
    if (a.is_nil()) return std::strong_ordering::less;
    if (b.is_nil()) return std::strong_ordering::greater;
    if (a.depth_ == b.depth_) return a.center_mass_ <=> b.center_mass_;
    if (a.center_mass_ == b.center_mass_) return b.depth_ <=> a.depth_;
    const long double sa = a.log_score(), sb = b.log_score();
    if (sa != sb) return sa < sb ? std::strong_ordering::less : std::strong_ordering::greater;
    // Unreachable for mathematically distinct values; keep the order total.
    return a.center_mass_ <=> b.center_mass_;
  }

  std::string to_string() const {
    return is_nil() ? "nil" : "(" + std::to_string(center_mass_) + "," + std::to_string(depth_) + ")";
  }

 private:
  std::uint32_t center_mass_ = 0;
  std::uint32_t depth_ = 0;
};

}  // namespace coopbandit
