#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ergolab {

/// Dyadic rational num / 2^exp kept in lowest terms, so equality and ordering
/// of partition endpoints never depend on floating-point rounding.
class Dyadic {
 public:
  static constexpr int kMaxExponent = 30;

  constexpr Dyadic() = default;
  Dyadic(std::int64_t numerator, int exponent);

  std::int64_t numerator() const { return num_; }
  int exponent() const { return exp_; }

  /// Exact: every value with exponent <= 30 and |num| < 2^53 is representable.
  double to_double() const;

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  int exp_ = 0;
};

}  // namespace ergolab
