#include "ergolab/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace ergolab {

Dyadic::Dyadic(std::int64_t numerator, int exponent) : num_(numerator), exp_(exponent) {
  if (exponent < 0 || exponent > kMaxExponent) {
    throw std::invalid_argument("dyadic exponent out of range: " + std::to_string(exponent));
  }
  while (exp_ > 0 && (num_ % 2) == 0) {
    num_ /= 2;
    --exp_;
  }
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  // Bring both to the larger exponent; the shift is at most 30 bits.
  const int e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
  const std::int64_t lhs = a.num_ * (std::int64_t{1} << (e - a.exp_));
  const std::int64_t rhs = b.num_ * (std::int64_t{1} << (e - b.exp_));
  return lhs <=> rhs;
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return std::to_string(num_);
  return std::to_string(num_) + "/2^" + std::to_string(exp_);
}

}  // namespace ergolab
