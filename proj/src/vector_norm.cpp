#include "ergolab/vector_norm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

VectorNorm::VectorNorm(Kind kind, std::size_t dim) : kind_(kind), dim_(dim) {
  if (dim == 0) throw std::invalid_argument("vector norm dimension must be positive");
}

double VectorNorm::operator()(std::span<const double> v) const {
  if (v.size() != dim_) {
    throw std::invalid_argument("vector of size " + std::to_string(v.size()) +
                                " passed to norm of dimension " + std::to_string(dim_));
  }
  switch (kind_) {
    case Kind::euclidean: {
      if (dim_ == 1) return std::abs(v[0]);
      // Scaled accumulation keeps tiny and huge components accurate.
      double scale = 0.0;
      for (double x : v) scale = std::max(scale, std::abs(x));
      if (scale == 0.0) return 0.0;
      double acc = 0.0;
      for (double x : v) {
        const double r = x / scale;
        acc += r * r;
      }
      return scale * std::sqrt(acc);
    }
    case Kind::max: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    case Kind::sum: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
  }
  return 0.0;
}

std::string_view VectorNorm::name() const { return to_string(kind_); }

std::optional<VectorNorm::Kind> VectorNorm::parse_kind(std::string_view name) {
  if (name == "euclidean") return Kind::euclidean;
  if (name == "max") return Kind::max;
  if (name == "sum") return Kind::sum;
  return std::nullopt;
}

std::string_view to_string(VectorNorm::Kind kind) {
  switch (kind) {
    case VectorNorm::Kind::euclidean: return "euclidean";
    case VectorNorm::Kind::max: return "max";
    case VectorNorm::Kind::sum: return "sum";
  }
  return "?";
}

}  // namespace ergolab
