#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace ergolab {

/// Norm on the value space R^d. All three choices are absolute norms:
/// |u_j| <= |v_j| componentwise implies ||u|| <= ||v||.
class VectorNorm {
 public:
  enum class Kind { euclidean, max, sum };

  VectorNorm(Kind kind, std::size_t dim);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  double operator()(std::span<const double> v) const;

  std::string_view name() const;
  static std::optional<Kind> parse_kind(std::string_view name);

  friend bool operator==(const VectorNorm&, const VectorNorm&) = default;

 private:
  Kind kind_;
  std::size_t dim_;
};

std::string_view to_string(VectorNorm::Kind kind);

}  // namespace ergolab
