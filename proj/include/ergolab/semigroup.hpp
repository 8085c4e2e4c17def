#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ergolab/measure_space.hpp"
#include "ergolab/scalar_function.hpp"
#include "ergolab/vector_function.hpp"

namespace ergolab {

/// (sqrt(5) - 1) / 2
inline constexpr double kGoldenTheta = 0.6180339887498949;

/// Measure-preserving point flow phi_t and its composition semigroup
/// T_t f = f o phi_t.
///
/// identity: phi_t = id. rotation: phi_t(x) = x + t*theta mod 1 on the circle.
/// step: phi_t = S^floor(t/h) for a weight-preserving atom permutation S.
class Flow {
 public:
  enum class Kind { identity, rotation, step };

  static Flow identity(SpacePtr space);
  static Flow rotation(double theta = kGoldenTheta);
  /// S given as an atom map a -> S(a); must be a bijection preserving weights.
  static Flow step(SpacePtr space, std::vector<std::size_t> map, double h = 1.0);
  /// Cyclic shift by `shift` positions: on Z_n, a -> a + shift; on a product
  /// space the shift acts on the cyclic factor only.
  static Flow shift(SpacePtr space, std::size_t shift = 1, double h = 1.0);

  Kind kind() const { return kind_; }
  const SpacePtr& space() const { return space_; }
  double theta() const { return theta_; }
  double step_width() const { return h_; }
  const std::vector<std::size_t>& base_map() const { return map_; }
  /// Strongly continuous in t (identity and rotation).
  bool is_continuous() const { return kind_ != Kind::step; }
  std::string describe() const;

  /// t*theta = whole + frac with 0 <= frac < 1, from a compensated product.
  struct Displacement {
    double total = 0.0;
    double whole = 0.0;
    double frac = 0.0;
  };
  Displacement displacement(double t) const;
  /// floor(t / h) for step flows.
  std::size_t steps(double t) const;
  /// Atom map of S^n.
  std::vector<std::size_t> map_power(std::size_t n) const;

 private:
  Flow() = default;

  Kind kind_ = Kind::identity;
  SpacePtr space_;
  double theta_ = 0.0;
  double h_ = 1.0;
  std::vector<std::size_t> map_;
};

/// Positive dominant P_t of a composition flow: the same point map acting on
/// scalar functions.
class DominantFlow {
 public:
  explicit DominantFlow(Flow flow) : flow_(std::move(flow)) {}
  const Flow& flow() const { return flow_; }

 private:
  Flow flow_;
};

/// T_t f. Throws for t < 0 or a function on another space.
VectorFunction apply_flow(const Flow& flow, double t, const VectorFunction& f);

/// (T_1)^k f, the k-th iterate of the time-one map.
VectorFunction apply_time_one(const Flow& flow, std::size_t k, const VectorFunction& f);

/// A_t f = (1/t) integral_0^t T_tau f dtau, exact. Throws for t <= 0 and when
/// the rotation formula would exceed the degree cap.
VectorFunction cesaro_average(const Flow& flow, double t, const VectorFunction& f);

/// S_n(T_1) f = (1/n) sum_{k<n} (T_1)^k f. Throws for n = 0.
VectorFunction discrete_average(const Flow& flow, std::size_t n, const VectorFunction& f);

/// P_t h.
ScalarFunction dominant_apply(const DominantFlow& flow, double t, const ScalarFunction& h);

/// A'_t h = (1/t) integral_0^t P_tau h dtau.
ScalarFunction dominant_cesaro(const DominantFlow& flow, double t, const ScalarFunction& h);

std::string to_string(Flow::Kind kind);

}  // namespace ergolab
