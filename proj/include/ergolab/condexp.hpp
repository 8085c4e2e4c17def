#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ergolab/measure_space.hpp"
#include "ergolab/scalar_function.hpp"
#include "ergolab/vector_function.hpp"

namespace ergolab {

/// Continuous linear functional on R^d acting by dot product.
class LinearFunctional {
 public:
  explicit LinearFunctional(Vec coefficients);

  std::size_t dim() const { return coeffs_.size(); }
  const Vec& coefficients() const { return coeffs_; }

  double operator()(std::span<const double> v) const;
  /// x -> g(f(x)) as a scalar function of the same shape as f.
  VectorFunction apply(const VectorFunction& f) const;

 private:
  Vec coeffs_;
};

/// Conditional expectation with respect to a finite partition: the cell
/// average integral(f, C) / mu(C) on every cell C. Piecewise constant.
VectorFunction cond_exp(const VectorFunction& f, const Partition& partition);

/// Scalar conditional expectation E'(h | F), the positive dominant of
/// cond_exp: ||E(f|F)|| <= E'(||f|| | F) pointwise.
ScalarFunction cond_exp_dominant(const ScalarFunction& h, const Partition& partition);

/// max over cells B of ||integral_B E(f|F) - integral_B f||.
double defining_property_check(const VectorFunction& f, const Partition& partition, const VectorNorm& vnorm);

/// Evaluation points used by pointwise checks: the n midpoints (k + 1/2)/n on
/// the circle; on atomic spaces checks visit every atom instead.
std::vector<double> sample_points(std::size_t n = 1000);

/// sup over sample points (or all atoms) of |g(E(f|F)(x)) - E'(g(f)|F)(x)|.
double functional_commutation_check(const VectorFunction& f, const Partition& partition,
                                    const LinearFunctional& g, std::size_t samples = 1000);

/// Worst signed defect ||E(f|F)(x)|| - E'(||f|| | F)(x) over the sample points;
/// non-positive (up to rounding) when the domination holds.
double cond_exp_domination_defect(const VectorFunction& f, const Partition& partition,
                                  const VectorNorm& vnorm, std::size_t samples = 1000);

}  // namespace ergolab
