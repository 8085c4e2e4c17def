#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ergolab/measure_space.hpp"
#include "ergolab/vector_function.hpp"

namespace ergolab {

/// Real-valued evaluable function, used for x -> ||f(x)|| and everything the
/// positive dominants produce from it. These leave the polynomial class, so on
/// the circle a function is an evaluator on [0,1) together with the points
/// where it may fail to be smooth; integrals use adaptive quadrature between
/// those points. Piecewise-constant functions and atom tables are exact.
class ScalarFunction {
 public:
  using Evaluator = std::function<double(double)>;
  /// Exact integral over [a, b] subset of [0, 1], replacing quadrature.
  using Integrator = std::function<double(double, double)>;

  /// `eval` is called with x in [0,1) and must be smooth between breaks.
  static ScalarFunction smooth_pieces(std::vector<double> breaks, Evaluator eval, Integrator integrator = {});
  static ScalarFunction piecewise_constant(std::vector<double> breaks, std::vector<double> values);
  static ScalarFunction atoms(SpacePtr space, std::vector<double> values);
  static ScalarFunction constant(SpacePtr space, double value);
  /// View of a scalar (dim 1) VectorFunction.
  static ScalarFunction from_scalar(const VectorFunction& f);

  const SpacePtr& space() const { return space_; }
  bool on_circle() const { return space_->is_circle(); }
  bool is_piecewise_constant() const { return !eval_; }

  std::span<const double> breaks() const { return breaks_; }
  /// Piece constants (circle, piecewise-constant only) or atom values.
  std::span<const double> values() const { return values_; }

  /// Periodic evaluation on the circle.
  double operator()(double x) const;
  double at_atom(std::size_t atom) const { return values_.at(atom); }

  /// Integral over [a, b] subset of [0, 1].
  double integral(double a, double b) const;
  double integral() const;
  double integral(const Partition& partition, std::size_t cell) const;

 private:
  ScalarFunction() = default;

  SpacePtr space_;
  std::vector<double> breaks_;
  std::vector<double> values_;
  Evaluator eval_;
  Integrator integrator_;
};

double lp_norm(const ScalarFunction& h, double p);
/// Essential sup of |h|. Exact for piecewise-constant and atomic functions;
/// otherwise at least 64 samples per piece refined by golden-section search
/// around each piece's best sample (a lower bound).
double sup_norm(const ScalarFunction& h);

/// x -> ||f(x)||_X. Breaks include the kinks reported by norm_kinks.
ScalarFunction pointwise_norm(const VectorFunction& f, const VectorNorm& vnorm);

}  // namespace ergolab
