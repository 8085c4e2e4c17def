#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ergolab/measure_space.hpp"
#include "ergolab/vector_norm.hpp"

namespace ergolab {

using Vec = std::vector<double>;

/// R^d-valued function on a measure space.
///
/// On the circle it is piecewise polynomial: breakpoints 0 = b_0 < ... < b_m = 1
/// and, for piece i, a polynomial of degree <= degree() in the local variable
/// u = x - b_i. Coefficients are stored piece-major, then by power, then by
/// component. On atomic spaces there is one "piece" per atom holding a
/// constant vector, so most algorithms treat both kinds uniformly.
///
/// Values are immutable; every operation returns a new function.
class VectorFunction {
 public:
  static constexpr int kMaxDegree = 8;

  using Generator = std::function<Vec(double)>;

  /// Circle function from raw breakpoints and coefficients (size
  /// pieces * (degree+1) * dim). Throws on unsorted breakpoints, bad sizes or
  /// degree above the cap.
  static VectorFunction piecewise(std::vector<double> breaks, int degree, std::size_t dim,
                                  std::vector<double> coeffs);
  static VectorFunction constant(SpacePtr space, std::span<const double> value);
  /// Atom table: values holds atoms * dim entries, atom-major.
  static VectorFunction atoms(SpacePtr space, std::size_t dim, std::vector<double> values);
  /// Piecewise cubic Hermite interpolant of a smooth generator on [0,1]. The
  /// knot count doubles (from 16, up to 2^15) until the sup error against the
  /// generator, probed at interior points of every piece, is below `tol`.
  static VectorFunction sample(std::size_t dim, const Generator& generator, double tol = 1e-8);

  const SpacePtr& space() const { return space_; }
  bool on_circle() const { return space_->is_circle(); }
  std::size_t dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t pieces() const { return pieces_; }

  std::span<const double> breaks() const { return breaks_; }
  double piece_left(std::size_t i) const { return breaks_[i]; }
  double piece_right(std::size_t i) const { return breaks_[i + 1]; }
  /// Length of a circle piece or weight of an atom.
  double piece_measure(std::size_t i) const;

  std::span<const double> piece_coeffs(std::size_t i) const;
  double coeff(std::size_t piece, int power, std::size_t comp) const;
  std::vector<double> component_poly(std::size_t piece, std::size_t comp) const;
  std::span<const double> raw_coeffs() const { return coeffs_; }

  std::size_t piece_at(double x) const;
  /// Periodic evaluation on the circle.
  Vec operator()(double x) const;
  Vec at_atom(std::size_t atom) const;
  /// Value of piece i's polynomial at global coordinate x (no wrapping).
  Vec eval_piece(std::size_t i, double x) const;
  void eval_piece_into(std::size_t i, double x, std::span<double> out) const;

  friend VectorFunction operator+(const VectorFunction& a, const VectorFunction& b);
  friend VectorFunction operator-(const VectorFunction& a, const VectorFunction& b);
  friend VectorFunction operator*(double alpha, const VectorFunction& f);
  VectorFunction operator-() const { return (-1.0) * *this; }

  /// F(x) = integral of f over [0, x); degree grows by one.
  VectorFunction antiderivative() const;
  /// Piecewise derivative (jumps at breakpoints are ignored).
  VectorFunction derivative() const;
  /// x -> f(frac(x + shift)); breakpoints move by -shift mod 1, degree unchanged.
  VectorFunction rotated(double shift) const;
  /// atom a -> f(map[a]).
  VectorFunction permuted(std::span<const std::size_t> map) const;
  VectorFunction component(std::size_t comp) const;

  /// Pointwise max of scalar piecewise-constant (degree 0) functions.
  static VectorFunction pointwise_max(std::span<const VectorFunction> fs);

 private:
  VectorFunction() = default;
  static VectorFunction merged_binary(const VectorFunction& a, const VectorFunction& b,
                                      double alpha, double beta);

  SpacePtr space_;
  std::size_t dim_ = 1;
  int degree_ = 0;
  std::size_t pieces_ = 0;
  std::vector<double> breaks_;
  std::vector<double> coeffs_;
};

/// Integral over the whole space.
Vec integrate(const VectorFunction& f);
/// Integral over [a, b] subset of [0, 1]; empty interval gives the zero vector.
Vec integrate(const VectorFunction& f, double a, double b);
Vec integrate(const VectorFunction& f, const Partition& partition, std::size_t cell);

/// (integral of ||f||^p)^(1/p). Exact for p = 2 with the euclidean norm and on
/// atomic spaces; otherwise adaptive Gauss-Legendre on pieces split at the
/// kinks of ||f(x)|| (component zeros, and crossings |f_i| = |f_j| for max).
double lp_norm(const VectorFunction& f, double p, const VectorNorm& vnorm);

/// Essential sup of ||f(x)||. Each piece is maximized exactly through the
/// critical points of polynomial pieces of ||f||^2 (euclidean) or of the
/// signed component sums (max/sum norms).
double sup_norm(const VectorFunction& f, const VectorNorm& vnorm);

/// Max of ||f(x)|| over the closure of piece i.
double piece_norm_max(const VectorFunction& f, std::size_t piece, const VectorNorm& vnorm);

/// Largest ||f(b+) - f(b-)|| over interior breakpoints b of a circle function.
double interior_jump(const VectorFunction& f, const VectorNorm& vnorm);

/// Points inside piece i (sorted, global coordinates) where x -> ||f(x)|| may
/// fail to be smooth.
std::vector<double> norm_kinks(const VectorFunction& f, std::size_t piece, const VectorNorm& vnorm);

/// {x : ||f(x)|| >= level}. Circle: disjoint sorted intervals; atomic: atoms.
struct LevelSet {
  std::vector<std::pair<double, double>> intervals;
  std::vector<std::size_t> atoms;
  double measure = 0.0;
};
LevelSet superlevel_set(const VectorFunction& f, const VectorNorm& vnorm, double level);

/// Measure of the union of superlevel sets, i.e. of {x : max_k ||f_k(x)|| >= level}.
double union_superlevel_measure(std::span<const VectorFunction> fs, const VectorNorm& vnorm,
                                double level);

}  // namespace ergolab
