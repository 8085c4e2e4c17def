#pragma once

#include <functional>
#include <span>

namespace ergolab::quad {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

/// Cached rule; nodes are computed once by Newton iteration on P_n.
Rule gauss_legendre(int n);

double fixed(const std::function<double(double)>& fn, double a, double b, int n);

/// Adaptive Gauss-Legendre: an interval is accepted once the 12-point rule on
/// it agrees with the 12-point rule on its two halves to `tol` scaled by the
/// interval's share of the original length (or to rounding level of the
/// halves, whichever is larger). Otherwise both halves recurse.
double adaptive(const std::function<double(double)>& fn, double a, double b,
                double tol = 1e-13, int max_depth = 40);

}  // namespace ergolab::quad
