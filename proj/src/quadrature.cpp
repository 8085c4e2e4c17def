#include "ergolab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ergolab::quad {

namespace {

constexpr int kAdaptiveOrder = 12;

struct StoredRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

StoredRule compute_rule(int n) {
  StoredRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double apply(const Rule& rule, const std::function<double(double)>& fn, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

double recurse(const Rule& rule, const std::function<double(double)>& fn, double a, double b,
               double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = apply(rule, fn, a, mid);
  const double right = apply(rule, fn, mid, b);
  const double split = left + right;
  // Below a few ulps of the halves the comparison only measures rounding.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(split - whole) <= std::max(tol, floor) || mid <= a || mid >= b) return split;
  return recurse(rule, fn, a, mid, left, 0.5 * tol, depth - 1) +
         recurse(rule, fn, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

Rule gauss_legendre(int n) {
  if (n < 1 || n > 256) throw std::invalid_argument("Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, StoredRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return Rule{it->second.nodes, it->second.weights};
}

double fixed(const std::function<double(double)>& fn, double a, double b, int n) {
  return apply(gauss_legendre(n), fn, a, b);
}

double adaptive(const std::function<double(double)>& fn, double a, double b, double tol,
                int max_depth) {
  if (!(a < b)) return 0.0;
  const Rule rule = gauss_legendre(kAdaptiveOrder);
  const double whole = apply(rule, fn, a, b);
  return recurse(rule, fn, a, b, whole, tol, max_depth);
}

}  // namespace ergolab::quad
