#include "ergolab/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace ergolab::poly {

namespace {

std::size_t effective_degree(std::span<const double> c) {
  std::size_t n = c.size();
  while (n > 1 && c[n - 1] == 0.0) --n;
  return n == 0 ? 0 : n - 1;
}

// p is monotone on [lo, hi] with a strict sign change.
double bisect(std::span<const double> c, double lo, double hi, double flo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = eval(c, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double eval(std::span<const double> c, double u) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * u + c[k];
  return acc;
}

std::vector<double> taylor_shift(std::span<const double> c, double delta) {
  std::vector<double> q(c.begin(), c.end());
  if (delta == 0.0) return q;
  const std::size_t n = q.size();
  // Repeated synthetic division by (v - (-delta)).
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = n - 1; k > i; --k) q[k - 1] += delta * q[k];
  }
  return q;
}

std::vector<double> derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

double integral(std::span<const double> c, double u0, double u1) {
  double hi = 0.0;
  double lo = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    const double w = c[k] / static_cast<double>(k + 1);
    hi = (hi + w) * u1;
    lo = (lo + w) * u0;
  }
  return hi - lo;
}

std::vector<double> roots_in(std::span<const double> c, double a, double b) {
  std::vector<double> out;
  const std::size_t deg = effective_degree(c);
  if (deg == 0 || !(a < b)) return out;
  const auto p = c.first(deg + 1);
  if (deg == 1) {
    const double r = -p[0] / p[1];
    if (r >= a && r <= b) out.push_back(r);
    return out;
  }
  const auto dp = derivative(p);
  std::vector<double> pts{a};
  for (double r : roots_in(dp, a, b)) {
    if (r > pts.back() && r < b) pts.push_back(r);
  }
  pts.push_back(b);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double v0 = eval(p, pts[i]);
    const double v1 = eval(p, pts[i + 1]);
    if (v0 == 0.0) {
      out.push_back(pts[i]);
    } else if (v1 != 0.0 && (v0 < 0.0) != (v1 < 0.0)) {
      out.push_back(bisect(p, pts[i], pts[i + 1], v0));
    }
  }
  if (eval(p, b) == 0.0) out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double max_on(std::span<const double> c, double a, double b) {
  double m = std::max(eval(c, a), eval(c, b));
  if (effective_degree(c) >= 2) {
    for (double r : roots_in(derivative(c), a, b)) m = std::max(m, eval(c, r));
  }
  return m;
}

}  // namespace ergolab::poly
