#include "ergolab/vector_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <stdexcept>
#include <string>

#include "ergolab/polynomial.hpp"
#include "ergolab/quadrature.hpp"

namespace ergolab {

namespace {

void require_circle(const VectorFunction& f, const char* what) {
  if (!f.on_circle()) throw std::invalid_argument(std::string(what) + " requires a circle function");
}

void require_atomic(const VectorFunction& f, const char* what) {
  if (f.on_circle()) throw std::invalid_argument(std::string(what) + " requires an atomic function");
}

void check_degree(int degree) {
  if (degree < 0 || degree > VectorFunction::kMaxDegree) {
    throw std::invalid_argument("polynomial degree " + std::to_string(degree) + " exceeds the cap of " +
                                std::to_string(VectorFunction::kMaxDegree));
  }
}

std::vector<double> sorted_union(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Subintervals of [a, b] on which g >= 0, in local coordinates.
void append_nonneg(std::span<const double> g, double a, double b,
                   std::vector<std::pair<double, double>>& out) {
  std::vector<double> pts{a};
  for (double r : poly::roots_in(g, a, b)) {
    if (r > pts.back() && r < b) pts.push_back(r);
  }
  pts.push_back(b);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    if (poly::eval(g, mid) >= 0.0) {
      if (!out.empty() && out.back().second >= pts[i]) {
        out.back().second = std::max(out.back().second, pts[i + 1]);
      } else {
        out.emplace_back(pts[i], pts[i + 1]);
      }
    }
  }
}

std::vector<std::pair<double, double>> merge_intervals(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [a, b] : iv) {
    if (!(b > a)) continue;
    if (!out.empty() && a <= out.back().second) {
      out.back().second = std::max(out.back().second, b);
    } else {
      out.emplace_back(a, b);
    }
  }
  return out;
}

// Roots of every component strictly inside (0, len), sorted.
std::vector<double> component_roots(const VectorFunction& f, std::size_t piece, double len) {
  std::vector<double> pts;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    for (double r : poly::roots_in(f.component_poly(piece, j), 0.0, len)) {
      if (r > 0.0 && r < len) pts.push_back(r);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<double> squared_euclidean(const VectorFunction& f, std::size_t piece) {
  std::vector<double> q;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const auto pj = f.component_poly(piece, j);
    const auto sq = poly::multiply(pj, pj);
    if (q.size() < sq.size()) q.resize(sq.size(), 0.0);
    for (std::size_t k = 0; k < sq.size(); ++k) q[k] += sq[k];
  }
  return q;
}

// Signed sum sum_j sign_j P_j where the signs are read at local point u.
std::vector<double> signed_sum(const VectorFunction& f, std::size_t piece, double u) {
  std::vector<double> g(static_cast<std::size_t>(f.degree()) + 1, 0.0);
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const auto pj = f.component_poly(piece, j);
    const double sign = poly::eval(pj, u) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < pj.size(); ++k) g[k] += sign * pj[k];
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

VectorFunction VectorFunction::piecewise(std::vector<double> breaks, int degree, std::size_t dim,
                                         std::vector<double> coeffs) {
  check_degree(degree);
  if (dim == 0) throw std::invalid_argument("function dimension must be positive");
  if (breaks.size() < 2 || breaks.front() != 0.0 || breaks.back() != 1.0) {
    throw std::invalid_argument("breakpoints must run from 0 to 1");
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) {
      throw std::invalid_argument("breakpoints must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
  const std::size_t pieces = breaks.size() - 1;
  const std::size_t expected = pieces * static_cast<std::size_t>(degree + 1) * dim;
  if (coeffs.size() != expected) {
    throw std::invalid_argument("expected " + std::to_string(expected) + " coefficients, got " +
                                std::to_string(coeffs.size()));
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
  }
  VectorFunction f;
  f.space_ = MeasureSpace::circle();
  f.dim_ = dim;
  f.degree_ = degree;
  f.pieces_ = pieces;
  f.breaks_ = std::move(breaks);
  f.coeffs_ = std::move(coeffs);
  return f;
}

VectorFunction VectorFunction::constant(SpacePtr space, std::span<const double> value) {
  if (!space) throw std::invalid_argument("null space");
  if (value.empty()) throw std::invalid_argument("function dimension must be positive");
  if (space->is_circle()) {
    return piecewise({0.0, 1.0}, 0, value.size(), Vec(value.begin(), value.end()));
  }
  Vec values;
  values.reserve(space->atoms() * value.size());
  for (std::size_t a = 0; a < space->atoms(); ++a) values.insert(values.end(), value.begin(), value.end());
  return atoms(std::move(space), value.size(), std::move(values));
}

VectorFunction VectorFunction::atoms(SpacePtr space, std::size_t dim, std::vector<double> values) {
  if (!space || space->is_circle()) throw std::invalid_argument("atom table needs an atomic space");
  if (dim == 0) throw std::invalid_argument("function dimension must be positive");
  if (values.size() != space->atoms() * dim) {
    throw std::invalid_argument("atom table has " + std::to_string(values.size()) + " entries, expected " +
                                std::to_string(space->atoms() * dim));
  }
  for (double c : values) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite atom value");
  }
  VectorFunction f;
  f.pieces_ = space->atoms();
  f.space_ = std::move(space);
  f.dim_ = dim;
  f.degree_ = 0;
  f.coeffs_ = std::move(values);
  return f;
}

VectorFunction VectorFunction::sample(std::size_t dim, const Generator& generator, double tol) {
  if (dim == 0) throw std::invalid_argument("function dimension must be positive");
  constexpr std::size_t kMaxKnots = std::size_t{1} << 15;
  for (std::size_t n = 16; n <= kMaxKnots; n *= 2) {
    const double h = 1.0 / static_cast<double>(n);
    std::vector<Vec> y(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      y[k] = generator(static_cast<double>(k) * h);
      if (y[k].size() != dim) throw std::invalid_argument("generator returned wrong dimension");
    }
    // Fourth-order finite-difference slopes, one-sided near the ends.
    std::vector<Vec> m(n + 1, Vec(dim));
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t j = 0; j < dim; ++j) {
        auto v = [&](std::size_t i) { return y[i][j]; };
        double d;
        if (k >= 2 && k + 2 <= n) {
          d = v(k - 2) - 8.0 * v(k - 1) + 8.0 * v(k + 1) - v(k + 2);
        } else if (k == 0) {
          d = -25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4);
        } else if (k == 1) {
          d = -3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4);
        } else if (k + 1 == n) {
          d = 3.0 * v(n) + 10.0 * v(n - 1) - 18.0 * v(n - 2) + 6.0 * v(n - 3) - v(n - 4);
        } else {
          d = 25.0 * v(n) - 48.0 * v(n - 1) + 36.0 * v(n - 2) - 16.0 * v(n - 3) + 3.0 * v(n - 4);
        }
        m[k][j] = d / (12.0 * h);
      }
    }
    std::vector<double> breaks(n + 1);
    for (std::size_t k = 0; k <= n; ++k) breaks[k] = static_cast<double>(k) * h;
    breaks[n] = 1.0;
    std::vector<double> coeffs(n * 4 * dim);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double y0 = y[k][j];
        const double y1 = y[k + 1][j];
        const double m0 = m[k][j];
        const double m1 = m[k + 1][j];
        const double slope = (y1 - y0) / h;
        coeffs[(k * 4 + 0) * dim + j] = y0;
        coeffs[(k * 4 + 1) * dim + j] = m0;
        coeffs[(k * 4 + 2) * dim + j] = (3.0 * slope - 2.0 * m0 - m1) / h;
        coeffs[(k * 4 + 3) * dim + j] = (m0 + m1 - 2.0 * slope) / (h * h);
      }
    }
    VectorFunction f = piecewise(std::move(breaks), 3, dim, std::move(coeffs));
    double err = 0.0;
    for (std::size_t k = 0; k < n && err <= tol; ++k) {
      for (double frac : {0.25, 0.5, 0.75}) {
        const double x = (static_cast<double>(k) + frac) * h;
        const Vec g = generator(x);
        const Vec v = f.eval_piece(k, x);
        for (std::size_t j = 0; j < dim; ++j) err = std::max(err, std::abs(g[j] - v[j]));
      }
    }
    if (err <= tol) return f;
  }
  throw std::invalid_argument("generator could not be interpolated to the requested tolerance");
}

// ---------------------------------------------------------------------------
// Access

double VectorFunction::piece_measure(std::size_t i) const {
  if (on_circle()) return breaks_[i + 1] - breaks_[i];
  return space_->weight(i);
}

std::span<const double> VectorFunction::piece_coeffs(std::size_t i) const {
  const std::size_t stride = static_cast<std::size_t>(degree_ + 1) * dim_;
  return std::span<const double>(coeffs_).subspan(i * stride, stride);
}

double VectorFunction::coeff(std::size_t piece, int power, std::size_t comp) const {
  if (power > degree_) return 0.0;
  return coeffs_[(piece * static_cast<std::size_t>(degree_ + 1) + static_cast<std::size_t>(power)) * dim_ + comp];
}

std::vector<double> VectorFunction::component_poly(std::size_t piece, std::size_t comp) const {
  std::vector<double> p(static_cast<std::size_t>(degree_) + 1);
  const auto c = piece_coeffs(piece);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = c[k * dim_ + comp];
  return p;
}

std::size_t VectorFunction::piece_at(double x) const {
  require_circle(*this, "piece_at");
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - breaks_.begin());
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, pieces_ - 1);
}

void VectorFunction::eval_piece_into(std::size_t i, double x, std::span<double> out) const {
  const auto c = piece_coeffs(i);
  if (!on_circle()) {
    std::copy(c.begin(), c.end(), out.begin());
    return;
  }
  const double u = x - breaks_[i];
  for (std::size_t j = 0; j < dim_; ++j) {
    double acc = 0.0;
    for (std::size_t k = static_cast<std::size_t>(degree_) + 1; k-- > 0;) acc = acc * u + c[k * dim_ + j];
    out[j] = acc;
  }
}

Vec VectorFunction::eval_piece(std::size_t i, double x) const {
  Vec out(dim_);
  eval_piece_into(i, x, out);
  return out;
}

Vec VectorFunction::operator()(double x) const {
  require_circle(*this, "point evaluation");
  x -= std::floor(x);
  if (x >= 1.0) x = 0.0;
  return eval_piece(piece_at(x), x);
}

Vec VectorFunction::at_atom(std::size_t atom) const {
  require_atomic(*this, "atom evaluation");
  const auto c = piece_coeffs(atom);
  return Vec(c.begin(), c.end());
}

// ---------------------------------------------------------------------------
// Algebra

VectorFunction VectorFunction::merged_binary(const VectorFunction& a, const VectorFunction& b,
                                             double alpha, double beta) {
  require_same_space(a.space_, b.space_, "function arithmetic");
  if (a.dim_ != b.dim_) throw std::invalid_argument("function arithmetic: dimension mismatch");
  if (!a.on_circle()) {
    Vec values(a.coeffs_.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = alpha * a.coeffs_[i] + beta * b.coeffs_[i];
    VectorFunction r = a;
    r.coeffs_ = std::move(values);
    return r;
  }
  const int degree = std::max(a.degree_, b.degree_);
  const std::size_t dim = a.dim_;
  std::vector<double> breaks = sorted_union(a.breaks_, b.breaks_);
  const std::size_t pieces = breaks.size() - 1;
  const std::size_t stride = static_cast<std::size_t>(degree + 1) * dim;
  std::vector<double> coeffs(pieces * stride, 0.0);
  std::size_t ia = 0;
  std::size_t ib = 0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double x0 = breaks[i];
    while (ia + 1 < a.pieces_ && a.breaks_[ia + 1] <= x0) ++ia;
    while (ib + 1 < b.pieces_ && b.breaks_[ib + 1] <= x0) ++ib;
    for (const auto& [src, idx, w] : {std::tuple{&a, ia, alpha}, std::tuple{&b, ib, beta}}) {
      if (w == 0.0) continue;
      const double delta = x0 - src->breaks_[idx];
      for (std::size_t j = 0; j < dim; ++j) {
        const auto shifted = poly::taylor_shift(src->component_poly(idx, j), delta);
        for (std::size_t k = 0; k < shifted.size(); ++k) coeffs[i * stride + k * dim + j] += w * shifted[k];
      }
    }
  }
  return piecewise(std::move(breaks), degree, dim, std::move(coeffs));
}

VectorFunction operator+(const VectorFunction& a, const VectorFunction& b) {
  return VectorFunction::merged_binary(a, b, 1.0, 1.0);
}

VectorFunction operator-(const VectorFunction& a, const VectorFunction& b) {
  return VectorFunction::merged_binary(a, b, 1.0, -1.0);
}

VectorFunction operator*(double alpha, const VectorFunction& f) {
  VectorFunction r = f;
  for (double& c : r.coeffs_) c *= alpha;
  return r;
}

VectorFunction VectorFunction::antiderivative() const {
  require_circle(*this, "antiderivative");
  check_degree(degree_ + 1);
  const int degree = degree_ + 1;
  const std::size_t stride = static_cast<std::size_t>(degree + 1) * dim_;
  std::vector<double> coeffs(pieces_ * stride, 0.0);
  Vec running(dim_, 0.0);
  for (std::size_t i = 0; i < pieces_; ++i) {
    const double len = piece_measure(i);
    for (std::size_t j = 0; j < dim_; ++j) {
      coeffs[i * stride + j] = running[j];
      const auto pj = component_poly(i, j);
      for (std::size_t k = 0; k < pj.size(); ++k) {
        coeffs[i * stride + (k + 1) * dim_ + j] = pj[k] / static_cast<double>(k + 1);
      }
      running[j] += poly::integral(pj, 0.0, len);
    }
  }
  return piecewise(breaks_, degree, dim_, std::move(coeffs));
}

VectorFunction VectorFunction::derivative() const {
  require_circle(*this, "derivative");
  const int degree = std::max(degree_ - 1, 0);
  const std::size_t stride = static_cast<std::size_t>(degree + 1) * dim_;
  std::vector<double> coeffs(pieces_ * stride, 0.0);
  for (std::size_t i = 0; i < pieces_; ++i) {
    for (int k = 1; k <= degree_; ++k) {
      for (std::size_t j = 0; j < dim_; ++j) {
        coeffs[i * stride + static_cast<std::size_t>(k - 1) * dim_ + j] = k * coeff(i, k, j);
      }
    }
  }
  return piecewise(breaks_, degree, dim_, std::move(coeffs));
}

VectorFunction VectorFunction::rotated(double shift) const {
  require_circle(*this, "rotation");
  double s = shift - std::floor(shift);
  if (s >= 1.0) s = 0.0;
  if (s == 0.0) return *this;
  std::vector<double> breaks{0.0, 1.0};
  breaks.reserve(pieces_ + 2);
  for (std::size_t i = 0; i < pieces_; ++i) {
    double c = breaks_[i] - s;
    if (c < 0.0) c += 1.0;
    if (c >= 1.0) c = 0.0;
    breaks.push_back(c);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const std::size_t pieces = breaks.size() - 1;
  const std::size_t stride = static_cast<std::size_t>(degree_ + 1) * dim_;
  std::vector<double> coeffs(pieces * stride);
  for (std::size_t i = 0; i < pieces; ++i) {
    const double x0 = breaks[i];
    const double mid = 0.5 * (x0 + breaks[i + 1]) + s;
    const double wrap = mid >= 1.0 ? 1.0 : 0.0;
    const std::size_t src = piece_at(mid - wrap);
    const double delta = (x0 + s - wrap) - breaks_[src];
    for (std::size_t j = 0; j < dim_; ++j) {
      const auto shifted = poly::taylor_shift(component_poly(src, j), delta);
      for (std::size_t k = 0; k < shifted.size(); ++k) coeffs[i * stride + k * dim_ + j] = shifted[k];
    }
  }
  return piecewise(std::move(breaks), degree_, dim_, std::move(coeffs));
}

VectorFunction VectorFunction::permuted(std::span<const std::size_t> map) const {
  require_atomic(*this, "permutation");
  if (map.size() != pieces_) throw std::invalid_argument("atom map size mismatch");
  VectorFunction r = *this;
  for (std::size_t a = 0; a < pieces_; ++a) {
    const auto src = piece_coeffs(map[a]);
    std::copy(src.begin(), src.end(), r.coeffs_.begin() + static_cast<std::ptrdiff_t>(a * dim_));
  }
  return r;
}

VectorFunction VectorFunction::component(std::size_t comp) const {
  if (comp >= dim_) throw std::out_of_range("component index out of range");
  VectorFunction r = *this;
  r.dim_ = 1;
  r.coeffs_.clear();
  for (std::size_t k = comp; k < coeffs_.size(); k += dim_) r.coeffs_.push_back(coeffs_[k]);
  return r;
}

VectorFunction VectorFunction::pointwise_max(std::span<const VectorFunction> fs) {
  if (fs.empty()) throw std::invalid_argument("pointwise_max of an empty family");
  for (const auto& f : fs) {
    if (f.dim_ != 1 || f.degree_ != 0) {
      throw std::invalid_argument("pointwise_max needs scalar piecewise-constant functions");
    }
    require_same_space(f.space_, fs.front().space_, "pointwise_max");
  }
  if (!fs.front().on_circle()) {
    VectorFunction r = fs.front();
    for (const auto& f : fs.subspan(1)) {
      for (std::size_t a = 0; a < r.coeffs_.size(); ++a) r.coeffs_[a] = std::max(r.coeffs_[a], f.coeffs_[a]);
    }
    return r;
  }
  std::vector<double> breaks = fs.front().breaks_;
  for (const auto& f : fs.subspan(1)) breaks = sorted_union(breaks, f.breaks_);
  std::vector<double> values(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& f : fs) m = std::max(m, f.coeffs_[f.piece_at(mid)]);
    values[i] = m;
  }
  return piecewise(std::move(breaks), 0, 1, std::move(values));
}

// ---------------------------------------------------------------------------
// Integration and norms

Vec integrate(const VectorFunction& f) {
  Vec total(f.dim(), 0.0);
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    if (f.on_circle()) {
      const double len = f.piece_measure(i);
      for (std::size_t j = 0; j < f.dim(); ++j) total[j] += poly::integral(f.component_poly(i, j), 0.0, len);
    } else {
      const double w = f.piece_measure(i);
      const auto c = f.piece_coeffs(i);
      for (std::size_t j = 0; j < f.dim(); ++j) total[j] += w * c[j];
    }
  }
  return total;
}

Vec integrate(const VectorFunction& f, double a, double b) {
  if (!f.on_circle()) throw std::invalid_argument("interval integration requires a circle function");
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  Vec total(f.dim(), 0.0);
  if (!(a < b)) return total;
  for (std::size_t i = f.piece_at(a); i < f.pieces(); ++i) {
    const double left = f.piece_left(i);
    if (left >= b) break;
    const double u0 = std::max(a, left) - left;
    const double u1 = std::min(b, f.piece_right(i)) - left;
    if (!(u1 > u0)) continue;
    for (std::size_t j = 0; j < f.dim(); ++j) total[j] += poly::integral(f.component_poly(i, j), u0, u1);
  }
  return total;
}

Vec integrate(const VectorFunction& f, const Partition& partition, std::size_t cell) {
  require_same_space(f.space(), partition.space(), "integrate over cell");
  if (f.on_circle()) return integrate(f, partition.cell_left(cell), partition.cell_right(cell));
  Vec total(f.dim(), 0.0);
  for (std::size_t a : partition.atoms_in_cell(cell)) {
    const double w = f.piece_measure(a);
    const auto c = f.piece_coeffs(a);
    for (std::size_t j = 0; j < f.dim(); ++j) total[j] += w * c[j];
  }
  return total;
}

double interior_jump(const VectorFunction& f, const VectorNorm& vnorm) {
  require_circle(f, "interior_jump");
  double m = 0.0;
  Vec left(f.dim());
  Vec right(f.dim());
  for (std::size_t i = 1; i < f.pieces(); ++i) {
    f.eval_piece_into(i - 1, f.piece_left(i), left);
    f.eval_piece_into(i, f.piece_left(i), right);
    for (std::size_t j = 0; j < f.dim(); ++j) left[j] -= right[j];
    m = std::max(m, vnorm(left));
  }
  return m;
}

std::vector<double> norm_kinks(const VectorFunction& f, std::size_t piece, const VectorNorm& vnorm) {
  if (!f.on_circle()) return {};
  const double len = f.piece_measure(piece);
  std::vector<double> pts = component_roots(f, piece, len);
  if (vnorm.kind() == VectorNorm::Kind::max && f.dim() > 1) {
    for (std::size_t i = 0; i < f.dim(); ++i) {
      const auto pi = f.component_poly(piece, i);
      for (std::size_t j = i + 1; j < f.dim(); ++j) {
        const auto pj = f.component_poly(piece, j);
        std::vector<double> diff(pi.size());
        std::vector<double> sum(pi.size());
        for (std::size_t k = 0; k < pi.size(); ++k) {
          diff[k] = pi[k] - pj[k];
          sum[k] = pi[k] + pj[k];
        }
        for (const auto& g : {diff, sum}) {
          for (double r : poly::roots_in(g, 0.0, len)) {
            if (r > 0.0 && r < len) pts.push_back(r);
          }
        }
      }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  }
  for (double& p : pts) p += f.piece_left(piece);
  return pts;
}

double piece_norm_max(const VectorFunction& f, std::size_t piece, const VectorNorm& vnorm) {
  if (vnorm.dim() != f.dim()) throw std::invalid_argument("norm dimension does not match function");
  if (!f.on_circle() || f.degree() == 0) return vnorm(f.piece_coeffs(piece).first(f.dim()));
  const double len = f.piece_measure(piece);
  switch (vnorm.kind()) {
    case VectorNorm::Kind::euclidean:
      return std::sqrt(std::max(0.0, poly::max_on(squared_euclidean(f, piece), 0.0, len)));
    case VectorNorm::Kind::max: {
      double m = 0.0;
      for (std::size_t j = 0; j < f.dim(); ++j) {
        auto pj = f.component_poly(piece, j);
        m = std::max(m, poly::max_on(pj, 0.0, len));
        for (double& c : pj) c = -c;
        m = std::max(m, poly::max_on(pj, 0.0, len));
      }
      return m;
    }
    case VectorNorm::Kind::sum: {
      std::vector<double> pts{0.0};
      for (double r : component_roots(f, piece, len)) pts.push_back(r);
      pts.push_back(len);
      double m = 0.0;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto g = signed_sum(f, piece, 0.5 * (pts[i] + pts[i + 1]));
        m = std::max(m, poly::max_on(g, pts[i], pts[i + 1]));
      }
      return m;
    }
  }
  return 0.0;
}

double sup_norm(const VectorFunction& f, const VectorNorm& vnorm) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.pieces(); ++i) m = std::max(m, piece_norm_max(f, i, vnorm));
  return m;
}

double lp_norm(const VectorFunction& f, double p, const VectorNorm& vnorm) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("lp_norm requires finite p >= 1");
  if (vnorm.dim() != f.dim()) throw std::invalid_argument("norm dimension does not match function");
  double total = 0.0;
  if (!f.on_circle()) {
    for (std::size_t a = 0; a < f.pieces(); ++a) {
      total += f.piece_measure(a) * std::pow(vnorm(f.piece_coeffs(a)), p);
    }
    return std::pow(total, 1.0 / p);
  }
  if (p == 2.0 && vnorm.kind() == VectorNorm::Kind::euclidean) {
    for (std::size_t i = 0; i < f.pieces(); ++i) {
      total += poly::integral(squared_euclidean(f, i), 0.0, f.piece_measure(i));
    }
    return std::sqrt(std::max(0.0, total));
  }
  Vec scratch(f.dim());
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    if (f.degree() == 0) {
      total += f.piece_measure(i) * std::pow(vnorm(f.piece_coeffs(i)), p);
      continue;
    }
    std::vector<double> pts{f.piece_left(i)};
    for (double k : norm_kinks(f, i, vnorm)) pts.push_back(k);
    pts.push_back(f.piece_right(i));
    auto integrand = [&](double x) {
      f.eval_piece_into(i, x, scratch);
      return std::pow(vnorm(scratch), p);
    };
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double len = pts[k + 1] - pts[k];
      total += quad::adaptive(integrand, pts[k], pts[k + 1], 1e-16 + 1e-14 * len);
    }
  }
  return std::pow(total, 1.0 / p);
}

LevelSet superlevel_set(const VectorFunction& f, const VectorNorm& vnorm, double level) {
  if (vnorm.dim() != f.dim()) throw std::invalid_argument("norm dimension does not match function");
  LevelSet set;
  if (!f.on_circle()) {
    for (std::size_t a = 0; a < f.pieces(); ++a) {
      if (vnorm(f.piece_coeffs(a)) >= level) {
        set.atoms.push_back(a);
        set.measure += f.piece_measure(a);
      }
    }
    return set;
  }
  std::vector<std::pair<double, double>> all;
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    const double len = f.piece_measure(i);
    std::vector<std::pair<double, double>> local;
    if (level <= 0.0) {
      local.emplace_back(0.0, len);
    } else if (f.degree() == 0) {
      if (vnorm(f.piece_coeffs(i)) >= level) local.emplace_back(0.0, len);
    } else {
      switch (vnorm.kind()) {
        case VectorNorm::Kind::euclidean: {
          auto q = squared_euclidean(f, i);
          q[0] -= level * level;
          append_nonneg(q, 0.0, len, local);
          break;
        }
        case VectorNorm::Kind::max: {
          for (std::size_t j = 0; j < f.dim(); ++j) {
            auto g = f.component_poly(i, j);
            g[0] -= level;
            append_nonneg(g, 0.0, len, local);
            for (double& c : g) c = -c;
            g[0] -= 2.0 * level;
            append_nonneg(g, 0.0, len, local);
          }
          local = merge_intervals(std::move(local));
          break;
        }
        case VectorNorm::Kind::sum: {
          std::vector<double> pts{0.0};
          for (double r : component_roots(f, i, len)) pts.push_back(r);
          pts.push_back(len);
          for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            auto g = signed_sum(f, i, 0.5 * (pts[k] + pts[k + 1]));
            g[0] -= level;
            append_nonneg(g, pts[k], pts[k + 1], local);
          }
          break;
        }
      }
    }
    const double left = f.piece_left(i);
    for (const auto& [a, b] : local) {
      all.emplace_back(left + a, b >= len ? f.piece_right(i) : left + b);
    }
  }
  set.intervals = merge_intervals(std::move(all));
  for (const auto& [a, b] : set.intervals) set.measure += b - a;
  return set;
}

double union_superlevel_measure(std::span<const VectorFunction> fs, const VectorNorm& vnorm, double level) {
  if (fs.empty()) return 0.0;
  if (!fs.front().on_circle()) {
    const auto& space = fs.front().space();
    std::vector<bool> hit(space->atoms(), false);
    for (const auto& f : fs) {
      require_same_space(f.space(), space, "union_superlevel_measure");
      for (auto a : superlevel_set(f, vnorm, level).atoms) hit[a] = true;
    }
    double m = 0.0;
    for (std::size_t a = 0; a < hit.size(); ++a) {
      if (hit[a]) m += space->weight(a);
    }
    return m;
  }
  std::vector<std::pair<double, double>> all;
  for (const auto& f : fs) {
    auto set = superlevel_set(f, vnorm, level);
    all.insert(all.end(), set.intervals.begin(), set.intervals.end());
  }
  double m = 0.0;
  for (const auto& [a, b] : merge_intervals(std::move(all))) m += b - a;
  return m;
}

}  // namespace ergolab
