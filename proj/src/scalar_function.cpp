#include "ergolab/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "ergolab/quadrature.hpp"

namespace ergolab {

namespace {

void check_breaks(const std::vector<double>& breaks) {
  if (breaks.size() < 2 || breaks.front() != 0.0 || breaks.back() != 1.0) {
    throw std::invalid_argument("breakpoints must run from 0 to 1");
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) throw std::invalid_argument("breakpoints must be strictly increasing");
  }
}

std::size_t locate(std::span<const double> breaks, double x) {
  auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - breaks.begin());
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, breaks.size() - 2);
}

double golden_max(const std::function<double(double)>& g, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = g(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace

ScalarFunction ScalarFunction::smooth_pieces(std::vector<double> breaks, Evaluator eval, Integrator integrator) {
  check_breaks(breaks);
  if (!eval) throw std::invalid_argument("empty evaluator");
  ScalarFunction h;
  h.space_ = MeasureSpace::circle();
  h.breaks_ = std::move(breaks);
  h.eval_ = std::move(eval);
  h.integrator_ = std::move(integrator);
  return h;
}

ScalarFunction ScalarFunction::piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
  check_breaks(breaks);
  if (values.size() + 1 != breaks.size()) throw std::invalid_argument("one value per piece expected");
  ScalarFunction h;
  h.space_ = MeasureSpace::circle();
  h.breaks_ = std::move(breaks);
  h.values_ = std::move(values);
  return h;
}

ScalarFunction ScalarFunction::atoms(SpacePtr space, std::vector<double> values) {
  if (!space || space->is_circle()) throw std::invalid_argument("atom table needs an atomic space");
  if (values.size() != space->atoms()) throw std::invalid_argument("one value per atom expected");
  ScalarFunction h;
  h.space_ = std::move(space);
  h.values_ = std::move(values);
  return h;
}

ScalarFunction ScalarFunction::constant(SpacePtr space, double value) {
  if (!space) throw std::invalid_argument("null space");
  if (space->is_circle()) return piecewise_constant({0.0, 1.0}, {value});
  const std::size_t n = space->atoms();
  return atoms(std::move(space), std::vector<double>(n, value));
}

ScalarFunction ScalarFunction::from_scalar(const VectorFunction& f) {
  if (f.dim() != 1) throw std::invalid_argument("from_scalar needs a dimension-1 function");
  if (!f.on_circle()) {
    const auto raw = f.raw_coeffs();
    return atoms(f.space(), std::vector<double>(raw.begin(), raw.end()));
  }
  std::vector<double> breaks(f.breaks().begin(), f.breaks().end());
  if (f.degree() == 0) {
    const auto raw = f.raw_coeffs();
    return piecewise_constant(std::move(breaks), std::vector<double>(raw.begin(), raw.end()));
  }
  auto shared = std::make_shared<const VectorFunction>(f);
  return smooth_pieces(std::move(breaks), [shared](double x) {
    return shared->eval_piece(shared->piece_at(x), x)[0];
  });
}

double ScalarFunction::operator()(double x) const {
  if (!on_circle()) throw std::invalid_argument("point evaluation of an atomic function");
  x -= std::floor(x);
  if (x >= 1.0) x = 0.0;
  if (eval_) return eval_(x);
  return values_[locate(breaks_, x)];
}

double ScalarFunction::integral(double a, double b) const {
  if (!on_circle()) throw std::invalid_argument("interval integration of an atomic function");
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  if (!(a < b)) return 0.0;
  if (integrator_) return integrator_(a, b);
  double total = 0.0;
  for (std::size_t i = locate(breaks_, a); i + 1 < breaks_.size(); ++i) {
    if (breaks_[i] >= b) break;
    const double lo = std::max(a, breaks_[i]);
    const double hi = std::min(b, breaks_[i + 1]);
    if (!(hi > lo)) continue;
    if (eval_) {
      total += quad::adaptive(eval_, lo, hi, 1e-16 + 1e-14 * (hi - lo));
    } else {
      total += values_[i] * (hi - lo);
    }
  }
  return total;
}

double ScalarFunction::integral() const {
  if (on_circle()) return integral(0.0, 1.0);
  double total = 0.0;
  for (std::size_t a = 0; a < values_.size(); ++a) total += space_->weight(a) * values_[a];
  return total;
}

double ScalarFunction::integral(const Partition& partition, std::size_t cell) const {
  require_same_space(space_, partition.space(), "cell integral");
  if (on_circle()) return integral(partition.cell_left(cell), partition.cell_right(cell));
  double total = 0.0;
  for (auto a : partition.atoms_in_cell(cell)) total += space_->weight(a) * values_[a];
  return total;
}

double lp_norm(const ScalarFunction& h, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("lp_norm requires finite p >= 1");
  double total = 0.0;
  if (!h.on_circle()) {
    for (std::size_t a = 0; a < h.values().size(); ++a) {
      total += h.space()->weight(a) * std::pow(std::abs(h.values()[a]), p);
    }
  } else if (h.is_piecewise_constant()) {
    const auto br = h.breaks();
    for (std::size_t i = 0; i < h.values().size(); ++i) {
      total += (br[i + 1] - br[i]) * std::pow(std::abs(h.values()[i]), p);
    }
  } else {
    const auto br = h.breaks();
    auto integrand = [&](double x) { return std::pow(std::abs(h(x)), p); };
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      total += quad::adaptive(integrand, br[i], br[i + 1], 1e-16 + 1e-14 * (br[i + 1] - br[i]));
    }
  }
  return std::pow(total, 1.0 / p);
}

double sup_norm(const ScalarFunction& h) {
  double m = 0.0;
  if (!h.on_circle() || h.is_piecewise_constant()) {
    for (double v : h.values()) m = std::max(m, std::abs(v));
    return m;
  }
  constexpr int kSamples = 64;
  const auto br = h.breaks();
  auto g = [&](double x) { return std::abs(h(x)); };
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i];
    const double b = br[i + 1];
    const double step = (b - a) / kSamples;
    int best = 0;
    double best_val = -1.0;
    for (int k = 0; k <= kSamples; ++k) {
      // Stay inside the half-open piece at the right end.
      const double x = k == kSamples ? std::nextafter(b, a) : a + k * step;
      const double v = g(x);
      if (v > best_val) {
        best_val = v;
        best = k;
      }
    }
    const double lo = std::max(a, a + (best - 1) * step);
    const double hi = std::min(std::nextafter(b, a), a + (best + 1) * step);
    m = std::max({m, best_val, hi > lo ? golden_max(g, lo, hi) : best_val});
  }
  return m;
}

ScalarFunction pointwise_norm(const VectorFunction& f, const VectorNorm& vnorm) {
  if (vnorm.dim() != f.dim()) throw std::invalid_argument("norm dimension does not match function");
  if (!f.on_circle()) {
    std::vector<double> values(f.pieces());
    for (std::size_t a = 0; a < f.pieces(); ++a) values[a] = vnorm(f.piece_coeffs(a));
    return ScalarFunction::atoms(f.space(), std::move(values));
  }
  if (f.degree() == 0) {
    std::vector<double> values(f.pieces());
    for (std::size_t i = 0; i < f.pieces(); ++i) values[i] = vnorm(f.piece_coeffs(i));
    return ScalarFunction::piecewise_constant({f.breaks().begin(), f.breaks().end()}, std::move(values));
  }
  std::vector<double> breaks;
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    breaks.push_back(f.piece_left(i));
    for (double k : norm_kinks(f, i, vnorm)) {
      if (k > breaks.back()) breaks.push_back(k);
    }
  }
  breaks.push_back(1.0);
  auto shared = std::make_shared<const VectorFunction>(f);
  return ScalarFunction::smooth_pieces(std::move(breaks), [shared, vnorm](double x) {
    thread_local Vec scratch;
    scratch.resize(shared->dim());
    shared->eval_piece_into(shared->piece_at(x), x, scratch);
    return vnorm(scratch);
  });
}

}  // namespace ergolab
