#include "ergolab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ergolab/quadrature.hpp"

namespace ergolab {

namespace {

void require_time(double t, bool strict) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  if (strict ? !(t > 0.0) : t < 0.0) {
    throw std::invalid_argument(strict ? "averaging time must be positive" : "flow time must be nonnegative");
  }
}

std::vector<double> shifted_breaks(std::span<const double> breaks, double s) {
  std::vector<double> out{0.0, 1.0};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    out.push_back(breaks[i]);
    double c = breaks[i] - s;
    if (c < 0.0) c += 1.0;
    if (c >= 1.0) c = 0.0;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t locate(std::span<const double> breaks, double x) {
  auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - breaks.begin());
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, breaks.size() - 2);
}

// Exact path integral of the step flow over [0, t] applied to an atom table
// with `width` entries per atom.
std::vector<double> step_cesaro_values(const Flow& flow, double t, std::span<const double> values,
                                       std::size_t width) {
  const std::size_t atoms = flow.space()->atoms();
  const std::size_t n = flow.steps(t);
  const double h = flow.step_width();
  const double rem = std::max(0.0, t - static_cast<double>(n) * h);
  const auto& map = flow.base_map();
  std::vector<double> sum(atoms * width, 0.0);
  std::vector<std::size_t> cur(atoms);
  for (std::size_t a = 0; a < atoms; ++a) cur[a] = a;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < atoms; ++a) {
      for (std::size_t j = 0; j < width; ++j) sum[a * width + j] += values[cur[a] * width + j];
    }
    for (auto& c : cur) c = map[c];
  }
  std::vector<double> out(atoms * width);
  for (std::size_t a = 0; a < atoms; ++a) {
    for (std::size_t j = 0; j < width; ++j) {
      out[a * width + j] = (h * sum[a * width + j] + rem * values[cur[a] * width + j]) / t;
    }
  }
  return out;
}

}  // namespace

Flow Flow::identity(SpacePtr space) {
  if (!space) throw std::invalid_argument("flow needs a space");
  Flow f;
  f.kind_ = Kind::identity;
  f.space_ = std::move(space);
  return f;
}

Flow Flow::rotation(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("rotation angle must lie in (0, 1)");
  Flow f;
  f.kind_ = Kind::rotation;
  f.space_ = MeasureSpace::circle();
  f.theta_ = theta;
  return f;
}

Flow Flow::step(SpacePtr space, std::vector<std::size_t> map, double h) {
  if (!space || !space->is_atomic()) throw std::invalid_argument("step flow needs an atomic space");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("step width must be positive");
  if (map.size() != space->atoms()) throw std::invalid_argument("base map needs one image per atom");
  std::vector<bool> hit(map.size(), false);
  for (std::size_t a = 0; a < map.size(); ++a) {
    if (map[a] >= map.size() || hit[map[a]]) throw std::invalid_argument("base map is not a permutation");
    hit[map[a]] = true;
    if (std::abs(space->weight(map[a]) - space->weight(a)) > 1e-15 * space->total_mass()) {
      throw std::invalid_argument("base map does not preserve weights at atom " + std::to_string(a));
    }
  }
  Flow f;
  f.kind_ = Kind::step;
  f.space_ = std::move(space);
  f.h_ = h;
  f.map_ = std::move(map);
  return f;
}

Flow Flow::shift(SpacePtr space, std::size_t shift, double h) {
  if (!space || !space->is_atomic()) throw std::invalid_argument("shift flow needs an atomic space");
  std::vector<std::size_t> map(space->atoms());
  if (space->kind() == MeasureSpace::Kind::product) {
    const std::size_t n = space->cyclic_size();
    const std::size_t m = space->inner_size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) map[i * m + j] = ((i + shift) % n) * m + j;
    }
  } else {
    for (std::size_t a = 0; a < map.size(); ++a) map[a] = (a + shift) % map.size();
  }
  return step(std::move(space), std::move(map), h);
}

std::string Flow::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::identity:
      out << "identity";
      break;
    case Kind::rotation:
      out << "rotation(theta=" << theta_ << ")";
      break;
    case Kind::step:
      out << "step(atoms=" << map_.size() << ", h=" << h_ << ")";
      break;
  }
  return out.str();
}

Flow::Displacement Flow::displacement(double t) const {
  Displacement d;
  if (kind_ != Kind::rotation) return d;
  const double p = t * theta_;
  const double e = std::fma(t, theta_, -p);
  d.total = p + e;
  d.whole = std::floor(p);
  d.frac = (p - d.whole) + e;
  if (d.frac < 0.0) {
    d.frac += 1.0;
    d.whole -= 1.0;
  } else if (d.frac >= 1.0) {
    d.frac -= 1.0;
    d.whole += 1.0;
  }
  if (d.frac >= 1.0) d.frac = 0.0;
  return d;
}

std::size_t Flow::steps(double t) const {
  if (kind_ != Kind::step) return 0;
  double n = std::floor(t / h_);
  if ((n + 1.0) * h_ <= t) n += 1.0;
  if (n > 0.0 && n * h_ > t) n -= 1.0;
  return static_cast<std::size_t>(n);
}

std::vector<std::size_t> Flow::map_power(std::size_t n) const {
  std::vector<std::size_t> out(map_.size());
  std::vector<bool> seen(map_.size(), false);
  std::vector<std::size_t> cycle;
  for (std::size_t start = 0; start < map_.size(); ++start) {
    if (seen[start]) continue;
    cycle.clear();
    for (std::size_t a = start; !seen[a]; a = map_[a]) {
      seen[a] = true;
      cycle.push_back(a);
    }
    const std::size_t len = cycle.size();
    for (std::size_t i = 0; i < len; ++i) out[cycle[i]] = cycle[(i + n % len) % len];
  }
  return out;
}

VectorFunction apply_flow(const Flow& flow, double t, const VectorFunction& f) {
  require_time(t, false);
  require_same_space(flow.space(), f.space(), "apply_flow");
  switch (flow.kind()) {
    case Flow::Kind::identity:
      return f;
    case Flow::Kind::rotation:
      return f.rotated(flow.displacement(t).frac);
    case Flow::Kind::step:
      return f.permuted(flow.map_power(flow.steps(t)));
  }
  return f;
}

VectorFunction apply_time_one(const Flow& flow, std::size_t k, const VectorFunction& f) {
  require_same_space(flow.space(), f.space(), "apply_time_one");
  switch (flow.kind()) {
    case Flow::Kind::identity:
      return f;
    case Flow::Kind::rotation:
      return f.rotated(flow.displacement(static_cast<double>(k)).frac);
    case Flow::Kind::step:
      return f.permuted(flow.map_power(k * flow.steps(1.0)));
  }
  return f;
}

VectorFunction cesaro_average(const Flow& flow, double t, const VectorFunction& f) {
  require_time(t, true);
  require_same_space(flow.space(), f.space(), "cesaro_average");
  switch (flow.kind()) {
    case Flow::Kind::identity:
      return f;
    case Flow::Kind::step: {
      auto values = step_cesaro_values(flow, t, f.raw_coeffs(), f.dim());
      return VectorFunction::atoms(f.space(), f.dim(), std::move(values));
    }
    case Flow::Kind::rotation:
      break;
  }
  if (f.degree() >= VectorFunction::kMaxDegree) {
    throw std::invalid_argument("cesaro average would exceed the degree cap");
  }
  const auto d = flow.displacement(t);
  const VectorFunction F0 = f.antiderivative();
  const Vec mass = integrate(f);
  const std::size_t dim = f.dim();
  // Wrap count: floor(x + t*theta) equals whole below 1 - frac, whole + 1 above.
  std::vector<double> breaks{0.0, 1.0};
  std::vector<double> wrap(dim);
  for (std::size_t j = 0; j < dim; ++j) wrap[j] = d.whole * mass[j];
  if (d.frac > 0.0) {
    double c = 0.0 - d.frac;
    c += 1.0;
    breaks = {0.0, c, 1.0};
    wrap.resize(2 * dim);
    for (std::size_t j = 0; j < dim; ++j) wrap[dim + j] = (d.whole + 1.0) * mass[j];
  }
  const VectorFunction W = VectorFunction::piecewise(std::move(breaks), 0, dim, std::move(wrap));
  return (1.0 / d.total) * (F0.rotated(d.frac) - F0 + W);
}

namespace {

// Sum of T_1^k f for k in [lo, hi), split in halves so rotated copies are
// merged in balanced pairs rather than onto one ever-growing accumulator.
VectorFunction iterate_sum(const Flow& flow, std::size_t lo, std::size_t hi, const VectorFunction& f) {
  if (hi - lo == 1) return lo == 0 ? f : apply_time_one(flow, lo, f);
  const std::size_t mid = lo + (hi - lo) / 2;
  return iterate_sum(flow, lo, mid, f) + iterate_sum(flow, mid, hi, f);
}

}  // namespace

VectorFunction discrete_average(const Flow& flow, std::size_t n, const VectorFunction& f) {
  if (n == 0) throw std::invalid_argument("discrete average needs n >= 1");
  if (n == 1) return f;
  return (1.0 / static_cast<double>(n)) * iterate_sum(flow, 0, n, f);
}

ScalarFunction dominant_apply(const DominantFlow& dflow, double t, const ScalarFunction& h) {
  require_time(t, false);
  const Flow& flow = dflow.flow();
  require_same_space(flow.space(), h.space(), "dominant_apply");
  switch (flow.kind()) {
    case Flow::Kind::identity:
      return h;
    case Flow::Kind::step: {
      const auto map = flow.map_power(flow.steps(t));
      std::vector<double> values(map.size());
      for (std::size_t a = 0; a < map.size(); ++a) values[a] = h.at_atom(map[a]);
      return ScalarFunction::atoms(h.space(), std::move(values));
    }
    case Flow::Kind::rotation:
      break;
  }
  const double s = flow.displacement(t).frac;
  if (s == 0.0) return h;
  std::vector<double> own{0.0, 1.0};
  for (std::size_t i = 0; i + 1 < h.breaks().size(); ++i) {
    double c = h.breaks()[i] - s;
    if (c < 0.0) c += 1.0;
    if (c >= 1.0) c = 0.0;
    own.push_back(c);
  }
  std::sort(own.begin(), own.end());
  own.erase(std::unique(own.begin(), own.end()), own.end());
  if (h.is_piecewise_constant()) {
    std::vector<double> values(own.size() - 1);
    for (std::size_t i = 0; i + 1 < own.size(); ++i) values[i] = h(0.5 * (own[i] + own[i + 1]) + s);
    return ScalarFunction::piecewise_constant(std::move(own), std::move(values));
  }
  return ScalarFunction::smooth_pieces(std::move(own), [h, s](double x) { return h(x + s); });
}

ScalarFunction dominant_cesaro(const DominantFlow& dflow, double t, const ScalarFunction& h) {
  require_time(t, true);
  const Flow& flow = dflow.flow();
  require_same_space(flow.space(), h.space(), "dominant_cesaro");
  switch (flow.kind()) {
    case Flow::Kind::identity:
      return h;
    case Flow::Kind::step:
      return ScalarFunction::atoms(h.space(), step_cesaro_values(flow, t, h.values(), 1));
    case Flow::Kind::rotation:
      break;
  }
  // Cell integrals of the average go through the primitives H(y) = int_0^y h
  // and K(y) = int_0^y x h(x) dx: int_0^r H = r H(r) - K(r).
  struct State {
    ScalarFunction h;
    std::vector<double> cum;
    std::vector<double> cumx;
    double whole = 0.0;
    double frac = 0.0;
    double total = 0.0;
    double mass = 0.0;
    double primitive(double y) const {
      const std::size_t i = locate(h.breaks(), y);
      return cum[i] + h.integral(h.breaks()[i], y);
    }
    double moment(double y) const {
      const std::size_t i = locate(h.breaks(), y);
      return cumx[i] + moment_piece(h.breaks()[i], y);
    }
    double moment_piece(double a, double b) const {
      if (!(b > a)) return 0.0;
      return quad::adaptive([this](double x) { return x * h(x); }, a, b, 1e-16 + 1e-14 * (b - a));
    }
    // int_0^r H for r in [0, 1]
    double second(double r) const { return r >= 1.0 ? cum.back() - cumx.back() : r * primitive(r) - moment(r); }
    // int_0^v of the unwrapped primitive, v in [0, 2]
    double second_wrapped(double v) const {
      if (v <= 1.0) return second(v);
      return second(1.0) + mass * (v - 1.0) + second(v - 1.0);
    }
    double eval(double x) const {
      double y = x + frac;
      double w = whole;
      if (y >= 1.0) {
        y -= 1.0;
        w += 1.0;
      }
      return (primitive(y) - primitive(x) + w * mass) / total;
    }
    double integral(double a, double b) const {
      const double shifted = second_wrapped(b + frac) - second_wrapped(a + frac);
      return ((b - a) * whole * mass + shifted - (second(b) - second(a))) / total;
    }
  };
  const auto d = flow.displacement(t);
  auto st = std::make_shared<State>(State{h, {}, {}, d.whole, d.frac, d.total, 0.0});
  const auto hb = h.breaks();
  st->cum.assign(hb.size(), 0.0);
  st->cumx.assign(hb.size(), 0.0);
  for (std::size_t i = 0; i + 1 < hb.size(); ++i) {
    st->cum[i + 1] = st->cum[i] + h.integral(hb[i], hb[i + 1]);
    st->cumx[i + 1] = st->cumx[i] + st->moment_piece(hb[i], hb[i + 1]);
  }
  st->mass = st->cum.back();
  return ScalarFunction::smooth_pieces(
      shifted_breaks(hb, d.frac), [st](double x) { return st->eval(x); },
      [st](double a, double b) { return st->integral(a, b); });
}

std::string to_string(Flow::Kind kind) {
  switch (kind) {
    case Flow::Kind::identity:
      return "identity";
    case Flow::Kind::rotation:
      return "rotation";
    case Flow::Kind::step:
      return "step";
  }
  return "?";
}

}  // namespace ergolab
