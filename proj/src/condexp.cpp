#include "ergolab/condexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ergolab {

LinearFunctional::LinearFunctional(Vec coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw std::invalid_argument("linear functional needs a positive dimension");
}

double LinearFunctional::operator()(std::span<const double> v) const {
  if (v.size() != coeffs_.size()) throw std::invalid_argument("functional dimension mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) acc += coeffs_[j] * v[j];
  return acc;
}

VectorFunction LinearFunctional::apply(const VectorFunction& f) const {
  if (f.dim() != dim()) throw std::invalid_argument("functional dimension does not match function");
  const auto raw = f.raw_coeffs();
  std::vector<double> out(raw.size() / dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (*this)(raw.subspan(k * dim(), dim()));
  if (f.on_circle()) {
    return VectorFunction::piecewise({f.breaks().begin(), f.breaks().end()}, f.degree(), 1, std::move(out));
  }
  return VectorFunction::atoms(f.space(), 1, std::move(out));
}

VectorFunction cond_exp(const VectorFunction& f, const Partition& partition) {
  require_same_space(f.space(), partition.space(), "cond_exp");
  const std::size_t d = f.dim();
  if (f.on_circle()) {
    std::vector<double> values(partition.cells() * d);
    for (std::size_t c = 0; c < partition.cells(); ++c) {
      const Vec total = integrate(f, partition, c);
      const double m = partition.cell_measure(c);
      for (std::size_t j = 0; j < d; ++j) values[c * d + j] = total[j] / m;
    }
    return VectorFunction::piecewise({partition.edge_values().begin(), partition.edge_values().end()}, 0, d,
                                     std::move(values));
  }
  // Average of deviations from the first atom: exact when f is constant on the cell.
  std::vector<double> values(f.pieces() * d);
  for (std::size_t c = 0; c < partition.cells(); ++c) {
    const auto members = partition.atoms_in_cell(c);
    const auto ref = f.piece_coeffs(members.front());
    Vec avg(ref.begin(), ref.end());
    Vec dev(d, 0.0);
    for (auto a : members) {
      const auto v = f.piece_coeffs(a);
      for (std::size_t j = 0; j < d; ++j) dev[j] += f.piece_measure(a) * (v[j] - ref[j]);
    }
    for (std::size_t j = 0; j < d; ++j) avg[j] += dev[j] / partition.cell_measure(c);
    for (auto a : members) std::copy(avg.begin(), avg.end(), values.begin() + static_cast<std::ptrdiff_t>(a * d));
  }
  return VectorFunction::atoms(f.space(), d, std::move(values));
}

ScalarFunction cond_exp_dominant(const ScalarFunction& h, const Partition& partition) {
  require_same_space(h.space(), partition.space(), "cond_exp_dominant");
  if (h.on_circle()) {
    std::vector<double> values(partition.cells());
    for (std::size_t c = 0; c < partition.cells(); ++c) {
      values[c] = h.integral(partition, c) / partition.cell_measure(c);
    }
    return ScalarFunction::piecewise_constant({partition.edge_values().begin(), partition.edge_values().end()},
                                              std::move(values));
  }
  std::vector<double> values(h.values().size());
  for (std::size_t c = 0; c < partition.cells(); ++c) {
    const auto members = partition.atoms_in_cell(c);
    const double ref = h.at_atom(members.front());
    double dev = 0.0;
    for (auto a : members) dev += h.space()->weight(a) * (h.at_atom(a) - ref);
    const double avg = ref + dev / partition.cell_measure(c);
    for (auto a : members) values[a] = avg;
  }
  return ScalarFunction::atoms(h.space(), std::move(values));
}

double defining_property_check(const VectorFunction& f, const Partition& partition, const VectorNorm& vnorm) {
  const VectorFunction e = cond_exp(f, partition);
  double worst = 0.0;
  for (std::size_t c = 0; c < partition.cells(); ++c) {
    Vec lhs = integrate(e, partition, c);
    const Vec rhs = integrate(f, partition, c);
    for (std::size_t j = 0; j < lhs.size(); ++j) lhs[j] -= rhs[j];
    worst = std::max(worst, vnorm(lhs));
  }
  return worst;
}

std::vector<double> sample_points(std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t k = 0; k < n; ++k) xs[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
  return xs;
}

double functional_commutation_check(const VectorFunction& f, const Partition& partition,
                                    const LinearFunctional& g, std::size_t samples) {
  const VectorFunction lhs = g.apply(cond_exp(f, partition));
  const ScalarFunction rhs = cond_exp_dominant(ScalarFunction::from_scalar(g.apply(f)), partition);
  double worst = 0.0;
  if (f.on_circle()) {
    for (double x : sample_points(samples)) worst = std::max(worst, std::abs(lhs(x)[0] - rhs(x)));
  } else {
    for (std::size_t a = 0; a < f.pieces(); ++a) worst = std::max(worst, std::abs(lhs.at_atom(a)[0] - rhs.at_atom(a)));
  }
  return worst;
}

double cond_exp_domination_defect(const VectorFunction& f, const Partition& partition, const VectorNorm& vnorm,
                                  std::size_t samples) {
  const VectorFunction e = cond_exp(f, partition);
  const ScalarFunction dom = cond_exp_dominant(pointwise_norm(f, vnorm), partition);
  double worst = -std::numeric_limits<double>::infinity();
  if (f.on_circle()) {
    for (double x : sample_points(samples)) worst = std::max(worst, vnorm(e(x)) - dom(x));
  } else {
    for (std::size_t a = 0; a < f.pieces(); ++a) worst = std::max(worst, vnorm(e.at_atom(a)) - dom.at_atom(a));
  }
  return worst;
}

}  // namespace ergolab
