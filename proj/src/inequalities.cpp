#include "ergolab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ergolab/condexp.hpp"

namespace ergolab {

namespace {

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("inequality checks require finite p > 1");
}

double probe(const ScalarFunction& h, double x) {
  return h.on_circle() ? h(x) : h.at_atom(static_cast<std::size_t>(x));
}

// Pointwise max of piecewise-constant scalar functions (or atom tables).
ScalarFunction pointwise_max(std::span<const ScalarFunction> hs) {
  const auto& space = hs.front().space();
  if (!space->is_circle()) {
    std::vector<double> values(space->atoms(), -std::numeric_limits<double>::infinity());
    for (const auto& h : hs) {
      for (std::size_t a = 0; a < values.size(); ++a) values[a] = std::max(values[a], h.at_atom(a));
    }
    return ScalarFunction::atoms(space, std::move(values));
  }
  std::vector<double> breaks;
  for (const auto& h : hs) breaks.insert(breaks.end(), h.breaks().begin(), h.breaks().end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> values(breaks.size() - 1, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    for (const auto& h : hs) values[i] = std::max(values[i], h(mid));
  }
  return ScalarFunction::piecewise_constant(std::move(breaks), std::move(values));
}

ScalarFunction positive_part(const ScalarFunction& h) {
  std::vector<double> values(h.values().begin(), h.values().end());
  for (double& v : values) v = std::max(v, 0.0);
  if (!h.on_circle()) return ScalarFunction::atoms(h.space(), std::move(values));
  return ScalarFunction::piecewise_constant({h.breaks().begin(), h.breaks().end()}, std::move(values));
}

ScalarFunction from_cells(const Partition& partition, const std::vector<double>& cell_values) {
  const auto& space = partition.space();
  if (space->is_circle()) {
    return ScalarFunction::piecewise_constant({partition.edge_values().begin(), partition.edge_values().end()},
                                              cell_values);
  }
  std::vector<double> values(space->atoms());
  for (std::size_t a = 0; a < values.size(); ++a) values[a] = cell_values[partition.cell_of_atom(a)];
  return ScalarFunction::atoms(space, std::move(values));
}

std::size_t parent_cell(const Partition& coarse, const Partition& fine, std::size_t child) {
  if (fine.space()->is_circle()) return coarse.cell_of_point(0.5 * (fine.cell_left(child) + fine.cell_right(child)));
  return coarse.cell_of_atom(fine.atoms_in_cell(child).front());
}

std::string where(std::size_t index, double time) {
  std::ostringstream out;
  out << "index " << index << ", time " << time;
  return out.str();
}

}  // namespace

double dominant_constant(double p) {
  const double c = maximal_constant(p);
  return c * c;
}

double maximal_constant(double p) {
  require_p(p);
  return p / (p - 1.0);
}

DominantResult dominant_ineq(const ProcessGrid& grid, const VectorFunction& f, double p, const VectorNorm& vnorm) {
  DominantResult r;
  r.bound = dominant_constant(p) * lp_norm(f, p, vnorm);
  r.lhs = grid_sup_lp(grid.table, p, vnorm);
  r.ratio = r.bound > 0.0 ? r.lhs / r.bound : 0.0;
  r.pass = r.lhs <= r.bound + 1e-9;
  return r;
}

MaximalResult maximal_ineq(const ProcessGrid& grid, const VectorFunction& f, double p, double eps,
                           const VectorNorm& vnorm) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("epsilon must be positive");
  MaximalResult r;
  r.bound = maximal_constant(p) * lp_norm(f, p, vnorm) / eps;
  r.exceedance = union_superlevel_measure(grid.table, vnorm, eps);
  r.pass = r.exceedance <= r.bound + 1e-9;
  return r;
}

void require_inequality_hypotheses(double p, const Filtration& filtration) {
  require_p(p);
  if (filtration.increasing()) {
    throw std::invalid_argument("inequality checks require a decreasing filtration (F_s decreasing to F)");
  }
}

DominantResult dominant_ineq_me(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double p,
                                std::vector<double> t_grid, std::vector<double> s_grid, const VectorNorm& vnorm) {
  require_inequality_hypotheses(p, filtration);
  return dominant_ineq(me_process(f, flow, filtration, std::move(t_grid), std::move(s_grid)), f, p, vnorm);
}

DominantResult dominant_ineq_em(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double p,
                                std::vector<double> t_grid, std::vector<double> s_grid, const VectorNorm& vnorm) {
  require_inequality_hypotheses(p, filtration);
  return dominant_ineq(em_process(f, flow, filtration, std::move(t_grid), std::move(s_grid)), f, p, vnorm);
}

MaximalResult maximal_ineq_me(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double p,
                              std::vector<double> t_grid, std::vector<double> s_grid, double eps,
                              const VectorNorm& vnorm) {
  require_inequality_hypotheses(p, filtration);
  return maximal_ineq(me_process(f, flow, filtration, std::move(t_grid), std::move(s_grid)), f, p, eps, vnorm);
}

MaximalResult maximal_ineq_em(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double p,
                              std::vector<double> t_grid, std::vector<double> s_grid, double eps,
                              const VectorNorm& vnorm) {
  require_inequality_hypotheses(p, filtration);
  return maximal_ineq(em_process(f, flow, filtration, std::move(t_grid), std::move(s_grid)), f, p, eps, vnorm);
}

double domination_chain_check(const VectorFunction& f, const Flow& flow, const Partition& partition,
                              std::span<const double> t_grid, const VectorNorm& vnorm, std::size_t samples) {
  const DominantFlow dominant(flow);
  const ScalarFunction norm_f = pointwise_norm(f, vnorm);
  std::vector<double> points;
  if (f.on_circle()) {
    points = sample_points(samples);
  } else {
    for (std::size_t a = 0; a < f.pieces(); ++a) points.push_back(static_cast<double>(a));
  }
  auto value = [&](const VectorFunction& g, double x) {
    return vnorm(g.on_circle() ? g(x) : g.at_atom(static_cast<std::size_t>(x)));
  };
  double worst = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    const VectorFunction avg = cesaro_average(flow, t, f);
    const ScalarFunction avg_dom = dominant_cesaro(dominant, t, norm_f);
    const VectorFunction cond = cond_exp(avg, partition);
    const ScalarFunction cond_dom = cond_exp_dominant(avg_dom, partition);
    for (double x : points) {
      worst = std::max(worst, value(avg, x) - probe(avg_dom, x));
      worst = std::max(worst, value(cond, x) - probe(cond_dom, x));
    }
  }
  return worst;
}

SubmartingaleFamily::SubmartingaleFamily(Filtration filtration, std::vector<double> times,
                                         std::vector<std::vector<ScalarFunction>> processes)
    : filtration_(std::move(filtration)), times_(std::move(times)), processes_(std::move(processes)) {
  if (!filtration_.increasing()) throw std::invalid_argument("submartingale family needs an increasing filtration");
  if (times_.empty()) throw std::invalid_argument("submartingale family needs at least one time");
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (!(times_[k] >= 0.0) || (k > 0 && !(times_[k] > times_[k - 1]))) {
      throw std::invalid_argument("times must be nonnegative and strictly increasing");
    }
  }
  if (processes_.empty()) throw std::invalid_argument("submartingale family needs at least one member");
  for (std::size_t i = 0; i < processes_.size(); ++i) {
    if (processes_[i].size() != times_.size()) {
      throw std::invalid_argument("process " + std::to_string(i) + " needs one function per time");
    }
    for (const auto& g : processes_[i]) {
      require_same_space(g.space(), filtration_.space(), "submartingale family");
      if (g.on_circle() && !g.is_piecewise_constant()) {
        throw std::invalid_argument("process " + std::to_string(i) + " must be piecewise constant");
      }
    }
  }
  const auto points = probe_points();
  for (std::size_t i = 0; i < processes_.size(); ++i) {
    for (std::size_t k = 0; k < times_.size(); ++k) {
      const Partition& cells = filtration_.at(times_[k]);
      const ScalarFunction& g = processes_[i][k];
      const ScalarFunction avg = cond_exp_dominant(g, cells);
      for (double x : points) {
        if (std::abs(probe(g, x) - probe(avg, x)) > 1e-12) {
          throw std::invalid_argument("process not adapted at " + where(i, times_[k]));
        }
      }
      if (k + 1 == times_.size()) continue;
      const ScalarFunction next = cond_exp_dominant(processes_[i][k + 1], cells);
      for (double x : points) {
        if (probe(next, x) < probe(g, x) - 1e-12) {
          throw std::invalid_argument("submartingale property fails at " + where(i, times_[k]));
        }
      }
    }
  }
}

std::vector<double> SubmartingaleFamily::probe_points() const {
  const auto& space = filtration_.space();
  std::vector<double> points;
  if (!space->is_circle()) {
    for (std::size_t a = 0; a < space->atoms(); ++a) points.push_back(static_cast<double>(a));
    return points;
  }
  std::vector<double> breaks;
  for (const auto& row : processes_) {
    for (const auto& g : row) breaks.insert(breaks.end(), g.breaks().begin(), g.breaks().end());
  }
  for (double s : times_) {
    const auto edges = filtration_.at(s).edge_values();
    breaks.insert(breaks.end(), edges.begin(), edges.end());
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) points.push_back(0.5 * (breaks[i] + breaks[i + 1]));
  return points;
}

SubmartingaleFamily SubmartingaleFamily::random(Rng& rng, const Filtration& filtration, std::size_t members) {
  const int levels = filtration.max_level();
  std::vector<double> times;
  for (int k = 0; k <= levels; ++k) times.push_back(static_cast<double>(k));
  std::vector<std::vector<ScalarFunction>> processes(members);
  for (auto& row : processes) {
    std::vector<double> cells{rng.uniform(-1.0, 1.0)};
    row.push_back(from_cells(filtration.at_level(0), cells));
    for (int k = 0; k < levels; ++k) {
      const Partition& coarse = filtration.at_level(k);
      const Partition& fine = filtration.at_level(k + 1);
      std::vector<double> noise(fine.cells());
      for (double& v : noise) v = rng.uniform(-0.5, 0.5);
      // Remove the weighted mean of the noise inside every coarse cell.
      std::vector<double> mass(coarse.cells(), 0.0);
      for (std::size_t c = 0; c < fine.cells(); ++c) mass[parent_cell(coarse, fine, c)] += fine.cell_measure(c) * noise[c];
      std::vector<double> next(fine.cells());
      for (std::size_t c = 0; c < fine.cells(); ++c) {
        const std::size_t parent = parent_cell(coarse, fine, c);
        const double centered = noise[c] - mass[parent] / coarse.cell_measure(parent);
        next[c] = cells[parent] + rng.uniform(0.0, 0.25) + centered;
      }
      cells = std::move(next);
      row.push_back(from_cells(fine, cells));
    }
  }
  return SubmartingaleFamily(filtration, std::move(times), std::move(processes));
}

SubmartingaleReport submartingale_sup_check(const SubmartingaleFamily& family) {
  SubmartingaleReport r;
  const auto points = family.probe_points();
  const std::size_t steps = family.times().size();
  std::vector<ScalarFunction> sup;
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<ScalarFunction> slice;
    for (std::size_t i = 0; i < family.members(); ++i) slice.push_back(family.at(i, k));
    sup.push_back(pointwise_max(slice));
    r.hypothesis = std::max(r.hypothesis, positive_part(sup.back()).integral());
  }
  for (std::size_t k = 0; k + 1 < steps; ++k) {
    const ScalarFunction next = cond_exp_dominant(sup[k + 1], family.filtration().at(family.times()[k]));
    for (double x : points) r.sup_defect = std::max(r.sup_defect, probe(sup[k], x) - probe(next, x));
  }
  r.sup_is_submartingale = r.sup_defect <= 1e-12;
  for (double x : points) {
    double direct = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < family.members(); ++i) direct = std::max(direct, probe(family.at(i, steps - 1), x));
    r.terminal_defect = std::max(r.terminal_defect, std::abs(probe(sup.back(), x) - direct));
  }
  r.terminal_exchange = r.terminal_defect == 0.0;
  return r;
}

}  // namespace ergolab
