#include "ergolab/processes.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "ergolab/condexp.hpp"
#include "ergolab/quadrature.hpp"

namespace ergolab {

std::string to_string(ProcessKind kind) { return kind == ProcessKind::me ? "me" : "em"; }

void validate_grids(std::span<const double> t_grid, std::span<const double> s_grid) {
  if (t_grid.empty() || s_grid.empty()) throw std::invalid_argument("time grids must be nonempty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) throw std::invalid_argument("t_grid entries must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("t_grid must be strictly increasing");
  }
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] >= 0.0) || !std::isfinite(s_grid[i])) {
      throw std::invalid_argument("s_grid entries must be nonnegative");
    }
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw std::invalid_argument("s_grid must be strictly increasing");
  }
}

ProcessGrid me_process(const VectorFunction& f, const Flow& flow, const Filtration& filtration,
                       std::vector<double> t_grid, std::vector<double> s_grid) {
  validate_grids(t_grid, s_grid);
  require_same_space(f.space(), filtration.space(), "me_process");
  ProcessGrid grid{ProcessKind::me, std::move(t_grid), std::move(s_grid), {}};
  grid.table.reserve(grid.t_grid.size() * grid.s_grid.size());
  for (double t : grid.t_grid) {
    const VectorFunction avg = cesaro_average(flow, t, f);
    for (double s : grid.s_grid) grid.table.push_back(cond_exp(avg, filtration.at(s)));
  }
  return grid;
}

ProcessGrid em_process(const VectorFunction& f, const Flow& flow, const Filtration& filtration,
                       std::vector<double> t_grid, std::vector<double> s_grid) {
  validate_grids(t_grid, s_grid);
  require_same_space(f.space(), filtration.space(), "em_process");
  ProcessGrid grid{ProcessKind::em, std::move(t_grid), std::move(s_grid), {}};
  std::vector<VectorFunction> conditioned;
  conditioned.reserve(grid.s_grid.size());
  for (double s : grid.s_grid) conditioned.push_back(cond_exp(f, filtration.at(s)));
  grid.table.reserve(grid.t_grid.size() * grid.s_grid.size());
  for (double t : grid.t_grid) {
    for (const auto& e : conditioned) grid.table.push_back(cesaro_average(flow, t, e));
  }
  return grid;
}

VectorFunction ergodic_limit(const Flow& flow, const VectorFunction& f) {
  require_same_space(flow.space(), f.space(), "ergodic_limit");
  switch (flow.kind()) {
    case Flow::Kind::identity:
      return f;
    case Flow::Kind::rotation:
      return VectorFunction::constant(f.space(), integrate(f));
    case Flow::Kind::step:
      break;
  }
  const auto& map = flow.base_map();
  const std::size_t d = f.dim();
  std::vector<double> values(map.size() * d, 0.0);
  std::vector<bool> seen(map.size(), false);
  std::vector<std::size_t> cycle;
  for (std::size_t start = 0; start < map.size(); ++start) {
    if (seen[start]) continue;
    cycle.clear();
    for (std::size_t a = start; !seen[a]; a = map[a]) {
      seen[a] = true;
      cycle.push_back(a);
    }
    Vec avg(d, 0.0);
    for (auto a : cycle) {
      const auto v = f.piece_coeffs(a);
      for (std::size_t j = 0; j < d; ++j) avg[j] += v[j];
    }
    for (std::size_t j = 0; j < d; ++j) avg[j] /= static_cast<double>(cycle.size());
    for (auto a : cycle) std::copy(avg.begin(), avg.end(), values.begin() + static_cast<std::ptrdiff_t>(a * d));
  }
  return VectorFunction::atoms(f.space(), d, std::move(values));
}

ProcessLimits limits(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double t_max,
                     const VectorNorm& vnorm) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  const Partition& terminal = filtration.terminal();
  ProcessLimits out{ergodic_limit(flow, f), f, f, t_max, 0.0};
  out.f_star = cond_exp(out.f_inf, terminal);
  out.f_lowstar = ergodic_limit(flow, cond_exp(f, terminal));
  out.surrogate_gap = sup_norm(cesaro_average(flow, t_max, f) - out.f_inf, vnorm);
  return out;
}

double cesaro_decomposition_check(const Flow& flow, const VectorFunction& g, double t, const VectorNorm& vnorm) {
  if (!(t >= 1.0) || !std::isfinite(t)) throw std::invalid_argument("decomposition needs t >= 1");
  if (flow.kind() == Flow::Kind::step) {
    const double per_unit = 1.0 / flow.step_width();
    if (std::abs(per_unit - std::round(per_unit)) > 1e-12 * per_unit ||
        static_cast<double>(flow.steps(1.0)) != std::round(per_unit)) {
      throw std::invalid_argument("decomposition needs a step width dividing 1");
    }
  }
  const double n = std::floor(t);
  const double alpha = t - n;
  const auto count = static_cast<std::size_t>(n);
  const VectorFunction lhs = cesaro_average(flow, t, g);
  VectorFunction inner = discrete_average(flow, count, cesaro_average(flow, 1.0, g));
  if (alpha > 0.0) {
    inner = inner + (alpha / n) * apply_time_one(flow, count, cesaro_average(flow, alpha, g));
  }
  return sup_norm(lhs - (n / t) * inner, vnorm);
}

double commutation_check(const Flow& flow, const VectorFunction& f, const Partition& partition,
                         std::span<const double> t_grid, const VectorNorm& vnorm) {
  const VectorFunction conditioned = cond_exp(f, partition);
  double worst = 0.0;
  for (double t : t_grid) {
    const VectorFunction lhs = apply_flow(flow, t, conditioned);
    const VectorFunction rhs = cond_exp(apply_flow(flow, t, f), partition);
    worst = std::max(worst, sup_norm(lhs - rhs, vnorm));
  }
  return worst;
}

std::vector<ConvergenceRow> convergence_table(const ProcessGrid& grid, const VectorFunction& target, double p,
                                              const VectorNorm& vnorm) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(grid.table.size());
  for (std::size_t ti = 0; ti < grid.t_grid.size(); ++ti) {
    for (std::size_t si = 0; si < grid.s_grid.size(); ++si) {
      const VectorFunction diff = grid.at(ti, si) - target;
      rows.push_back({grid.t_grid[ti], grid.s_grid[si], lp_norm(diff, p, vnorm), sup_norm(diff, vnorm)});
    }
  }
  return rows;
}

std::vector<DiagonalRow> diagonal_errors(const ProcessGrid& grid, std::span<const ConvergenceRow> table) {
  const std::size_t nt = grid.t_grid.size();
  const std::size_t ns = grid.s_grid.size();
  if (table.size() != nt * ns) throw std::invalid_argument("convergence table does not match grid");
  std::vector<DiagonalRow> rows;
  for (std::size_t k = 0; k < std::max(nt, ns); ++k) {
    const std::size_t ti = std::min(k, nt - 1), si = std::min(k, ns - 1);
    rows.push_back({grid.t_grid[ti], grid.s_grid[si], ti, si, table[ti * ns + si].sup_error,
                    table[ti * ns + ns - 1].sup_error, table[(nt - 1) * ns + si].sup_error});
  }
  return rows;
}

bool diagonal_pass(std::span<const double> errors, double threshold) {
  if (errors.empty()) return true;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    if (errors[k + 1] > 1.1 * errors[k] + 1e-12) return false;
  }
  return errors.back() <= threshold;
}

namespace {

std::vector<double> merged_breaks(std::span<const VectorFunction> fs) {
  std::vector<double> all;
  for (const auto& f : fs) all.insert(all.end(), f.breaks().begin(), f.breaks().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

void require_common_space(std::span<const VectorFunction> fs) {
  if (fs.empty()) throw std::invalid_argument("grid sup needs at least one function");
  for (const auto& f : fs) require_same_space(f.space(), fs.front().space(), "grid_sup");
}

}  // namespace

ScalarFunction grid_sup(std::span<const VectorFunction> fs, const VectorNorm& vnorm) {
  require_common_space(fs);
  if (!fs.front().on_circle()) {
    std::vector<double> values(fs.front().pieces(), 0.0);
    for (const auto& f : fs) {
      for (std::size_t a = 0; a < values.size(); ++a) values[a] = std::max(values[a], vnorm(f.piece_coeffs(a)));
    }
    return ScalarFunction::atoms(fs.front().space(), std::move(values));
  }
  auto owned = std::make_shared<std::vector<VectorFunction>>(fs.begin(), fs.end());
  return ScalarFunction::smooth_pieces(merged_breaks(fs), [owned, vnorm](double x) {
    double m = 0.0;
    for (const auto& f : *owned) m = std::max(m, vnorm(f(x)));
    return m;
  });
}

double grid_sup_lp(std::span<const VectorFunction> fs, double p, const VectorNorm& vnorm) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("grid_sup_lp requires finite p >= 1");
  require_common_space(fs);
  if (!fs.front().on_circle()) return lp_norm(grid_sup(fs, vnorm), p);
  const auto breaks = merged_breaks(fs);
  const std::size_t dim = fs.front().dim();
  std::vector<std::size_t> piece(fs.size(), 0);
  std::vector<double> scratch(dim);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    bool flat = true;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      while (fs[k].piece_right(piece[k]) <= a) ++piece[k];
      flat = flat && fs[k].degree() == 0;
    }
    auto sup_at = [&](double x) {
      double m = 0.0;
      for (std::size_t k = 0; k < fs.size(); ++k) {
        fs[k].eval_piece_into(piece[k], x, scratch);
        m = std::max(m, vnorm(scratch));
      }
      return m;
    };
    if (flat) {
      total += (b - a) * std::pow(sup_at(a), p);
    } else {
      total += quad::adaptive([&](double x) { return std::pow(sup_at(x), p); }, a, b, 1e-16 + 1e-14 * (b - a));
    }
  }
  return std::pow(total, 1.0 / p);
}

double sup_integrability_flow(const VectorFunction& f, const Flow& flow, std::span<const double> t_grid,
                              const VectorNorm& vnorm) {
  std::vector<VectorFunction> entries;
  entries.reserve(t_grid.size());
  for (double t : t_grid) entries.push_back(cesaro_average(flow, t, f));
  return grid_sup_lp(entries, 1.0, vnorm);
}

double sup_integrability_filtration(const VectorFunction& f, const Filtration& filtration,
                                    std::span<const double> s_grid, const VectorNorm& vnorm) {
  std::vector<VectorFunction> entries;
  entries.reserve(s_grid.size());
  for (double s : s_grid) entries.push_back(cond_exp(f, filtration.at(s)));
  return grid_sup_lp(entries, 1.0, vnorm);
}

std::optional<double> ergodic_envelope_constant(const Flow& flow, const VectorFunction& f,
                                                const VectorNorm& vnorm) {
  if (flow.kind() != Flow::Kind::rotation) return std::nullopt;
  const VectorFunction centered = f - VectorFunction::constant(f.space(), integrate(f));
  return 2.0 * sup_norm(centered.antiderivative(), vnorm) / flow.theta();
}

std::optional<double> lipschitz_constant(const VectorFunction& f, const VectorNorm& vnorm) {
  if (!f.on_circle() || interior_jump(f, vnorm) > 1e-12) return std::nullopt;
  return sup_norm(f.derivative(), vnorm);
}

}  // namespace ergolab
