#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergolab/measure_space.hpp"
#include "ergolab/scalar_function.hpp"
#include "ergolab/semigroup.hpp"
#include "ergolab/vector_function.hpp"

namespace ergolab {

enum class ProcessKind {
  me,  // E(A_t f | F_s)
  em,  // A_t E(f | F_s)
};

std::string to_string(ProcessKind kind);

/// Process values on a finite (t, s) grid, stored t-major.
struct ProcessGrid {
  ProcessKind kind = ProcessKind::me;
  std::vector<double> t_grid;
  std::vector<double> s_grid;
  std::vector<VectorFunction> table;

  const VectorFunction& at(std::size_t ti, std::size_t si) const { return table.at(ti * s_grid.size() + si); }
};

/// Throws unless t_grid is positive and strictly increasing and s_grid is
/// nonnegative and strictly increasing (both nonempty).
void validate_grids(std::span<const double> t_grid, std::span<const double> s_grid);

ProcessGrid me_process(const VectorFunction& f, const Flow& flow, const Filtration& filtration,
                       std::vector<double> t_grid, std::vector<double> s_grid);
ProcessGrid em_process(const VectorFunction& f, const Flow& flow, const Filtration& filtration,
                       std::vector<double> t_grid, std::vector<double> s_grid);

/// lim_t A_t f, exact: f for the identity flow, the constant mean for a
/// rotation (the continuous flow is ergodic for every angle), the average over
/// each cycle of S for a step flow.
VectorFunction ergodic_limit(const Flow& flow, const VectorFunction& f);

struct ProcessLimits {
  VectorFunction f_inf;     // lim A_t f
  VectorFunction f_star;    // E(f_inf | terminal partition)
  VectorFunction f_lowstar; // lim A_t E(f | terminal partition)
  double t_max = 0.0;
  /// sup ||A_{t_max} f - f_inf||, the distance from the finite-time surrogate.
  double surrogate_gap = 0.0;
};

ProcessLimits limits(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double t_max,
                     const VectorNorm& vnorm);

/// sup ||A_t g - (n/t)[S_n(T_1)(A_1 g) + (alpha/n) T_1^n A_alpha g]|| with
/// t = n + alpha. Throws for t < 1, and for step flows whose width does not
/// divide 1 (the time-one map is then not a semigroup element on the h-grid).
double cesaro_decomposition_check(const Flow& flow, const VectorFunction& g, double t, const VectorNorm& vnorm);

/// max over t of sup ||T_t E(f|P) - E(T_t f|P)||.
double commutation_check(const Flow& flow, const VectorFunction& f, const Partition& partition,
                         std::span<const double> t_grid, const VectorNorm& vnorm);

struct ConvergenceRow {
  double t = 0.0;
  double s = 0.0;
  double lp_error = 0.0;
  double sup_error = 0.0;
};

std::vector<ConvergenceRow> convergence_table(const ProcessGrid& grid, const VectorFunction& target, double p,
                                              const VectorNorm& vnorm);

/// Diagonal (t_k, s_k) sup errors and both iterated orders. The shorter grid
/// is held at its last value, so the diagonal runs over the longer one.
struct DiagonalRow {
  double t = 0.0;
  double s = 0.0;
  std::size_t ti = 0, si = 0;
  double joint = 0.0;        // error at (t_k, s_k)
  double iterated_st = 0.0;  // error at (t_k, s_last): s first, then t
  double iterated_ts = 0.0;  // error at (t_last, s_k): t first, then s
};
std::vector<DiagonalRow> diagonal_errors(const ProcessGrid& grid, std::span<const ConvergenceRow> table);

/// e_{k+1} <= 1.1 e_k (plus 1e-12 absolute) along the sequence, and the final
/// value below `threshold`.
bool diagonal_pass(std::span<const double> errors, double threshold);

/// x -> max_k ||f_k(x)||.
ScalarFunction grid_sup(std::span<const VectorFunction> fs, const VectorNorm& vnorm);
/// Lp norm of grid_sup, integrated between the merged breakpoints of all f_k.
double grid_sup_lp(std::span<const VectorFunction> fs, double p, const VectorNorm& vnorm);

/// L1 norm of x -> max_t ||A_t f(x)|| over the grid.
double sup_integrability_flow(const VectorFunction& f, const Flow& flow, std::span<const double> t_grid,
                              const VectorNorm& vnorm);
/// L1 norm of x -> max_s ||E(f|F_s)(x)|| over the grid.
double sup_integrability_filtration(const VectorFunction& f, const Filtration& filtration,
                                    std::span<const double> s_grid, const VectorNorm& vnorm);

/// C with sup ||A_t f - mean|| <= C/t for a rotation: 2 sup ||F_0|| / theta,
/// F_0 the antiderivative of f - mean. Empty for other flows.
std::optional<double> ergodic_envelope_constant(const Flow& flow, const VectorFunction& f,
                                                const VectorNorm& vnorm);

/// Largest slope norm of a circle function continuous on [0,1); empty when f
/// has an interior jump. Atomic spaces give empty.
std::optional<double> lipschitz_constant(const VectorFunction& f, const VectorNorm& vnorm);

}  // namespace ergolab
