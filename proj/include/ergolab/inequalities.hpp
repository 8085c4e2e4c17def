#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ergolab/measure_space.hpp"
#include "ergolab/processes.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/scalar_function.hpp"
#include "ergolab/semigroup.hpp"
#include "ergolab/vector_function.hpp"

namespace ergolab {

/// (p/(p-1))^2, the strong-type constant. Throws for p <= 1.
double dominant_constant(double p);
/// p/(p-1), the weak-type constant. Throws for p <= 1.
double maximal_constant(double p);

struct DominantResult {
  double lhs = 0.0;    // || max over grid of ||X_{t,s}|| ||_p
  double bound = 0.0;  // (p/(p-1))^2 ||f||_p
  double ratio = 0.0;
  bool pass = false;   // lhs <= bound + 1e-9
};

struct MaximalResult {
  double exceedance = 0.0;  // mu{x : max over grid of ||X_{t,s}(x)|| >= eps}
  double bound = 0.0;       // (p/(p-1)) ||f||_p / eps
  bool pass = false;        // exceedance <= bound + 1e-9
};

/// Checks on an already computed ME or EM grid.
DominantResult dominant_ineq(const ProcessGrid& grid, const VectorFunction& f, double p, const VectorNorm& vnorm);
MaximalResult maximal_ineq(const ProcessGrid& grid, const VectorFunction& f, double p, double eps,
                           const VectorNorm& vnorm);

/// Throws unless p > 1 and the filtration is decreasing.
void require_inequality_hypotheses(double p, const Filtration& filtration);

DominantResult dominant_ineq_me(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double p,
                                std::vector<double> t_grid, std::vector<double> s_grid, const VectorNorm& vnorm);
DominantResult dominant_ineq_em(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double p,
                                std::vector<double> t_grid, std::vector<double> s_grid, const VectorNorm& vnorm);
MaximalResult maximal_ineq_me(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double p,
                              std::vector<double> t_grid, std::vector<double> s_grid, double eps,
                              const VectorNorm& vnorm);
MaximalResult maximal_ineq_em(const VectorFunction& f, const Flow& flow, const Filtration& filtration, double p,
                              std::vector<double> t_grid, std::vector<double> s_grid, double eps,
                              const VectorNorm& vnorm);

/// Worst signed defect over grid times and sample points (all atoms on
/// atomic spaces) of
///   ||A_t f(x)|| - A'_t(||f||)(x)   and   ||E(A_t f|P)(x)|| - E'(A'_t(||f||)|P)(x).
/// Non-positive up to rounding when the chain holds.
double domination_chain_check(const VectorFunction& f, const Flow& flow, const Partition& partition,
                              std::span<const double> t_grid, const VectorNorm& vnorm, std::size_t samples = 1000);

/// Finite family of real submartingales g^i_{s_k} on an increasing filtration.
/// Entry (i, k) must be constant on the cells of F_{s_k}.
class SubmartingaleFamily {
 public:
  /// Validates adaptedness and the submartingale property (tolerance 1e-12);
  /// throws naming the offending index and time.
  SubmartingaleFamily(Filtration filtration, std::vector<double> times,
                      std::vector<std::vector<ScalarFunction>> processes);

  /// `members` processes over times 0, 1, ..., max_level: a random constant
  /// start, then nonnegative adapted increments plus mean-zero martingale
  /// increments on each refinement.
  static SubmartingaleFamily random(Rng& rng, const Filtration& filtration, std::size_t members);

  const Filtration& filtration() const { return filtration_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t members() const { return processes_.size(); }
  const ScalarFunction& at(std::size_t index, std::size_t k) const { return processes_.at(index).at(k); }

  /// Midpoints of the pieces on which every process and every partition used
  /// is constant; all atoms on atomic spaces.
  std::vector<double> probe_points() const;

 private:
  Filtration filtration_;
  std::vector<double> times_;
  std::vector<std::vector<ScalarFunction>> processes_;
};

struct SubmartingaleReport {
  double sup_defect = 0.0;       // max of G_k - E'(G_{k+1}|F_{s_k}), G = max_i g^i
  bool sup_is_submartingale = false;
  double terminal_defect = 0.0;  // |G_K - max_i g^i_{s_K}| at every probe point
  bool terminal_exchange = false;
  double hypothesis = 0.0;       // max_k integral of (G_k)^+
};

SubmartingaleReport submartingale_sup_check(const SubmartingaleFamily& family);

}  // namespace ergolab
