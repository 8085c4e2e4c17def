#include <gtest/gtest.h>

#include <cmath>

#include "ergolab/builtin_functions.hpp"
#include "ergolab/condexp.hpp"
#include "ergolab/inequalities.hpp"
#include "ergolab/rng.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

const VectorNorm kEuclid2(VectorNorm::Kind::euclidean, 2);

std::vector<double> geometric(double start, double ratio, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(start * std::pow(ratio, k));
  return out;
}

std::vector<double> levels(int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(k);
  return out;
}

// (x, 1 - x)
VectorFunction ramp_pair() { return VectorFunction::piecewise({0.0, 1.0}, 1, 2, {0.0, 1.0, 1.0, -1.0}); }

Filtration decreasing(int max_level) {
  return Filtration(MeasureSpace::circle(), Filtration::Direction::decreasing, max_level);
}

}  // namespace

TEST(Constants, Values) {
  EXPECT_EQ(dominant_constant(2.0), 4.0);
  EXPECT_EQ(maximal_constant(2.0), 2.0);
  EXPECT_DOUBLE_EQ(dominant_constant(3.0), 2.25);
  EXPECT_THROW(dominant_constant(1.0), std::invalid_argument);
  EXPECT_THROW(maximal_constant(0.5), std::invalid_argument);
  double prev = dominant_constant(1.5);
  for (double p : {2.0, 3.0, 10.0}) {
    const double c = dominant_constant(p);
    EXPECT_LT(c, prev);
    EXPECT_GT(c, 1.0);
    prev = c;
  }
}

TEST(DominantIneq, ConstantRatioQuarter) {
  const double c[] = {3.0, 4.0};
  const auto k = VectorFunction::constant(MeasureSpace::circle(), c);
  const auto r = dominant_ineq_me(k, Flow::rotation(), decreasing(4), 2.0, {1, 2, 4}, {0, 2, 4}, kEuclid2);
  EXPECT_NEAR(r.lhs, 5.0, 1e-13);
  EXPECT_NEAR(r.bound, 20.0, 1e-13);
  EXPECT_NEAR(r.ratio, 0.25, 1e-14);
  EXPECT_TRUE(r.pass);
}

TEST(DominantIneq, RotationRampGrid) {
  const auto f = ramp_pair();
  const auto r = dominant_ineq_me(f, Flow::rotation(), decreasing(7), 2.0, geometric(1, 2, 8), levels(8), kEuclid2);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.ratio, 1.0);
  // lhs independently: dense sampling of the grid supremum.
  const auto grid = me_process(f, Flow::rotation(), decreasing(7), geometric(1, 2, 8), levels(8));
  const std::size_t n = 400000;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    double m = 0.0;
    for (const auto& g : grid.table) m = std::max(m, kEuclid2(g(x)));
    acc += m * m;
  }
  EXPECT_NEAR(r.lhs, std::sqrt(acc / n), 1e-6);
  EXPECT_NEAR(r.bound, 4.0 * std::sqrt(oracle::riemann([](double x) { return x * x + (1 - x) * (1 - x); }, 0, 1)),
              1e-9);
}

TEST(DominantIneq, RejectsBadHypotheses) {
  const auto f = ramp_pair();
  const Filtration inc(MeasureSpace::circle(), Filtration::Direction::increasing, 4);
  EXPECT_THROW(dominant_ineq_me(f, Flow::rotation(), inc, 2.0, {1}, {0}, kEuclid2), std::invalid_argument);
  EXPECT_THROW(maximal_ineq_em(f, Flow::rotation(), inc, 2.0, {1}, {0}, 0.5, kEuclid2), std::invalid_argument);
  EXPECT_THROW(dominant_ineq_em(f, Flow::rotation(), decreasing(4), 1.0, {1}, {0}, kEuclid2), std::invalid_argument);
  EXPECT_THROW(maximal_ineq_me(f, Flow::rotation(), decreasing(4), 2.0, {1}, {0}, 0.0, kEuclid2),
               std::invalid_argument);
}

TEST(DominantIneq, GridRefinementMonotone) {
  Rng rng(61);
  const auto f = builtin::random_piecewise(rng, 2, 5, 2);
  const auto filt = decreasing(5);
  const auto coarse = dominant_ineq_me(f, Flow::rotation(), filt, 2.0, geometric(1, 4, 4), {0, 2, 4}, kEuclid2);
  const auto fine =
      dominant_ineq_me(f, Flow::rotation(), filt, 2.0, geometric(1, 2, 7), {0, 1, 2, 3, 4, 5}, kEuclid2);
  EXPECT_LE(coarse.lhs, fine.lhs + 1e-12);
  EXPECT_TRUE(fine.pass);
}

TEST(DominantIneq, PSweep) {
  const auto f = builtin::hat(2, {1.0, -0.5});
  for (double p : {1.5, 2.0, 3.0, 10.0}) {
    const auto me = dominant_ineq_me(f, Flow::rotation(), decreasing(5), p, geometric(1, 2, 6), levels(6), kEuclid2);
    const auto em = dominant_ineq_em(f, Flow::rotation(), decreasing(5), p, geometric(1, 2, 6), levels(6), kEuclid2);
    EXPECT_TRUE(me.pass) << p;
    EXPECT_TRUE(em.pass) << p;
    EXPECT_NEAR(me.bound, dominant_constant(p) * lp_norm(f, p, kEuclid2), 1e-12);
  }
}

TEST(EmIneq, IdentityReducesToMartingale) {
  Rng rng(62);
  const auto f = builtin::random_piecewise(rng, 2, 6, 1);
  const auto circle = MeasureSpace::circle();
  const auto filt = decreasing(6);
  const auto r = dominant_ineq_em(f, Flow::identity(circle), filt, 2.0, {1, 5}, levels(7), kEuclid2);
  std::vector<VectorFunction> mart;
  for (double s : levels(7)) mart.push_back(cond_exp(f, filt.at(s)));
  EXPECT_NEAR(r.lhs, grid_sup_lp(mart, 2.0, kEuclid2), 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.bound, 4.0 * lp_norm(f, 2.0, kEuclid2));
}

TEST(EmIneq, StepFlowPThree) {
  Rng rng(63);
  const auto space = MeasureSpace::uniform(16);
  const auto f = builtin::random_atoms(rng, space, 2);
  const Filtration filt(space, Filtration::Direction::decreasing, 4);
  const auto r = dominant_ineq_em(f, Flow::shift(space, 3), filt, 3.0, geometric(1, 2, 6), levels(5), kEuclid2);
  EXPECT_NEAR(r.bound, 2.25 * lp_norm(f, 3.0, kEuclid2), 1e-13);
  EXPECT_TRUE(r.pass);
  const auto m = maximal_ineq_em(f, Flow::shift(space, 3), filt, 3.0, geometric(1, 2, 6), levels(5), 0.3, kEuclid2);
  EXPECT_TRUE(m.pass);
}

TEST(MaximalIneq, Examples) {
  const auto f = ramp_pair();
  const auto filt = decreasing(6);
  const auto ts = geometric(1, 2, 8);
  const auto ss = levels(7);
  const auto high = maximal_ineq_me(f, Flow::rotation(), filt, 2.0, ts, ss, 10.0, kEuclid2);
  EXPECT_EQ(high.exceedance, 0.0);
  EXPECT_TRUE(high.pass);
  const auto half = maximal_ineq_me(f, Flow::rotation(), filt, 2.0, ts, ss, 0.5, kEuclid2);
  EXPECT_NEAR(half.bound, 2.0 * lp_norm(f, 2.0, kEuclid2) / 0.5, 1e-13);
  EXPECT_TRUE(half.pass);
  EXPECT_GT(half.exceedance, 0.0);
}

TEST(MaximalIneq, ExceedanceMatchesSampling) {
  Rng rng(64);
  const auto f = builtin::random_piecewise(rng, 2, 4, 2);
  const auto filt = decreasing(4);
  const std::vector<double> ts{1.0, 1.6, 2.9};
  const std::vector<double> ss{0.0, 2.0, 4.0};
  const auto grid = me_process(f, Flow::rotation(), filt, ts, ss);
  for (double eps : {0.2, 0.5, 0.9}) {
    const auto m = maximal_ineq(grid, f, 2.0, eps, kEuclid2);
    const std::size_t n = 1000000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n;
      double sup = 0.0;
      for (const auto& g : grid.table) sup = std::max(sup, kEuclid2(g(x)));
      if (sup >= eps) ++hits;
    }
    EXPECT_NEAR(m.exceedance, static_cast<double>(hits) / n, 2e-6) << "eps=" << eps;
  }
}

TEST(DominationChain, Examples) {
  const VectorNorm one(VectorNorm::Kind::euclidean, 1);
  const auto pos = VectorFunction::piecewise({0.0, 0.5, 1.0}, 1, 1, {0.2, 1.0, 0.1, 0.5});
  const std::vector<double> ts{1.0, 1.5, 3.3};
  EXPECT_NEAR(domination_chain_check(pos, Flow::rotation(), make_dyadic_partition(2), ts, one), 0.0, 1e-12);

  const double c[] = {3.0, -4.0};
  const auto k = VectorFunction::constant(MeasureSpace::circle(), c);
  EXPECT_NEAR(domination_chain_check(k, Flow::rotation(), make_dyadic_partition(2), ts, kEuclid2), 0.0, 1e-12);

  // f = (x, -x) has ||f|| = sqrt(2) x on [0, 1) and both components average alike: equality.
  const auto g = VectorFunction::piecewise({0.0, 1.0}, 1, 2, {0.0, 1.0, 0.0, -1.0});
  const std::vector<double> t15{1.5};
  EXPECT_NEAR(domination_chain_check(g, Flow::rotation(), make_dyadic_partition(2), t15, kEuclid2), 0.0, 1e-12);

  // A sign change inside the averaging window makes the chain strict.
  const auto h = VectorFunction::piecewise({0.0, 1.0}, 1, 2, {-0.5, 1.0, 0.0, -1.0});
  EXPECT_LE(domination_chain_check(h, Flow::rotation(), make_dyadic_partition(2), t15, kEuclid2), 1e-10);
  const auto lhs = cesaro_average(Flow::rotation(), 1.5, h);
  const auto rhs = dominant_cesaro(DominantFlow(Flow::rotation()), 1.5, pointwise_norm(h, kEuclid2));
  double gap = 0.0;
  for (double x : sample_points(1000)) gap = std::max(gap, rhs(x) - kEuclid2(lhs(x)));
  EXPECT_GT(gap, 1e-3);
}

TEST(DominationChain, RandomScenarios) {
  Rng rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = builtin::random_piecewise(rng, 3, 4, 2);
    const VectorNorm n(trial % 3 == 0 ? VectorNorm::Kind::max : VectorNorm::Kind::euclidean, 3);
    EXPECT_LE(domination_chain_check(f, Flow::rotation(), make_dyadic_partition(3), geometric(1, 1.7, 5), n, 300),
              1e-10);
  }
  const auto space = MeasureSpace::product(8, {0.25, 0.75});
  const auto a = builtin::random_atoms(rng, space, 2);
  EXPECT_LE(domination_chain_check(a, Flow::shift(space), make_level_partition(space, 1), geometric(1, 2, 5), kEuclid2),
            1e-10);
}

TEST(Submartingale, TrivialFamilies) {
  const auto circle = MeasureSpace::circle();
  const Filtration filt(circle, Filtration::Direction::increasing, 2);
  const std::vector<double> times{0, 1, 2};
  std::vector<ScalarFunction> single(3, ScalarFunction::constant(circle, 0.7));
  const SubmartingaleFamily one(filt, times, {single});
  const auto r1 = submartingale_sup_check(one);
  EXPECT_TRUE(r1.sup_is_submartingale);
  EXPECT_TRUE(r1.terminal_exchange);

  std::vector<ScalarFunction> b(3, ScalarFunction::constant(circle, 2.0));
  std::vector<ScalarFunction> a(3, ScalarFunction::constant(circle, -1.0));
  const SubmartingaleFamily two(filt, times, {a, b});
  const auto r2 = submartingale_sup_check(two);
  EXPECT_TRUE(r2.sup_is_submartingale);
  EXPECT_TRUE(r2.terminal_exchange);
  EXPECT_DOUBLE_EQ(r2.hypothesis, 2.0);
}

TEST(Submartingale, RejectsInvalidFamilies) {
  const auto circle = MeasureSpace::circle();
  const Filtration filt(circle, Filtration::Direction::increasing, 2);
  const std::vector<double> times{0, 1};
  // Decreasing in time: not a submartingale.
  std::vector<ScalarFunction> down{ScalarFunction::constant(circle, 1.0), ScalarFunction::constant(circle, 0.0)};
  try {
    SubmartingaleFamily bad(filt, times, {down});
    FAIL() << "accepted a supermartingale";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("index 0"), std::string::npos) << e.what();
  }
  // Level-2 jump at time 0 is not measurable for the trivial partition.
  std::vector<ScalarFunction> early{ScalarFunction::piecewise_constant({0.0, 0.5, 1.0}, {0.0, 1.0}),
                                    ScalarFunction::piecewise_constant({0.0, 0.5, 1.0}, {0.0, 1.0})};
  EXPECT_THROW(SubmartingaleFamily(filt, times, {early}), std::invalid_argument);
}

TEST(Submartingale, RandomFamilies) {
  Rng rng(66);
  const Filtration filt(MeasureSpace::circle(), Filtration::Direction::increasing, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fam = SubmartingaleFamily::random(rng, filt, 5);
    EXPECT_EQ(fam.members(), 5u);
    const auto r = submartingale_sup_check(fam);
    EXPECT_TRUE(r.sup_is_submartingale) << r.sup_defect;
    EXPECT_TRUE(r.terminal_exchange);
    EXPECT_TRUE(std::isfinite(r.hypothesis));
    // Independent check on the 16 finest cells.
    for (std::size_t k = 0; k + 1 < fam.times().size(); ++k) {
      const auto& cells = filt.at(fam.times()[k]);
      for (std::size_t c = 0; c < cells.cells(); ++c) {
        const double lo = cells.cell_left(c), hi = cells.cell_right(c);
        double next_avg = 0.0, cur = -1e300;
        for (std::size_t i = 0; i < fam.members(); ++i) cur = std::max(cur, fam.at(i, k)(0.5 * (lo + hi)));
        const int sub = 16;
        for (int j = 0; j < sub; ++j) {
          const double x = lo + (j + 0.5) * (hi - lo) / sub;
          double m = -1e300;
          for (std::size_t i = 0; i < fam.members(); ++i) m = std::max(m, fam.at(i, k + 1)(x));
          next_avg += m / sub;
        }
        EXPECT_LE(cur, next_avg + 1e-12);
      }
    }
  }
  const auto space = MeasureSpace::product(4, {0.125, 0.25, 0.375, 0.25});
  const Filtration atomic(space, Filtration::Direction::increasing, 2);
  EXPECT_TRUE(submartingale_sup_check(SubmartingaleFamily::random(rng, atomic, 3)).sup_is_submartingale);
}
