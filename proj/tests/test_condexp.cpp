#include <gtest/gtest.h>

#include <cmath>

#include "ergolab/builtin_functions.hpp"
#include "ergolab/condexp.hpp"
#include "ergolab/rng.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

const VectorNorm kEuclid1(VectorNorm::Kind::euclidean, 1);
const VectorNorm kEuclid2(VectorNorm::Kind::euclidean, 2);

VectorFunction identity_fn() { return VectorFunction::piecewise({0.0, 1.0}, 1, 1, {0.0, 1.0}); }

}  // namespace

TEST(CondExp, IdempotentOnCellConstants) {
  const auto f = VectorFunction::piecewise({0.0, 0.25, 0.5, 0.75, 1.0}, 0, 1, {1.0, -2.0, 3.0, 0.5});
  const auto e = cond_exp(f, make_dyadic_partition(2));
  for (double x : sample_points(100)) EXPECT_EQ(e(x)[0], f(x)[0]);
}

TEST(CondExp, CellAveragesMatchRiemann) {
  const auto e = cond_exp(identity_fn(), make_dyadic_partition(1));
  EXPECT_EQ(e.degree(), 0);
  const double left = oracle::riemann([](double x) { return x; }, 0.0, 0.5) / 0.5;
  const double right = oracle::riemann([](double x) { return x; }, 0.5, 1.0) / 0.5;
  EXPECT_NEAR(e(0.1)[0], left, 1e-12);
  EXPECT_NEAR(e(0.9)[0], right, 1e-12);
  EXPECT_NEAR(e(0.1)[0], 0.25, 1e-15);
  EXPECT_NEAR(e(0.9)[0], 0.75, 1e-15);
  const auto e0 = cond_exp(identity_fn(), make_dyadic_partition(0));
  EXPECT_NEAR(e0(0.3)[0], oracle::riemann([](double x) { return x; }, 0.0, 1.0), 1e-12);
}

TEST(CondExp, SpaceMismatchRejected) {
  const auto f = VectorFunction::atoms(MeasureSpace::uniform(4), 1, {1, 2, 3, 4});
  EXPECT_THROW(cond_exp(f, make_dyadic_partition(1)), std::invalid_argument);
  EXPECT_THROW(cond_exp(identity_fn(), make_level_partition(MeasureSpace::uniform(4), 1)), std::invalid_argument);
}

TEST(CondExp, AtomicWeightedAverage) {
  const auto space = MeasureSpace::discrete({0.1, 0.3, 0.2, 0.4});
  const auto f = VectorFunction::atoms(space, 1, {1.0, 2.0, 3.0, 4.0});
  const auto e = cond_exp(f, make_level_partition(space, 1));
  EXPECT_NEAR(e.at_atom(0)[0], (0.1 * 1 + 0.3 * 2) / 0.4, 1e-15);
  EXPECT_NEAR(e.at_atom(1)[0], (0.1 * 1 + 0.3 * 2) / 0.4, 1e-15);
  EXPECT_NEAR(e.at_atom(3)[0], (0.2 * 3 + 0.4 * 4) / 0.6, 1e-15);
}

TEST(CondExpDominant, Examples) {
  const auto one = ScalarFunction::constant(MeasureSpace::circle(), 1.0);
  const auto e1 = cond_exp_dominant(one, make_dyadic_partition(3));
  for (double x : sample_points(50)) EXPECT_NEAR(e1(x), 1.0, 1e-15);

  const auto f = builtin::sawtooth(2, {1.0, -1.0}, {0.0, 0.0});
  const auto h = pointwise_norm(f, kEuclid2);
  const auto e0 = cond_exp_dominant(h, make_dyadic_partition(0));
  const double ref = oracle::riemann([](double x) { return std::sqrt(2.0) * x; }, 0.0, 1.0);
  EXPECT_NEAR(e0(0.5), ref, 1e-10);
  EXPECT_NEAR(e0(0.5), std::sqrt(2.0) / 2.0, 1e-13);
}

TEST(CondExpDominant, PositivityPreserving) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = builtin::random_piecewise(rng, 2, 5, 3);
    const auto e = cond_exp_dominant(pointwise_norm(f, kEuclid2), make_dyadic_partition(3));
    for (double x : sample_points(200)) EXPECT_GE(e(x), 0.0);
  }
}

TEST(CondExp, DominationInstance) {
  const auto f = builtin::sawtooth(2);
  EXPECT_LE(cond_exp_domination_defect(f, make_dyadic_partition(1), kEuclid2), 1e-10);
}

TEST(DefiningProperty, Examples) {
  const double c[] = {0.5, -3.0};
  EXPECT_EQ(defining_property_check(VectorFunction::constant(MeasureSpace::circle(), c), make_dyadic_partition(3),
                                    kEuclid2),
            0.0);
  EXPECT_LE(defining_property_check(identity_fn(), make_dyadic_partition(2), kEuclid1), 1e-12);
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = builtin::random_piecewise(rng, 2, 6, 3);
    EXPECT_LE(defining_property_check(f, make_dyadic_partition(3), kEuclid2), 1e-10);
  }
}

TEST(FunctionalCommutation, Examples) {
  const auto f = VectorFunction::piecewise({0.0, 1.0}, 2, 2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0});  // (x, x^2)
  EXPECT_EQ(functional_commutation_check(f, make_dyadic_partition(1), LinearFunctional({0.0, 0.0})), 0.0);
  EXPECT_LE(functional_commutation_check(f, make_dyadic_partition(1), LinearFunctional({1.0, 0.0})), 1e-12);
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = builtin::random_piecewise(rng, 3, 4, 2);
    const LinearFunctional func({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)});
    EXPECT_LE(functional_commutation_check(g, make_dyadic_partition(3), func), 1e-10);
  }
  EXPECT_THROW(functional_commutation_check(f, make_dyadic_partition(1), LinearFunctional({1.0})),
               std::invalid_argument);
}

TEST(LinearFunctionalTest, Linear) {
  Rng rng(24);
  const LinearFunctional g({0.3, -1.2, 2.0});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> u(3), v(3), w(3);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    for (std::size_t j = 0; j < 3; ++j) {
      u[j] = rng.uniform(-1, 1);
      v[j] = rng.uniform(-1, 1);
      w[j] = a * u[j] + b * v[j];
    }
    EXPECT_NEAR(g(w), a * g(u) + b * g(v), 1e-14);
  }
}

TEST(CondExpProperties, TowerIdempotenceContraction) {
  Rng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = builtin::random_piecewise(rng, 2, 6, 2);
    const auto coarse = make_dyadic_partition(2);
    const auto fine = make_dyadic_partition(4);
    const auto e_fine = cond_exp(f, fine);
    const auto e_coarse = cond_exp(f, coarse);
    const auto tower = cond_exp(e_fine, coarse);
    const auto again = cond_exp(e_coarse, coarse);
    for (double x : sample_points(256)) {
      const auto t = tower(x), c = e_coarse(x), a = again(x);
      for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_NEAR(t[j], c[j], 1e-12);
        EXPECT_EQ(a[j], c[j]);
      }
    }
    for (auto kind : {VectorNorm::Kind::euclidean, VectorNorm::Kind::max, VectorNorm::Kind::sum}) {
      const VectorNorm n(kind, 2);
      for (double p : {1.0, 2.0}) EXPECT_LE(lp_norm(e_fine, p, n), lp_norm(f, p, n) + 1e-9);
      EXPECT_LE(sup_norm(e_fine, n), sup_norm(f, n) + 1e-9);
      EXPECT_LE(cond_exp_domination_defect(f, fine, n), 1e-10);
    }
  }
}

TEST(CondExpProperties, MartingaleOfRegularFamily) {
  Rng rng(26);
  const Filtration filt(MeasureSpace::circle(), Filtration::Direction::increasing, 8);
  const auto f = builtin::random_piecewise(rng, 2, 7, 3);
  for (double s1 : {0.0, 1.5, 3.0, 6.0}) {
    for (double s2 : {s1 + 1.0, s1 + 2.5, 8.0}) {
      const auto lhs = cond_exp(cond_exp(f, filt.at(s2)), filt.at(s1));
      const auto rhs = cond_exp(f, filt.at(s1));
      for (double x : sample_points(300)) {
        EXPECT_NEAR(lhs(x)[0], rhs(x)[0], 1e-12);
        EXPECT_NEAR(lhs(x)[1], rhs(x)[1], 1e-12);
      }
    }
  }
}

TEST(CondExpProperties, AtomicDomination) {
  Rng rng(27);
  const auto space = MeasureSpace::product(8, {0.2, 0.5, 0.3});
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = builtin::random_atoms(rng, space, 3);
    const VectorNorm n(VectorNorm::Kind::max, 3);
    EXPECT_LE(cond_exp_domination_defect(f, make_level_partition(space, 1), n), 1e-12);
    EXPECT_LE(defining_property_check(f, make_level_partition(space, 1), n), 1e-14);
  }
}
