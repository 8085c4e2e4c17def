#include <gtest/gtest.h>

#include <cmath>

#include "ergolab/builtin_functions.hpp"
#include "ergolab/condexp.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/semigroup.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

const VectorNorm kEuclid1(VectorNorm::Kind::euclidean, 1);
const VectorNorm kEuclid2(VectorNorm::Kind::euclidean, 2);

// (1/t) integral_0^t f(x + tau*theta) dtau by midpoint sums.
std::vector<double> rotation_average_oracle(const VectorFunction& f, double theta, double t, double x,
                                            std::size_t n = 200000) {
  auto sum = oracle::riemann_vec(
      [&](double tau) {
        const long double y = static_cast<long double>(x) + static_cast<long double>(tau) * theta;
        return f(static_cast<double>(y - std::floor(y)));
      },
      f.dim(), 0.0, t, n);
  for (double& v : sum) v /= t;
  return sum;
}

}  // namespace

TEST(ApplyFlow, Examples) {
  Rng rng(31);
  const auto f = builtin::random_piecewise(rng, 2, 4, 2);
  const auto rot = Flow::rotation();
  const auto same = apply_flow(rot, 0.0, f);
  for (double x : sample_points(100)) EXPECT_EQ(same(x), f(x));

  const auto indicator = VectorFunction::piecewise({0.0, 0.5, 1.0}, 0, 1, {1.0, 0.0});
  const auto moved = apply_flow(Flow::rotation(0.25), 1.0, indicator);
  for (double x : sample_points(400)) {
    const double expected = (x >= 0.75 || x < 0.25) ? 1.0 : 0.0;
    EXPECT_EQ(moved(x)[0], expected) << x;
    double y = x + 0.25;
    y -= std::floor(y);
    EXPECT_EQ(moved(x)[0], indicator(y)[0]);
  }

  const auto z4 = MeasureSpace::uniform(4);
  const auto g = VectorFunction::atoms(z4, 1, {10.0, 11.0, 12.0, 13.0});
  const auto shifted = apply_flow(Flow::shift(z4), 2.7, g);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(shifted.at_atom(a)[0], g.at_atom((a + 2) % 4)[0]);

  EXPECT_THROW(apply_flow(rot, -0.1, f), std::invalid_argument);
  EXPECT_THROW(apply_flow(Flow::shift(z4), 1.0, f), std::invalid_argument);
}

TEST(FlowTest, Validation) {
  EXPECT_THROW(Flow::rotation(0.0), std::invalid_argument);
  EXPECT_THROW(Flow::rotation(1.0), std::invalid_argument);
  const auto z3 = MeasureSpace::uniform(3);
  EXPECT_THROW(Flow::step(z3, {0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Flow::step(z3, {1, 2, 0}, 0.0), std::invalid_argument);
  const auto weighted = MeasureSpace::discrete({0.2, 0.3, 0.5});
  EXPECT_THROW(Flow::shift(weighted), std::invalid_argument);
  EXPECT_NO_THROW(Flow::step(MeasureSpace::discrete({0.25, 0.5, 0.25}), {2, 1, 0}));
  EXPECT_TRUE(Flow::rotation().is_continuous());
  EXPECT_FALSE(Flow::shift(z3).is_continuous());
}

TEST(FlowTest, CompensatedWrapCount) {
  const auto rot = Flow::rotation();
  for (double t : {1.0, 3.0, 17.25, 1000.0, 9999.5, 10000.0}) {
    const auto d = rot.displacement(t);
    const long double exact = static_cast<long double>(t) * static_cast<long double>(kGoldenTheta);
    EXPECT_EQ(d.whole, std::floor(static_cast<double>(exact)));
    EXPECT_NEAR(d.frac, static_cast<double>(exact - std::floor(exact)), 1e-15);
    EXPECT_GE(d.frac, 0.0);
    EXPECT_LT(d.frac, 1.0);
  }
  EXPECT_EQ(Flow::rotation(0.25).displacement(4.0).frac, 0.0);
  EXPECT_EQ(Flow::rotation(0.25).displacement(4.0).whole, 1.0);
}

TEST(CesaroAverage, Examples) {
  const double c[] = {1.5, -2.0};
  const auto k = VectorFunction::constant(MeasureSpace::circle(), c);
  for (double t : {0.3, 1.0, 7.5}) {
    const auto a = cesaro_average(Flow::rotation(), t, k);
    for (double x : sample_points(50)) {
      EXPECT_NEAR(a(x)[0], 1.5, 1e-14);
      EXPECT_NEAR(a(x)[1], -2.0, 1e-14);
    }
  }
  const auto z4 = MeasureSpace::uniform(4);
  const auto kz = VectorFunction::constant(z4, c);
  const auto az = cesaro_average(Flow::shift(z4), 2.3, kz);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(az.at_atom(a)[0], 1.5, 1e-15);

  const auto centered = VectorFunction::piecewise({0.0, 1.0}, 1, 1, {-0.5, 1.0});
  const auto full = cesaro_average(Flow::rotation(0.25), 4.0, centered);
  for (double x : sample_points(100)) {
    EXPECT_NEAR(full(x)[0], 0.0, 1e-14);
    EXPECT_NEAR(rotation_average_oracle(centered, 0.25, 4.0, x)[0], 0.0, 1e-6);
  }

  const auto z2 = MeasureSpace::uniform(2);
  const auto uv = VectorFunction::atoms(z2, 2, {1.0, 2.0, 5.0, -4.0});
  const auto swapped = cesaro_average(Flow::shift(z2), 2.0, uv);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_DOUBLE_EQ(swapped.at_atom(a)[0], 3.0);
    EXPECT_DOUBLE_EQ(swapped.at_atom(a)[1], -1.0);
  }

  EXPECT_THROW(cesaro_average(Flow::rotation(), 0.0, k), std::invalid_argument);
  EXPECT_THROW(cesaro_average(Flow::rotation(), -1.0, k), std::invalid_argument);
  std::vector<double> top(VectorFunction::kMaxDegree + 1, 0.5);
  const auto capped = VectorFunction::piecewise({0.0, 1.0}, VectorFunction::kMaxDegree, 1, top);
  EXPECT_THROW(cesaro_average(Flow::rotation(), 1.0, capped), std::invalid_argument);
}

TEST(CesaroAverage, RotationMatchesQuadratureOracle) {
  Rng rng(32);
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = builtin::random_piecewise(rng, 2, 4, 2);
    const double t = rng.uniform(0.5, 20.0);
    const auto a = cesaro_average(Flow::rotation(), t, f);
    EXPECT_LE(a.degree(), f.degree() + 1);
    for (int k = 0; k < 5; ++k) {
      const double x = rng.uniform();
      const auto ref = rotation_average_oracle(f, kGoldenTheta, t, x);
      const auto got = a(x);
      for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(got[j], ref[j], 2e-5) << "t=" << t << " x=" << x;
    }
  }
}

TEST(CesaroAverage, StepMatchesDirectPathSum) {
  Rng rng(33);
  const auto space = MeasureSpace::uniform(8);
  const std::vector<std::size_t> perm{3, 0, 5, 1, 7, 2, 4, 6};
  for (double h : {1.0, 0.5, 0.3}) {
    const auto flow = Flow::step(space, perm, h);
    const auto f = builtin::random_atoms(rng, space, 1);
    for (double t : {0.2, 1.0, 2.75, 9.1}) {
      const auto a = cesaro_average(flow, t, f);
      // Walk the path tau -> S^floor(tau/h) f with a fine time step.
      const std::size_t n = 400000;
      for (std::size_t atom = 0; atom < 8; ++atom) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double tau = t * (static_cast<double>(k) + 0.5) / n;
          std::size_t pos = atom;
          for (std::size_t m = 0; m < static_cast<std::size_t>(std::floor(tau / h)); ++m) pos = perm[pos];
          sum += f.at_atom(pos)[0];
        }
        EXPECT_NEAR(a.at_atom(atom)[0], sum / n, 1e-4) << "h=" << h << " t=" << t;
      }
    }
  }
}

TEST(DiscreteAverage, Examples) {
  Rng rng(34);
  const auto f = builtin::random_piecewise(rng, 2, 3, 1);
  const auto one = discrete_average(Flow::rotation(), 1, f);
  for (double x : sample_points(50)) EXPECT_EQ(one(x), f(x));
  const auto z2 = MeasureSpace::uniform(2);
  const auto uv = VectorFunction::atoms(z2, 1, {1.0, 4.0});
  const auto avg = discrete_average(Flow::shift(z2), 2, uv);
  EXPECT_DOUBLE_EQ(avg.at_atom(0)[0], 2.5);
  EXPECT_DOUBLE_EQ(avg.at_atom(1)[0], 2.5);
  const double c[] = {0.7, 0.1};
  const auto k = VectorFunction::constant(MeasureSpace::circle(), c);
  const auto k3 = discrete_average(Flow::rotation(), 3, k);
  for (double x : sample_points(50)) EXPECT_NEAR(k3(x)[0], 0.7, 1e-15);
  EXPECT_THROW(discrete_average(Flow::rotation(), 0, f), std::invalid_argument);
}

TEST(DominantCesaro, Examples) {
  const auto one = ScalarFunction::constant(MeasureSpace::circle(), 1.0);
  const auto a = dominant_cesaro(DominantFlow(Flow::rotation()), 3.3, one);
  for (double x : sample_points(50)) EXPECT_NEAR(a(x), 1.0, 1e-13);

  const auto f = VectorFunction::piecewise({0.0, 0.5, 1.0}, 1, 1, {-0.5, 1.0, 0.2, -2.0});
  const auto h = pointwise_norm(f, kEuclid1);
  const auto same = dominant_cesaro(DominantFlow(Flow::identity(MeasureSpace::circle())), 2.0, h);
  for (double x : sample_points(100)) EXPECT_EQ(same(x), std::abs(f(x)[0]));

  const auto saw = builtin::sawtooth(2);
  const auto avg = cesaro_average(Flow::rotation(), 2.5, saw);
  const auto dom = dominant_cesaro(DominantFlow(Flow::rotation()), 2.5, pointwise_norm(saw, kEuclid2));
  for (double x : sample_points(1000)) EXPECT_LE(kEuclid2(avg(x)), dom(x) + 1e-10);
  EXPECT_THROW(dominant_cesaro(DominantFlow(Flow::rotation()), 0.0, one), std::invalid_argument);
}

TEST(DominantCesaro, IntervalIntegralsMatchPointValues) {
  Rng rng(41);
  const DominantFlow dom(Flow::rotation());
  for (double t : {0.7, 2.5, 1000.3}) {
    const auto h = pointwise_norm(builtin::random_piecewise(rng, 2, 5, 3), kEuclid2);
    const auto ah = dominant_cesaro(dom, t, h);
    for (int k = 0; k < 4; ++k) {
      double a = rng.uniform(0.0, 1.0), b = rng.uniform(0.0, 1.0);
      if (a > b) std::swap(a, b);
      const double want = oracle::riemann([&](double x) { return ah(x); }, a, b, 200000);
      EXPECT_NEAR(ah.integral(a, b), want, 1e-9) << "t=" << t;
    }
    EXPECT_NEAR(ah.integral(), h.integral(), 1e-12);
  }
}

TEST(DominantFlowTest, PositiveAndExactForCompositions) {
  Rng rng(35);
  const auto rot = Flow::rotation();
  const DominantFlow dom(rot);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = builtin::random_piecewise(rng, 2, 4, 2);
    const auto h = pointwise_norm(f, kEuclid2);
    const double t = rng.uniform(0.0, 30.0);
    const auto moved = apply_flow(rot, t, f);
    const auto ph = dominant_apply(dom, t, h);
    for (double x : sample_points(300)) {
      EXPECT_NEAR(kEuclid2(moved(x)), ph(x), 1e-13);
      EXPECT_GE(ph(x), 0.0);
    }
    const auto ah = dominant_cesaro(dom, t + 0.5, h);
    for (double x : sample_points(100)) EXPECT_GE(ah(x), -1e-14);
  }
}

TEST(SemigroupProperties, MeasurePreservationAndIsometry) {
  Rng rng(36);
  const auto space = MeasureSpace::product(8, {0.3, 0.7});
  const std::vector<Flow> flows{Flow::rotation(), Flow::rotation(0.2), Flow::shift(space, 3, 0.5)};
  for (const auto& flow : flows) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = builtin::random_function(rng, flow.space(), 2, 5, 3);
      const double t = rng.uniform(0.0, 50.0);
      const auto g = apply_flow(flow, t, f);
      const auto fi = integrate(f), gi = integrate(g);
      for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(gi[j], fi[j], 1e-12);
      for (double p : {1.0, 2.0}) EXPECT_NEAR(lp_norm(g, p, kEuclid2), lp_norm(f, p, kEuclid2), 1e-10);
      EXPECT_NEAR(sup_norm(g, kEuclid2), sup_norm(f, kEuclid2), 1e-9);
      const auto a = cesaro_average(flow, t + 0.1, f);
      for (double p : {1.0, 2.0, 3.0}) EXPECT_LE(lp_norm(a, p, kEuclid2), lp_norm(f, p, kEuclid2) + 1e-9);
    }
  }
}

TEST(SemigroupProperties, SemigroupLaw) {
  Rng rng(37);
  const auto rot = Flow::rotation();
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = builtin::random_piecewise(rng, 2, 4, 2);
    const double a = rng.uniform(0.0, 10.0), b = rng.uniform(0.0, 10.0);
    const auto two = apply_flow(rot, a, apply_flow(rot, b, f));
    const auto one = apply_flow(rot, a + b, f);
    // Compare away from breakpoints, where rounding of the shift decides the piece.
    for (int k = 0; k < 1000; ++k) {
      const double x = rng.uniform();
      bool near_break = false;
      for (double br : one.breaks()) near_break = near_break || std::abs(x - br) < 1e-12;
      if (near_break) continue;
      const auto u = two(x), v = one(x);
      for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(u[j], v[j], 1e-12);
    }
  }
  const auto space = MeasureSpace::uniform(6);
  const auto step = Flow::step(space, {1, 2, 0, 4, 5, 3}, 0.5);
  const auto g = builtin::random_atoms(rng, space, 2);
  for (double a : {0.0, 0.5, 1.5, 4.0}) {
    for (double b : {0.5, 1.0, 2.5}) {
      const auto two = apply_flow(step, a, apply_flow(step, b, g));
      const auto one = apply_flow(step, a + b, g);
      for (std::size_t atom = 0; atom < 6; ++atom) EXPECT_EQ(two.at_atom(atom), one.at_atom(atom));
    }
  }
}

TEST(SemigroupProperties, CesaroConsistencyForUnitSteps) {
  Rng rng(38);
  const auto space = MeasureSpace::uniform(16);
  const auto flow = Flow::shift(space, 5, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = builtin::random_atoms(rng, space, 2);
    for (std::size_t n = 1; n <= 20; ++n) {
      const auto a = cesaro_average(flow, static_cast<double>(n), f);
      const auto d = discrete_average(flow, n, f);
      for (std::size_t atom = 0; atom < 16; ++atom) {
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(a.at_atom(atom)[j], d.at_atom(atom)[j], 1e-15);
      }
    }
  }
}

TEST(SemigroupProperties, StrongContinuitySurrogate) {
  const auto rot = Flow::rotation();
  const auto f = builtin::hat(2);
  const double lip = 2.0;  // max |slope| over components of the default hat
  for (double t : {0.0, 1.3, 12.0}) {
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
      const auto diff = apply_flow(rot, t + delta, f) - apply_flow(rot, t, f);
      const VectorNorm n(VectorNorm::Kind::max, 2);
      EXPECT_LE(lp_norm(diff, 1.0, n), lip * delta + 1e-9);
    }
  }
}
