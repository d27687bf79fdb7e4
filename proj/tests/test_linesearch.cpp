#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace ccopt;
using fixtures::one;
using fixtures::vec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

WolfeConfig wolfe(double sigma1, double sigma2, double mu) {
  WolfeConfig cfg;
  cfg.sigma1 = sigma1;
  cfg.sigma2 = sigma2;
  cfg.mu = mu;
  return cfg;
}

BacktrackConfig backtracking(double sigma1, double theta) {
  BacktrackConfig cfg;
  cfg.sigma1 = sigma1;
  cfg.theta = theta;
  return cfg;
}

}  // namespace

TEST(Config, Validation) {
  EXPECT_THROW(wolfe(0.9, 0.5, 0.5).validate(), Error);
  EXPECT_THROW(wolfe(0.1, 0.9, 1.0).validate(), Error);
  EXPECT_NO_THROW(wolfe(0.1, 0.9, 0.5).validate());
  EXPECT_THROW(backtracking(0.0, 0.5).validate(), Error);
  EXPECT_THROW(backtracking(0.1, 1.0).validate(), Error);
}

TEST(Armijo, HalfSquareHolds) {
  const ModelState m = linearize(fixtures::half_square(), one(1.0));
  EXPECT_TRUE(armijo_holds(m, one(-1.0), 1.0, 0.1));
}

TEST(Armijo, LeavingDomainFails) {
  const ModelState m = linearize(fixtures::half_square(ConvexRegularizer::box(one(0.0), one(2.0))), one(1.0));
  EXPECT_FALSE(armijo_holds(m, one(-0.5), 4.0, 0.1));
}

TEST(Armijo, LargeSigmaFails) {
  const ModelState m = linearize(fixtures::half_square(), one(1.0));
  EXPECT_FALSE(armijo_holds(m, one(-1.0), 1.0, 0.9));
}

TEST(Curvature, HalfSquareAtZero) {
  EXPECT_TRUE(curvature_holds(fixtures::half_square(), one(0.0), one(-1.0), 0.5, 0.9, -1.0));
}

TEST(Curvature, LinearNeverHolds) {
  for (double t : {0.5, 1.0, 8.0}) EXPECT_FALSE(curvature_holds(fixtures::linear(), one(-t), one(-1.0), 0.5, 0.9, -1.0));
}

TEST(Curvature, InfiniteRightSideHolds) {
  const auto p = fixtures::half_square(ConvexRegularizer::box(one(0.0), one(2.0)));
  EXPECT_TRUE(curvature_holds(p, one(0.2), one(-1.0), 0.5, 0.9, -1.0));
}

TEST(Backtrack, UnitStepAccepted) {
  const ModelState m = linearize(fixtures::half_square(), one(1.0));
  const auto out = backtrack(m, one(-1.0), backtracking(0.1, 0.5));
  EXPECT_EQ(out.status, LineSearchStatus::Accepted);
  EXPECT_EQ(out.t, 1.0);
  EXPECT_EQ(out.evaluations, 1);
}

TEST(Backtrack, ThreeHalvings) {
  const ModelState m = linearize(fixtures::half_square(), one(1.0));
  const auto out = backtrack(m, one(-1.0), backtracking(0.9, 0.5));
  EXPECT_EQ(out.status, LineSearchStatus::Accepted);
  EXPECT_EQ(out.t, 0.125);
  EXPECT_EQ(out.evaluations, 4);
}

TEST(Backtrack, AscentDirectionRejected) {
  // Delta f(1; 0.3) = 0.3 for f = x^2/2
  const ModelState m = linearize(fixtures::half_square(), one(1.0));
  EXPECT_DOUBLE_EQ(m.delta_f(one(0.3)).value(), 0.3);
  try {
    backtrack(m, one(0.3), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DescentRequired);
  }
}

TEST(Backtrack, HalvingCap) {
  const ModelState m = linearize(fixtures::half_square(), one(1.0));
  BacktrackConfig cfg = backtracking(0.9, 0.5);
  cfg.max_halvings = 2;
  EXPECT_EQ(backtrack(m, one(-1.0), cfg).status, LineSearchStatus::IterLimit);
}

TEST(WolfeBisect, UnitStepOnQuadratic) {
  const ModelState m = linearize(fixtures::half_square(), one(1.0));
  const auto out = wolfe_bisect(m, one(-1.0), wolfe(0.1, 0.9, 0.5));
  EXPECT_EQ(out.status, LineSearchStatus::Accepted);
  EXPECT_EQ(out.t, 1.0);
  EXPECT_EQ(out.evaluations, 1);
}

TEST(WolfeBisect, LinearIsUnboundedBelow) {
  const ModelState m = linearize(fixtures::linear(), one(0.0));
  const auto out = wolfe_bisect(m, one(-1.0), {});
  EXPECT_EQ(out.status, LineSearchStatus::UnboundedBelow);
  EXPECT_EQ(out.evaluations, 61);
  EXPECT_EQ(out.t, std::ldexp(1.0, 60));
}

TEST(WolfeBisect, DomainTruncatedDirectionHasInfiniteSurrogate) {
  // x + d = 0 lies outside [0.75, inf), so Delta f(1; -1) = +inf and the
  // search precondition Delta f < 0 does not hold.
  const auto p = fixtures::half_square(ConvexRegularizer::box(one(0.75), one(kInf)));
  const ModelState m = linearize(p, one(1.0));
  EXPECT_TRUE(m.delta_f(one(-1.0)).is_infinite());
  EXPECT_THROW(wolfe_bisect(m, one(-1.0), wolfe(0.1, 0.9, 0.5)), Error);
}

TEST(WolfeBisect, DomainTruncatedBracket) {
  // Delta f(1; -0.05) = -0.05. Doubling: t = 1, 2, 4 fail WWII (alpha = 4);
  // t = 8 and t = 6 leave [0.75, inf) (beta = 8, then 6); t = 5 reaches 0.75,
  // where WWI holds and the WWII right side is +inf.
  const auto p = fixtures::half_square(ConvexRegularizer::box(one(0.75), one(kInf)));
  const ModelState m = linearize(p, one(1.0));
  const Vector d = one(-0.05);
  const auto cfg = wolfe(0.1, 0.7, 0.5);
  const auto out = wolfe_bisect(m, d, cfg);
  EXPECT_EQ(out.status, LineSearchStatus::Accepted);
  EXPECT_EQ(out.t, 5.0);
  EXPECT_EQ(out.evaluations, 6);
  EXPECT_TRUE(weak_wolfe_holds(p, one(1.0), d, out.t, cfg));
}

TEST(WolfeBisect, FeasibleShortStepInBox) {
  const auto p = fixtures::half_square(ConvexRegularizer::box(one(0.75), one(kInf)));
  const auto cfg = wolfe(0.1, 0.9, 0.5);
  const auto out = wolfe_bisect(linearize(p, one(1.0)), one(-0.25), cfg);
  EXPECT_EQ(out.status, LineSearchStatus::Accepted);
  EXPECT_EQ(out.t, 1.0);
  EXPECT_TRUE(weak_wolfe_holds(p, one(1.0), one(-0.25), out.t, cfg));
}

TEST(WolfeBisect, BisectionFindsCurvaturePoint) {
  // f = |x^2 - 1| from x = 3 along d = -1: doubling overshoots, bisection settles.
  const auto p = fixtures::scalar_problem([](double x) { return x * x - 1.0; }, [](double x) { return 2.0 * x; },
                                          ConvexOuter::l1());
  const ModelState m = linearize(p, one(3.0));
  const auto cfg = wolfe(1e-4, 0.9, 0.5);
  const auto out = wolfe_bisect(m, one(-1.0), cfg);
  ASSERT_EQ(out.status, LineSearchStatus::Accepted);
  EXPECT_TRUE(weak_wolfe_holds(p, one(3.0), one(-1.0), out.t, cfg));
}

TEST(Drivers, RosenbrockBacktracking) {
  const auto e = *find_catalog_entry("rosenbrock_l1");
  const RunResult run = run_backtracking(e.problem, e.x0, {});
  EXPECT_TRUE(run.reason == TerminationReason::Stationary || run.reason == TerminationReason::SurrogateVanished);
  EXPECT_LE(run.f, 1e-6);
  for (std::size_t k = 1; k < run.trace.records.size(); ++k)
    EXPECT_LT(run.trace.records[k].f, run.trace.records[k - 1].f);
  EXPECT_LE(*run.stationarity, 1e-7);
}

TEST(Drivers, RosenbrockWolfeStepsVerify) {
  const auto e = *find_catalog_entry("rosenbrock_l1");
  const WolfeConfig cfg;
  const RunResult run = run_weak_wolfe(e.problem, e.x0, cfg);
  EXPECT_LE(run.f, 1e-6);
  const auto& recs = run.trace.records;
  for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
    EXPECT_TRUE(weak_wolfe_holds(e.problem, recs[k].x, recs[k].direction, *recs[k].step_or_radius, cfg)) << "k=" << k;
    EXPECT_LT(recs[k + 1].f, recs[k].f);
  }
}

TEST(Drivers, StartAtMinimizer) {
  const auto e = *find_catalog_entry("rosenbrock_l1");
  const Vector x = vec({1.0, 1.0});
  for (const RunResult& run : {run_backtracking(e.problem, x, {}), run_weak_wolfe(e.problem, x, {})}) {
    EXPECT_EQ(run.reason, TerminationReason::Stationary);
    EXPECT_EQ(run.trace.records.back().k, 0);
  }
}

TEST(Drivers, LinearDiverges) {
  const auto p = fixtures::linear();
  EXPECT_EQ(run_backtracking(p, one(0.0), {}).reason, TerminationReason::ObjectiveDiverging);
  EXPECT_EQ(run_weak_wolfe(p, one(0.0), {}).reason, TerminationReason::UnboundedBelow);
}

TEST(Drivers, NewtonDirectionTakesUnitSteps) {
  const auto e = *find_catalog_entry("smooth_quadratic");
  const DirectionOracle newton = [](const ModelState& m) -> std::optional<Vector> { return -m.x(); };
  const RunResult run = run_weak_wolfe(e.problem, e.x0, {}, {}, {}, newton);
  EXPECT_EQ(run.reason, TerminationReason::Stationary);
  ASSERT_GE(run.trace.records.size(), 2u);
  for (std::size_t k = 0; k + 1 < run.trace.records.size(); ++k) EXPECT_EQ(*run.trace.records[k].step_or_radius, 1.0);
}

TEST(Drivers, StationarityRecordedOnSchedule) {
  const auto e = *find_catalog_entry("rosenbrock_l1");
  StoppingCriteria stop;
  stop.stat_every = 5;
  const RunResult run = run_backtracking(e.problem, e.x0, {}, {}, stop);
  for (const auto& r : run.trace.records) {
    if (&r == &run.trace.records.back()) {
      EXPECT_TRUE(r.stationarity.has_value());
    } else {
      EXPECT_EQ(r.stationarity.has_value(), r.k % 5 == 0) << r.k;
    }
  }
}

TEST(Drivers, MaxIters) {
  const auto e = *find_catalog_entry("rosenbrock_l1");
  StoppingCriteria stop;
  stop.max_iters = 3;
  const RunResult run = run_weak_wolfe(e.problem, e.x0, {}, {}, stop);
  EXPECT_EQ(run.reason, TerminationReason::MaxIters);
  EXPECT_EQ(run.trace.records.back().k, 3);
}
