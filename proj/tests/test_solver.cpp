#include "acx/random.hpp"
#include "acx/solver.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

using namespace acx;
using acx::testing::CountingMapping;
using acx::testing::linear_map;

namespace {

const Vector kEigs{{20.0, 10.0, 2.0, 1.0}};
const Vector kOnes = Vector::Ones(4);
constexpr double kInf = std::numeric_limits<double>::infinity();

AcxConfig linear_example_config(std::vector<int> orders)
{
   AcxConfig cfg;
   cfg.schedule = OrderSchedule(std::move(orders));
   cfg.tol = 1e-8;
   cfg.norm = Norm::Two;
   return cfg;
}

// F(x) = x + c: residual |c| forever, differences of order 2 vanish.
Mapping translation(const Vector& c)
{
   Mapping m;
   m.dim = static_cast<std::size_t>(c.size());
   m.apply = [c](const Vector& x, Vector& fx) { fx = x + c; };
   return m;
}

Vector random_vector(Rng& rng, Eigen::Index n, double lo, double hi)
{
   Vector v(n);
   for (Eigen::Index i = 0; i < n; ++i) {
      v[i] = rng.uniform(lo, hi);
   }
   return v;
}

}  // namespace

TEST(ConstrainSigma, Examples)
{
   AcxConfig cfg;
   cfg.sigma_min = 1.0;
   EXPECT_EQ(constrain_sigma(0.3, cfg), 1.0);
   EXPECT_EQ(constrain_sigma(2.5, cfg), 2.5);
   cfg.sigma_min.reset();
   EXPECT_EQ(constrain_sigma(0.3, cfg), 0.3);
}

TEST(ApplyBounds, Examples)
{
   const auto b9 = BoxBounds::uniform(1, 0.0, 1.0, 0.9);
   const auto b8 = BoxBounds::uniform(1, 0.0, 1.0, 0.8);
   EXPECT_DOUBLE_EQ(apply_bounds(Vector{{0.5}}, Vector{{0.6}}, b9)[0], 0.6);
   EXPECT_DOUBLE_EQ(apply_bounds(Vector{{0.5}}, Vector{{2.0}}, b9)[0], 0.9 * 1.0 + 0.1 * 0.5);
   EXPECT_DOUBLE_EQ(apply_bounds(Vector{{0.5}}, Vector{{-3.0}}, b8)[0], 0.8 * 0.0 + 0.2 * 0.5);
}

TEST(ApplyBounds, InfiniteBoundsDisableTheClamp)
{
   const BoxBounds b(Vector{{-kInf, 0.0}}, Vector{{kInf, kInf}}, 0.9);
   const Vector out = apply_bounds(Vector{{0.0, 1.0}}, Vector{{-1e300, 1e300}}, b);
   EXPECT_EQ(out[0], -1e300);
   EXPECT_EQ(out[1], 1e300);
}

TEST(ApplyBounds, StaysStrictlyInsideUnderRounding)
{
   // omega close to 1 and a previous point one ulp from the bound.
   const double upper = 0.3;
   const double prev = std::nextafter(upper, 0.0);
   const auto b = BoxBounds::uniform(1, -kInf, upper, 0.999);
   const Vector out = apply_bounds(Vector{{prev}}, Vector{{5.0}}, b);
   EXPECT_LT(out[0], upper);
   EXPECT_GE(out[0], prev);

   const auto lo = BoxBounds::uniform(1, 0.7, kInf, 0.999);
   const double prev_lo = std::nextafter(0.7, 1.0);
   const Vector out_lo = apply_bounds(Vector{{prev_lo}}, Vector{{-5.0}}, lo);
   EXPECT_GT(out_lo[0], 0.7);
}

TEST(ApplyBoundsProperty, MovesAtMostOmegaOfTheRemainingDistance)
{
   Rng rng(41);
   for (int trial = 0; trial < 500; ++trial) {
      const double lo = rng.uniform(-5, 0);
      const double hi = lo + rng.uniform(0.1, 5);
      const double omega = rng.uniform(0.05, 0.999);
      const double prev = lo + (hi - lo) * rng.uniform(0.01, 0.99);
      const double prop = rng.uniform(-20, 20);
      const auto b = BoxBounds::uniform(1, lo, hi, omega);
      const double out = apply_bounds(Vector{{prev}}, Vector{{prop}}, b)[0];
      EXPECT_GT(out, lo);
      EXPECT_LT(out, hi);
      if (out > prev) {
         EXPECT_LE(out - prev, omega * (hi - prev) * (1 + 1e-12));
      } else {
         EXPECT_LE(prev - out, omega * (prev - lo) * (1 + 1e-12));
      }
      if (prop > lo && prop < hi && std::abs(prop - prev) <= omega * std::min(hi - prev, prev - lo)) {
         EXPECT_EQ(out, prop);
      }
   }
}

TEST(BoxBounds, Validation)
{
   EXPECT_THROW(BoxBounds::uniform(2, 1.0, 0.0).validate(2), ConfigError);
   EXPECT_THROW(BoxBounds::uniform(2, 0.0, 1.0, 1.0).validate(2), ConfigError);
   EXPECT_THROW(BoxBounds::uniform(2, 0.0, 1.0).validate(3), ConfigError);
   EXPECT_NO_THROW(BoxBounds::uniform(2, -kInf, kInf).validate(2));
   EXPECT_TRUE(BoxBounds::uniform(2, 0.0, 1.0).strictly_contains(Vector{{0.5, 0.1}}));
   EXPECT_FALSE(BoxBounds::uniform(2, 0.0, 1.0).strictly_contains(Vector{{0.0, 0.1}}));
}

TEST(CheckConvergence, Examples)
{
   AcxConfig cfg;
   cfg.tol = 1e-7;
   cfg.norm = Norm::Inf;
   EXPECT_TRUE(check_convergence(Vector{{1e-8, -5e-9}}, cfg));
   EXPECT_FALSE(check_convergence(Vector{{1e-8, 2e-7}}, cfg));
   cfg.norm = Norm::Two;
   const Vector boundary{{6e-8, 8e-8}};
   EXPECT_EQ(check_convergence(boundary, cfg),
             std::sqrt(6e-8 * 6e-8 + 8e-8 * 8e-8) <= 1e-7);
   EXPECT_TRUE(check_convergence(boundary, cfg));
}

TEST(Solve, LinearExampleSquaredThenCubic)
{
   const auto report = solve(linear_map(kEigs, kOnes), Vector::Zero(4), linear_example_config({3, 2}));
   EXPECT_TRUE(report.converged);
   EXPECT_NEAR(static_cast<double>(report.maps), 20.0, 2.0);
   EXPECT_LT((report.x_final - kOnes.cwiseQuotient(kEigs)).norm(), 1e-8);
}

TEST(Solve, LinearExampleSquaredOnly)
{
   const auto report = solve(linear_map(kEigs, kOnes), Vector::Zero(4), linear_example_config({2}));
   EXPECT_TRUE(report.converged);
   EXPECT_NEAR(static_cast<double>(report.maps), 34.0, 2.0);
}

TEST(Solve, FixedPointStartConvergesImmediately)
{
   const Vector x0 = kOnes.cwiseQuotient(kEigs);
   const auto report = solve(linear_map(kEigs, kOnes), x0, linear_example_config({3, 2}));
   EXPECT_TRUE(report.converged);
   EXPECT_EQ(report.status, Status::Converged);
   EXPECT_EQ(report.iterations, 0u);
   EXPECT_EQ(report.maps, 1u);
   EXPECT_EQ(report.x_final, x0);
}

TEST(Solve, StabilizationAddsOneMapPerCycle)
{
   AcxConfig cfg;
   cfg.schedule = OrderSchedule({2});
   cfg.stabilize = true;
   cfg.max_maps = 9;
   CountingMapping counted(translation(Vector{{1.0, -1.0}}));
   const auto report = solve(counted.map, Vector::Zero(2), cfg);
   EXPECT_FALSE(report.converged);
   EXPECT_EQ(report.status, Status::MaxMapsExceeded);
   EXPECT_EQ(report.maps, 9u);
   EXPECT_EQ(report.iterations, 3u);
   EXPECT_EQ(*counted.calls, 9u);
}

TEST(StabilizationMap, IdentityIsANoOp)
{
   Mapping identity;
   identity.dim = 3;
   identity.apply = [](const Vector& x, Vector& fx) { fx = x; };
   const Vector x{{1.0, 2.0, 3.0}};
   EXPECT_EQ(stabilization_map(identity, x), x);
}

TEST(Solve, BacktrackHalvesStepPerConsecutiveFailure)
{
   // Failures on the 3rd and 6th call: the first cycle of the restart from
   // x0 runs at sigma / 2, the next at sigma / 4.
   auto calls = std::make_shared<int>(0);
   Mapping m = translation(Vector{{0.5}});
   m.apply = [calls](const Vector& x, Vector& fx) {
      ++*calls;
      fx = x + Vector{{0.5}};
      if (*calls == 3 || *calls == 6) {
         fx[0] = std::numeric_limits<double>::quiet_NaN();
      }
   };
   AcxConfig cfg;
   cfg.schedule = OrderSchedule({2});
   cfg.max_maps = 10;
   cfg.record_trajectory = true;
   const Vector x0{{1.0}};
   const auto report = solve(m, x0, cfg);
   ASSERT_GE(report.trajectory.size(), 3u);
   EXPECT_EQ(report.backtrack_count, 2u);
   EXPECT_DOUBLE_EQ(report.trajectory[0].sigma, 1.0);
   EXPECT_DOUBLE_EQ(report.trajectory[1].sigma, 0.5);
   EXPECT_DOUBLE_EQ(report.trajectory[2].sigma, 0.25);
   EXPECT_EQ(report.x_final, x0);
}

TEST(Solve, BacktrackReductionLiftsAfterImprovement)
{
   // Contraction that fails once. The restart begins at the best iterate
   // F(x0); its second map improves the residual, so the extrapolation
   // after the restart uses the full step.
   const auto pure = [](const Vector& x, Vector& fx) {
      fx = 0.9 * x + Vector{{0.01}} * std::sin(x[0]);
   };
   auto calls = std::make_shared<int>(0);
   Mapping m;
   m.dim = 1;
   m.apply = [calls, pure](const Vector& x, Vector& fx) {
      ++*calls;
      pure(x, fx);
      if (*calls == 3) {
         fx[0] = std::numeric_limits<double>::quiet_NaN();
      }
   };
   AcxConfig cfg;
   cfg.schedule = OrderSchedule({2});
   cfg.record_trajectory = true;
   const Vector x0{{1.0}};
   const auto report = solve(m, x0, cfg);
   EXPECT_TRUE(report.converged);
   EXPECT_EQ(report.backtrack_count, 1u);
   ASSERT_GE(report.trajectory.size(), 2u);

   Vector best(1);
   pure(x0, best);
   const double full = step_length(build_stack(pure, best, 2)).sigma;
   EXPECT_DOUBLE_EQ(report.trajectory[1].sigma, full);
}

TEST(Solve, PersistentFailureIsUnrecoverable)
{
   Mapping m;
   m.dim = 2;
   m.apply = [](const Vector&, Vector& fx) { fx.setConstant(std::numeric_limits<double>::infinity()); };
   AcxConfig cfg;
   const Vector x0{{1.0, 2.0}};
   const auto report = solve(m, x0, cfg);
   EXPECT_FALSE(report.converged);
   EXPECT_EQ(report.status, Status::Unrecoverable);
   EXPECT_EQ(report.backtrack_count, 31u);
   EXPECT_EQ(report.x_final, x0);
}

TEST(Solve, ThrownMappingFailureBacktracks)
{
   Mapping m;
   m.dim = 1;
   m.apply = [](const Vector& x, Vector& fx) {
      if (x[0] < 0.0) {
         throw DomainError("negative");
      }
      fx = 0.5 * x + Vector{{0.5}};
   };
   AcxConfig cfg;
   cfg.max_backtracks = 3;
   const auto report = solve(m, Vector{{3.0}}, cfg);
   EXPECT_TRUE(report.converged);
   EXPECT_NEAR(report.x_final[0], 1.0, 1e-6);
}

TEST(Solve, TimeLimitStopsTheRun)
{
   Mapping m = translation(Vector{{1.0}});
   m.apply = [](const Vector& x, Vector& fx) {
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
      fx = x + Vector{{1.0}};
   };
   AcxConfig cfg;
   cfg.time_limit_seconds = 0.01;
   const auto report = solve(m, Vector{{0.0}}, cfg);
   EXPECT_EQ(report.status, Status::TimedOut);
   EXPECT_FALSE(report.converged);
   EXPECT_GT(report.maps, 0u);
}

TEST(Solve, RejectsBadConfiguration)
{
   const auto map = linear_map(kEigs, kOnes);
   AcxConfig cfg;
   EXPECT_THROW(solve(map, Vector::Zero(3), cfg), ConfigError);
   cfg.tol = 0.0;
   EXPECT_THROW(solve(map, Vector::Zero(4), cfg), ConfigError);
   cfg = AcxConfig{};
   cfg.rho = 1.0;
   EXPECT_THROW(solve(map, Vector::Zero(4), cfg), ConfigError);
   cfg = AcxConfig{};
   cfg.bounds = BoxBounds::uniform(4, 0.0, 1.0);
   EXPECT_THROW(solve(map, Vector::Zero(4), cfg), ConfigError);
   cfg = AcxConfig{};
   cfg.track_best_by = TrackBy::Objective;
   EXPECT_THROW(solve(map, Vector::Zero(4), cfg), ConfigError);
   Vector bad = Vector::Zero(4);
   bad[1] = std::numeric_limits<double>::quiet_NaN();
   EXPECT_THROW(solve(map, bad, AcxConfig{}), ConfigError);
}

TEST(SolveProperty, CountsEveryMapCall)
{
   Rng rng(43);
   for (int trial = 0; trial < 30; ++trial) {
      const auto n = static_cast<Eigen::Index>(2 + rng.index(10));
      CountingMapping counted(linear_map(random_vector(rng, n, 0.1, 1.9), random_vector(rng, n, -1, 1)));
      AcxConfig cfg;
      cfg.schedule = OrderSchedule(trial % 3 == 0 ? std::vector<int>{2}
                                   : trial % 3 == 1 ? std::vector<int>{3, 2}
                                                    : std::vector<int>{3, 3, 2});
      cfg.stabilize = trial % 2 == 0;
      cfg.max_maps = 5 + rng.index(60);
      const auto report = solve(counted.map, random_vector(rng, n, -3, 3), cfg);
      EXPECT_EQ(report.maps, *counted.calls);
      EXPECT_GE(report.maps, report.iterations * static_cast<std::size_t>(cfg.schedule.min_order()));
      if (report.converged) {
         EXPECT_LE(report.final_residual, cfg.tol);
      }
   }
}

TEST(SolveProperty, ReportsTheBestIterateSeen)
{
   Rng rng(47);
   for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = 5;
      const Vector a = random_vector(rng, n, 0.5, 30.0);
      const Vector b = random_vector(rng, n, -1, 1);
      auto visited = std::make_shared<std::vector<std::pair<Vector, double>>>();
      Mapping m;
      m.dim = static_cast<std::size_t>(n);
      m.apply = [a, b, visited](const Vector& x, Vector& fx) {
         fx = x - (a.cwiseProduct(x) - b);
         visited->emplace_back(x, (fx - x).lpNorm<Eigen::Infinity>());
      };
      AcxConfig cfg;
      cfg.max_maps = 7 + rng.index(10);
      cfg.tol = 1e-30;
      const auto report = solve(m, random_vector(rng, n, -5, 5), cfg);
      ASSERT_FALSE(report.converged);
      double best = kInf;
      for (const auto& [x, r] : *visited) {
         best = std::min(best, r);
      }
      EXPECT_EQ(report.final_residual, best);
      const Vector fx = report.x_final - (a.cwiseProduct(report.x_final) - b);
      EXPECT_EQ((fx - report.x_final).lpNorm<Eigen::Infinity>(), best);
   }
}

TEST(SolveProperty, ContractsTheInverseNormEveryExtrapolation)
{
   Rng rng(53);
   for (int system = 0; system < 200; ++system) {
      const auto n = static_cast<Eigen::Index>(2 + rng.index(49));
      const double condition = std::pow(10.0, rng.uniform(0.0, 4.0));
      Vector a(n);
      for (Eigen::Index i = 0; i < n; ++i) {
         a[i] = std::pow(condition, rng.uniform());
      }
      a[0] = 1.0;
      a[n - 1] = condition;
      const Vector b = random_vector(rng, n, -1, 1);
      const Vector solution = b.cwiseQuotient(a);
      const auto map = linear_map(a, b);
      const double factor = std::sqrt(1.0 - a.minCoeff() / a.maxCoeff());
      auto energy = [&](const Vector& e) { return std::sqrt(e.cwiseProduct(e).cwiseQuotient(a).sum()); };

      Vector x = random_vector(rng, n, -10, 10);
      for (int cycle = 0; cycle < 8; ++cycle) {
         const double before = energy(x - solution);
         if (before < 1e-9) {
            break;
         }
         const int p = 2 + static_cast<int>(rng.index(2));
         const auto stack = build_stack(map.apply, x, p);
         const auto step = step_length(stack);
         ASSERT_FALSE(step.degenerate);
         x = extrapolate(stack, step.sigma);
         EXPECT_LE(energy(x - solution), factor * before + 1e-10 * before)
             << "system " << system << " cycle " << cycle << " order " << p;
      }
   }
}

TEST(SolveProperty, TerminatesOnSpdLinearMaps)
{
   Rng rng(59);
   for (int trial = 0; trial < 50; ++trial) {
      const auto n = static_cast<Eigen::Index>(2 + rng.index(40));
      const Vector a = random_vector(rng, n, 0.01, 100.0);
      AcxConfig cfg;
      cfg.schedule = OrderSchedule(trial % 2 ? std::vector<int>{3, 2} : std::vector<int>{2});
      cfg.tol = 1e-8;
      cfg.norm = Norm::Two;
      const auto report = solve(linear_map(a, random_vector(rng, n, -1, 1)),
                                random_vector(rng, n, -1, 1), cfg);
      EXPECT_TRUE(report.converged) << "trial " << trial;
      EXPECT_LT(report.maps, cfg.max_maps);
   }
}

TEST(SolveProperty, IteratesStayStrictlyInsideBounds)
{
   Rng rng(61);
   for (int trial = 0; trial < 30; ++trial) {
      const Eigen::Index n = 6;
      const Vector lower = random_vector(rng, n, -2, -0.5);
      const Vector upper = random_vector(rng, n, 0.5, 2);
      // The unconstrained fixed point lies outside the box. The map keeps its
      // own images inside, as EM and projected maps do; extrapolations are
      // the solver's job.
      const Vector target = random_vector(rng, n, -6, 6);
      const BoxBounds own = BoxBounds(lower, upper, 0.5);
      auto outside = std::make_shared<int>(0);
      Mapping m;
      m.dim = static_cast<std::size_t>(n);
      m.apply = [=](const Vector& x, Vector& fx) {
         for (Eigen::Index i = 0; i < n; ++i) {
            if (!(x[i] > lower[i] && x[i] < upper[i])) {
               ++*outside;
            }
         }
         fx = x + 0.4 * (target - x);
         apply_bounds_inplace(x, fx, own);
      };
      AcxConfig cfg;
      cfg.schedule = OrderSchedule({3, 2});
      cfg.bounds = BoxBounds(lower, upper, rng.uniform(0.5, 0.999));
      cfg.max_maps = 200;
      const auto report = solve(m, Vector::Zero(n), cfg);
      (void)report;
      EXPECT_EQ(*outside, 0);
   }
}

TEST(Solve, TracksBestByObjectiveWhenAsked)
{
   auto map = linear_map(kEigs, kOnes);
   map.objective = [](const Vector& x) {
      return 0.5 * x.dot(kEigs.cwiseProduct(x)) - x.dot(kOnes);
   };
   AcxConfig cfg = linear_example_config({3, 2});
   cfg.track_best_by = TrackBy::Objective;
   const auto report = solve(map, Vector::Zero(4), cfg);
   EXPECT_TRUE(report.converged);
   EXPECT_GT(report.objective_evals, 0u);
   EXPECT_EQ(report.objective_evals, report.iterations + 1);
}

TEST(Solve, TrajectoryHasOnePointPerCycle)
{
   auto map = linear_map(kEigs, kOnes);
   AcxConfig cfg = linear_example_config({3, 2});
   cfg.record_trajectory = true;
   const auto report = solve(map, Vector::Zero(4), cfg);
   ASSERT_EQ(report.trajectory.size(), report.iterations);
   for (std::size_t i = 0; i < report.trajectory.size(); ++i) {
      EXPECT_EQ(report.trajectory[i].iteration, i);
      EXPECT_EQ(report.trajectory[i].order, cfg.schedule.order_at(i));
      EXPECT_GT(report.trajectory[i].sigma, 0.0);
   }
}

TEST(StatusNames, AreStable)
{
   EXPECT_EQ(to_string(Status::Converged), "converged");
   EXPECT_EQ(to_string(Status::MaxMapsExceeded), "max-maps-exceeded");
   EXPECT_EQ(to_string(Status::TimedOut), "timed-out");
   EXPECT_EQ(to_string(Status::Unrecoverable), "unrecoverable");
}
