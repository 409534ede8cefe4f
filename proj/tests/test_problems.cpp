#include "acx/baselines.hpp"
#include "acx/catalog.hpp"
#include "acx/problems.hpp"
#include "acx/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numeric>

using namespace acx;

namespace {

const Vector kEigs{{20.0, 10.0, 2.0, 1.0}};

// Central differences with a per-coordinate step.
Vector numeric_gradient(const DescentProblem& p, const Vector& x)
{
   Vector g(x.size());
   for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
      Vector xp = x;
      Vector xm = x;
      xp[i] += h;
      xm[i] -= h;
      g[i] = (p.objective(xp) - p.objective(xm)) / (2 * h);
   }
   return g;
}

void expect_gradient_matches(const DescentProblem& p, Rng& rng, double lo, double hi,
                             int points = 100)
{
   for (int k = 0; k < points; ++k) {
      Vector x(static_cast<Eigen::Index>(p.dim));
      for (auto& v : x) {
         v = rng.uniform(lo, hi);
      }
      Vector g(x.size());
      p.gradient(x, g);
      const Vector fd = numeric_gradient(p, x);
      EXPECT_LE((g - fd).norm(), 1e-5 * std::max(1.0, g.norm())) << "point " << k;
   }
}

}  // namespace

TEST(LinearQuadratic, SolutionAndObjective)
{
   const auto q = linear_quadratic(kEigs, Vector::Ones(4));
   const Vector x = q.solution();
   EXPECT_DOUBLE_EQ(x[0], 0.05);
   EXPECT_DOUBLE_EQ(x[3], 1.0);
   Vector g(4);
   q.descent().gradient(x, g);
   EXPECT_LT(g.norm(), 1e-15);
   EXPECT_NEAR(q.objective(x), -0.5 * (0.05 + 0.1 + 0.5 + 1.0), 1e-15);
   EXPECT_NEAR(q.inverse_norm(Vector{{2.0, 0.0, 0.0, 0.0}}), std::sqrt(4.0 / 20.0), 1e-15);
   EXPECT_THROW(linear_quadratic(Vector{{1.0, 0.0}}, Vector::Ones(2)), ConfigError);
}

TEST(Rosenbrock, Examples)
{
   const auto f = rosenbrock(2);
   EXPECT_DOUBLE_EQ(f.objective(Vector::Ones(2)), 0.0);
   EXPECT_DOUBLE_EQ(f.objective(Vector::Zero(2)), 1.0);
   Vector g(2);
   f.gradient(Vector::Zero(2), g);
   EXPECT_DOUBLE_EQ(g[0], -2.0);
   EXPECT_DOUBLE_EQ(g[1], 0.0);
   f.gradient(Vector::Ones(2), g);
   EXPECT_EQ(g.norm(), 0.0);
   // Pairs are independent: two copies of the same pair double the value.
   EXPECT_DOUBLE_EQ(rosenbrock(4).objective(Vector{{0.5, 2.0, 0.5, 2.0}}),
                    2 * f.objective(Vector{{0.5, 2.0}}));
   EXPECT_THROW(rosenbrock(3), ConfigError);
   EXPECT_THROW(rosenbrock(0), ConfigError);
}

TEST(GradientProperty, MatchesFiniteDifferences)
{
   Rng rng(99);
   expect_gradient_matches(rosenbrock(6), rng, -2, 2);
   expect_gradient_matches(linear_quadratic(kEigs, Vector{{1.0, -1.0, 3.0, 0.5}}).descent(), rng,
                           -5, 5);
   const auto logistic = logistic_regression(200, 5, 7);
   expect_gradient_matches(logistic.problem(), rng, -1, 1);
}

TEST(Logistic, ValuesAtZeroCoefficients)
{
   const auto lr = logistic_regression(50, 4, 11);
   const Vector zero = Vector::Zero(4);
   EXPECT_NEAR(lr.objective(zero), 50 * std::log(2.0), 1e-12);
   Vector g(4);
   lr.gradient(zero, g);
   const Vector expected = lr.design.transpose() * (Vector::Constant(50, 0.5) - lr.response);
   EXPECT_LT((g - expected).norm(), 1e-12);
}

TEST(Logistic, DesignHasInterceptAndBinaryResponse)
{
   const auto lr = logistic_regression(100, 3, 4);
   EXPECT_EQ(lr.design.rows(), 100);
   EXPECT_EQ(lr.design.cols(), 3);
   EXPECT_TRUE((lr.design.col(0).array() == 1.0).all());
   EXPECT_TRUE((lr.design.rightCols(2).array().abs() <= 1.0).all());
   for (double y : lr.response) {
      EXPECT_TRUE(y == 0.0 || y == 1.0);
   }
   const auto again = logistic_regression(100, 3, 4);
   EXPECT_EQ(again.design, lr.design);
   EXPECT_EQ(again.response, lr.response);
}

TEST(Logistic, InterceptOnlyWithConstantResponseHasNoMinimum)
{
   // All y = 1: the likelihood keeps improving as the intercept grows.
   LogisticRegression lr;
   lr.design = Eigen::MatrixXd::Ones(10, 1);
   lr.response = Vector::Ones(10);
   Vector g(1);
   for (double b : {0.0, 5.0, 20.0}) {
      lr.gradient(Vector{{b}}, g);
      EXPECT_LT(g[0], 0.0);
   }
   EXPECT_LT(lr.objective(Vector{{20.0}}), lr.objective(Vector{{5.0}}));
   EXPECT_TRUE(std::isfinite(lr.objective(Vector{{800.0}})));
}

TEST(Admixture, DataAndFixedPoints)
{
   const double total = std::accumulate(PoissonAdmixture::kFrequencies.begin(),
                                        PoissonAdmixture::kFrequencies.end(), 0.0);
   EXPECT_EQ(total, 1096.0);

   // Equal means: both components are the same distribution, so the EM
   // update returns the sample mean for both and keeps pi.
   const PoissonAdmixture model;
   Vector out(3);
   model.em_step(Vector{{2.0, 2.0, 0.3}}, out);
   EXPECT_NEAR(out[0], PoissonAdmixture::sample_mean(), 1e-12);
   EXPECT_NEAR(out[1], PoissonAdmixture::sample_mean(), 1e-12);
   EXPECT_NEAR(out[2], 0.3, 1e-12);
}

TEST(Admixture, InvalidParametersAreDomainErrors)
{
   const PoissonAdmixture model;
   Vector out(3);
   EXPECT_THROW(model.em_step(Vector{{-1.0, 2.0, 0.5}}, out), DomainError);
   EXPECT_THROW(model.em_step(Vector{{1.0, 2.0, 1.0}}, out), DomainError);
   EXPECT_THROW(model.em_step(Vector{{1.0, 0.0, 0.5}}, out), DomainError);
}

TEST(AdmixtureProperty, EmStepNeverIncreasesTheNegativeLikelihood)
{
   const PoissonAdmixture model;
   for (std::uint64_t s = 0; s < 100; ++s) {
      Vector x = PoissonAdmixture::random_start(s);
      Vector next(3);
      for (int step = 0; step < 5; ++step) {
         model.em_step(x, next);
         EXPECT_LE(model.negative_log_likelihood(next),
                   model.negative_log_likelihood(x) + 1e-9 * std::abs(model.negative_log_likelihood(x)));
         x = next;
      }
   }
}

TEST(Admixture, AcceleratedEmReachesTheMaximum)
{
   ProblemSpec spec;
   spec.name = "admixture";
   const auto inst = make_instance(spec, 0);
   const auto report = solve(inst.mapping, inst.x0, inst.config);
   ASSERT_TRUE(report.converged);
   EXPECT_NEAR(PoissonAdmixture().negative_log_likelihood(report.x_final), 1989.9459, 1e-3);
}

TEST(PowerMethod, DiagonalExample)
{
   SparseMatrix q(2, 2);
   q.insert(0, 0) = 2.0;
   q.insert(1, 1) = 1.0;
   q.makeCompressed();
   const auto pm = power_method(q);
   const auto m = pm.mapping();
   Vector fx(2);
   m.apply(Vector{{1.0, 1.0}}, fx);
   EXPECT_DOUBLE_EQ(fx[0], 1.0);
   EXPECT_DOUBLE_EQ(fx[1], 0.5);
   m.apply(Vector{{-1.0, 0.0}}, fx);
   EXPECT_DOUBLE_EQ(fx[0], -1.0);
   EXPECT_DOUBLE_EQ(fx[1], 0.0);
   EXPECT_DOUBLE_EQ(pm.rayleigh(Vector{{1.0, 0.0}}), 2.0);
   EXPECT_DOUBLE_EQ(pm.eigen_residual(Vector{{1.0, 0.0}}), 0.0);
   EXPECT_THROW(m.apply(Vector::Zero(2), fx), ZeroVector);
}

TEST(PowerMethodProperty, ImagesHaveUnitMaxNorm)
{
   const auto pm = power_method(random_symmetric_matrix(60, 0.2, 10.0, 8));
   const auto m = pm.mapping();
   Rng rng(12);
   Vector x(60), fx(60);
   for (int k = 0; k < 50; ++k) {
      for (auto& v : x) {
         v = rng.uniform(0, 1);
      }
      m.apply(x, fx);
      EXPECT_NEAR(fx.lpNorm<Eigen::Infinity>(), 1.0, 1e-15);
   }
}

TEST(RandomSymmetricMatrix, IsSymmetricAndSeeded)
{
   const auto a = random_symmetric_matrix(40, 0.3, 5.0, 2);
   const auto b = random_symmetric_matrix(40, 0.3, 5.0, 2);
   const Eigen::MatrixXd da(a);
   EXPECT_EQ(da, Eigen::MatrixXd(b));
   EXPECT_EQ(da, da.transpose());
   EXPECT_TRUE((da.array() >= 0.0).all());
   EXPECT_NE(da, Eigen::MatrixXd(random_symmetric_matrix(40, 0.3, 5.0, 3)));
}

TEST(Panel, SingleFactorDemeaningIsIdempotent)
{
   const auto panel = synthetic_panel(500, {20, 30}, 0.5, 1);
   Rng rng(2);
   Vector v(500);
   for (auto& e : v) {
      e = rng.normal();
   }
   panel.demean(v, 0);
   Vector again = v;
   panel.demean(again, 0);
   EXPECT_LT((again - v).lpNorm<Eigen::Infinity>(), 1e-14);
   for (double s : panel.group_sums(v, 0)) {
      EXPECT_NEAR(s, 0.0, 1e-12);
   }
}

TEST(Panel, BalancedCrossedFactorsConvergeInOneSweep)
{
   // Every (g1, g2) combination appears once, so the factors are orthogonal.
   std::vector<int> g1, g2;
   for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 4; ++j) {
         g1.push_back(i);
         g2.push_back(j);
      }
   }
   const auto panel = std::make_shared<const FixedEffectsPanel>(
       std::vector<std::vector<int>>{g1, g2}, std::vector<int>{6, 4});
   const auto m = alternating_projections(panel);
   Rng rng(4);
   Vector x(24), fx(24), ffx(24);
   for (auto& e : x) {
      e = rng.normal();
   }
   m.apply(x, fx);
   m.apply(fx, ffx);
   EXPECT_LT((ffx - fx).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(Panel, GeneratorIsDeterministicAndRejectsBadInput)
{
   const auto a = synthetic_panel(1000, {50, 40}, 0.9, 6);
   const auto b = synthetic_panel(1000, {50, 40}, 0.9, 6);
   EXPECT_EQ(a.groups, b.groups);
   for (int g : a.groups[1]) {
      EXPECT_GE(g, 0);
      EXPECT_LT(g, 40);
   }
   EXPECT_THROW(FixedEffectsPanel({{0, 1}, {0}}, {2, 1}), ConfigError);
   EXPECT_THROW(FixedEffectsPanel({{0, 3}}, {2}), ConfigError);
}

TEST(Baselines, IdentityHessianConvergesInOneStep)
{
   const auto q = linear_quadratic(Vector::Ones(3), Vector{{1.0, 2.0, 3.0}});
   const auto sd = steepest_descent(q, Vector::Zero(3));
   EXPECT_TRUE(sd.converged);
   EXPECT_EQ(sd.iterations, 1u);
   const auto bb = barzilai_borwein(q, Vector::Zero(3));
   EXPECT_TRUE(bb.converged);
   EXPECT_EQ(bb.iterations, 1u);
}

TEST(Baselines, LinearExampleCounts)
{
   const auto q = linear_quadratic(kEigs, Vector::Ones(4));
   const auto bb = barzilai_borwein(q, Vector::Zero(4));
   EXPECT_TRUE(bb.converged);
   EXPECT_NEAR(static_cast<double>(bb.grad_evals), 25.0, 2.0);
   EXPECT_LT((bb.x_final - q.solution()).norm(), 1e-7);

   // Exact-line-search descent on this problem needs 183 gradients with
   // counting from x0 and the check on ||g|| <= 1e-8.
   const auto sd = steepest_descent(q, Vector::Zero(4));
   EXPECT_TRUE(sd.converged);
   EXPECT_EQ(sd.grad_evals, 183u);

   const auto bb_cauchy = barzilai_borwein(q, Vector::Zero(4), {}, BbStart::Cauchy);
   EXPECT_TRUE(bb_cauchy.converged);
}

TEST(Baselines, PlainIterationHitsItsBudget)
{
   const auto q = linear_quadratic(Vector{{1.5, 0.001}}, Vector::Ones(2));
   BaselineOptions opts;
   opts.max_evals = 50;
   const auto r = plain_iteration(q.mapping(), Vector::Zero(2), opts);
   EXPECT_FALSE(r.converged);
   EXPECT_EQ(r.status, Status::MaxMapsExceeded);
   EXPECT_EQ(r.maps, 50u);
}

TEST(Catalog, InstancesAreReproducible)
{
   for (const auto& name : catalog_names()) {
      ProblemSpec spec;
      spec.name = name;
      spec.seed = 3;
      if (name == "rosenbrock" || name == "rosenbrock-box" || name == "power") {
         spec.dim = 20;
      } else if (name == "logistic") {
         spec.dim = 5;
      } else if (name == "altproj") {
         spec.dim = 300;
         spec.groups = 10;
      }
      const auto a = make_instance(spec, 1);
      const auto b = make_instance(spec, 1);
      EXPECT_EQ(a.x0, b.x0) << name;
      const auto c = make_instance(spec, 2);
      if (name != "linquad" && name != "power" && name != "logistic") {
         EXPECT_NE(a.x0, c.x0) << name;
      }
   }
   ProblemSpec bad;
   bad.name = "nope";
   EXPECT_THROW(make_instance(bad, 0), ConfigError);
}
