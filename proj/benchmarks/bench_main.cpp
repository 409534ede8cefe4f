#include "acx/descent.hpp"
#include "acx/extrapolation.hpp"
#include "acx/problems.hpp"
#include "acx/random.hpp"
#include "acx/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace acx;

Vector random_vector(Eigen::Index n, std::uint64_t seed)
{
   Rng rng(seed);
   Vector v(n);
   for (auto& e : v) {
      e = rng.uniform(-1, 1);
   }
   return v;
}

void linear_map_apply(const Vector& a, const Vector& x, Vector& fx)
{
   fx = x - (a.cwiseProduct(x) - Vector::Ones(x.size()));
}

void BM_BuildAndExtrapolate(benchmark::State& state)
{
   const auto n = static_cast<Eigen::Index>(state.range(0));
   const int order = static_cast<int>(state.range(1));
   const Vector a = (random_vector(n, 1).array().abs() + 0.1).matrix();
   const Vector x = random_vector(n, 2);
   const auto map = [&a](const Vector& in, Vector& out) { linear_map_apply(a, in, out); };
   for (auto _ : state) {
      const auto stack = build_stack(map, x, order);
      const auto step = step_length(stack);
      benchmark::DoNotOptimize(extrapolate(stack, step.sigma));
   }
   state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_BuildAndExtrapolate)->ArgsProduct({{100, 10000, 1000000}, {2, 3}});

void BM_StepLength(benchmark::State& state)
{
   const auto n = static_cast<Eigen::Index>(state.range(0));
   const Vector a = (random_vector(n, 3).array().abs() + 0.1).matrix();
   const auto map = [&a](const Vector& in, Vector& out) { linear_map_apply(a, in, out); };
   const auto stack = build_stack(map, random_vector(n, 4), 3);
   for (auto _ : state) {
      benchmark::DoNotOptimize(step_length(stack));
   }
}
BENCHMARK(BM_StepLength)->Arg(1000)->Arg(100000);

void BM_SolveLinearExample(benchmark::State& state)
{
   const auto q = linear_quadratic(Vector{{20.0, 10.0, 2.0, 1.0}}, Vector::Ones(4));
   const auto map = q.mapping();
   AcxConfig cfg;
   cfg.tol = 1e-8;
   cfg.norm = Norm::Two;
   for (auto _ : state) {
      benchmark::DoNotOptimize(solve(map, Vector::Zero(4), cfg));
   }
}
BENCHMARK(BM_SolveLinearExample);

void BM_MinimizeRosenbrock(benchmark::State& state)
{
   const auto n = static_cast<std::size_t>(state.range(0));
   const auto f = rosenbrock(n);
   const Vector x0 = 5.0 * random_vector(static_cast<Eigen::Index>(n), 5);
   AcxConfig cfg;
   cfg.schedule = OrderSchedule({3, 3, 2});
   for (auto _ : state) {
      benchmark::DoNotOptimize(minimize(f, x0, cfg));
   }
}
BENCHMARK(BM_MinimizeRosenbrock)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
