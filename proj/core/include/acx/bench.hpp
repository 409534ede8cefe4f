#ifndef ACX_BENCH_HPP
#define ACX_BENCH_HPP

#include "acx/catalog.hpp"
#include "acx/solver.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace acx {

enum class AlgorithmKind { Acx, Plain, SteepestDescent, BarzilaiBorwein };

struct AlgorithmSpec {
   std::string name;
   AlgorithmKind kind = AlgorithmKind::Acx;
   std::optional<OrderSchedule> schedule;  ///< Acx only

   /// acx-<orders> (e.g. acx-332, acx-2), plain, sd, bb
   static AlgorithmSpec parse(const std::string& name);
};

/// ACX^2, ACX^{3,2}, ACX^{3,3,2} plus whatever baselines the problem supports.
std::vector<AlgorithmSpec> default_algorithms(const ProblemInstance& instance);

struct BenchSpec {
   std::vector<ProblemSpec> problems;
   /// Empty means default_algorithms() per problem.
   std::vector<AlgorithmSpec> algorithms;
   std::size_t draws = 1;
   double timeout_seconds = 60.0;
   /// Upper bound on timed repetitions for runs under 0.1 s.
   std::size_t max_repetitions = 100;
   bool warmup = true;
   /// Fan (problem, draw) cells out to worker threads. Each solve stays
   /// single-threaded.
   bool parallel = false;

   void validate() const;
};

/// Suites addressable from the command line: every catalog name plus "all".
std::vector<ProblemSpec> suite_problems(const std::string& suite, std::uint64_t seed);

struct ProfileRow {
   std::string problem;
   std::size_t draw = 0;
   std::string algorithm;
   double time_ms = 0.0;  ///< +inf when not converged
   std::size_t maps = 0;
   std::size_t grad_evals = 0;
   std::size_t obj_evals = 0;
   bool converged = false;
   double final_objective = 0.0;

   friend bool operator==(const ProfileRow&, const ProfileRow&) = default;
};

struct ProfileTable {
   std::vector<ProfileRow> rows;

   /// Orders rows by (problem, draw, algorithm).
   void sort();
};

/// Runs one algorithm on one instance.
RunReport run_algorithm(const ProblemInstance& instance, const AlgorithmSpec& algorithm,
                        double timeout_seconds = 0.0);

/// Every algorithm on every (problem, draw), all from the same start.
/// Timing covers the solve only: one discarded warm-up per (problem,
/// algorithm), then the median of 5 repetitions if a run takes at least
/// 0.1 s, otherwise the median of up to max_repetitions.
ProfileTable run_suite(const BenchSpec& spec);

struct FilterResult {
   ProfileTable table;
   std::size_t kept = 0;
   std::size_t rejected = 0;

   double rejection_rate() const;
};

/// Drops every (problem, draw) whose final objectives differ from their
/// minimum by tol or more, non-converged runs included.
FilterResult discrepancy_filter(const ProfileTable& table, double tol = 1e-5);

struct ProfileCurve {
   std::string algorithm;
   std::vector<double> tau;
   std::vector<double> fraction;
};

/// `points` log-spaced ratios in [1, tau_max].
std::vector<double> default_tau_grid(double tau_max = 100.0, std::size_t points = 64);

/// fraction(tau) = share of (problem, draw) pairs on which the algorithm
/// converged within tau times the fastest converged time.
std::vector<ProfileCurve> performance_profile(const ProfileTable& table,
                                              std::span<const double> tau_grid);

}  // namespace acx

#endif  // ACX_BENCH_HPP
