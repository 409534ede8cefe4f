// acx: solve catalog problems, run benchmark grids and build performance profiles.

#include "acx/bench.hpp"
#include "acx/catalog.hpp"
#include "acx/descent.hpp"
#include "acx/solver.hpp"
#include "acx/table_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

namespace {

constexpr int kSolverFailure = 1;
constexpr int kConfigError = 2;

struct SolveArgs {
   std::string problem;
   std::size_t dim = 0;
   std::string orders = "3,2";
   std::string step = "abs";
   std::optional<double> tol;
   std::optional<std::string> norm;
   std::optional<double> sigma_min;
   bool stabilize = false;
   std::optional<std::string> bounds;
   std::optional<double> omega;
   std::uint64_t seed = 0;
   std::uint64_t draw = 0;
   std::optional<std::size_t> max_maps;
   std::string trace;
};

struct BenchArgs {
   std::string suite = "all";
   std::size_t draws = 1;
   std::uint64_t seed = 0;
   double timeout = 60.0;
   std::string out = "results.csv";
   std::optional<std::string> format;
   std::vector<std::string> algorithms;
   std::size_t dim = 0;
   std::size_t repetitions = 100;
   bool parallel = false;
};

struct ProfileArgs {
   std::string in;
   std::string out = "profile.csv";
   double tau_max = 100.0;
   std::size_t points = 64;
   double crit_tol = 1e-5;
};

std::pair<double, double> parse_bounds(const std::string& text)
{
   const auto comma = text.find(',');
   if (comma == std::string::npos) {
      throw acx::ConfigError("--bounds expects lo,hi");
   }
   auto number = [&](const std::string& s) {
      if (s == "inf" || s == "+inf") {
         return std::numeric_limits<double>::infinity();
      }
      if (s == "-inf") {
         return -std::numeric_limits<double>::infinity();
      }
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) {
         throw acx::ConfigError("bad bound '" + s + "'");
      }
      return v;
   };
   return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
}

int run_solve(const SolveArgs& a)
{
   acx::ProblemSpec spec;
   spec.name = a.problem;
   spec.dim = a.dim;
   spec.seed = a.seed;
   spec.omega = a.omega;
   const acx::ProblemInstance inst = acx::make_instance(spec, a.draw);

   acx::AcxConfig cfg = inst.config;
   cfg.schedule = acx::OrderSchedule::parse(a.orders);
   cfg.step_kind = acx::parse_step_kind(a.step);
   if (a.tol) {
      cfg.tol = *a.tol;
   }
   if (a.norm) {
      cfg.norm = acx::parse_norm(*a.norm);
   }
   if (a.sigma_min) {
      cfg.sigma_min = a.sigma_min;
   }
   if (a.stabilize) {
      cfg.stabilize = true;
   }
   if (a.max_maps) {
      cfg.max_maps = *a.max_maps;
   }
   if (a.bounds) {
      const auto [lo, hi] = parse_bounds(*a.bounds);
      cfg.bounds = acx::BoxBounds::uniform(static_cast<std::size_t>(inst.x0.size()), lo, hi,
                                           a.omega.value_or(0.9));
   }
   cfg.record_trajectory = !a.trace.empty();

   const acx::RunReport r = inst.kind == acx::ProblemKind::Descent
                                ? acx::minimize(inst.descent, inst.x0, cfg)
                                : acx::solve(inst.mapping, inst.x0, cfg);
   if (!a.trace.empty()) {
      acx::write_trajectory(r.trajectory, a.trace);
   }

   const double objective = r.final_objective ? *r.final_objective
                            : inst.objective  ? inst.objective(r.x_final)
                                              : std::numeric_limits<double>::quiet_NaN();
   std::printf("problem      %s\n", inst.name.c_str());
   std::printf("schedule     %s\n", cfg.schedule.to_string().c_str());
   std::printf("status       %s\n", acx::to_string(r.status).c_str());
   std::printf("maps         %zu\n", r.maps);
   std::printf("grad_evals   %zu\n", r.grad_evals);
   std::printf("obj_evals    %zu\n", r.objective_evals);
   std::printf("iterations   %zu\n", r.iterations);
   std::printf("backtracks   %zu\n", r.backtrack_count);
   std::printf("residual     %.6e\n", r.final_residual);
   std::printf("objective    %.10g\n", objective);
   return r.converged ? 0 : kSolverFailure;
}

int run_bench(const BenchArgs& a)
{
   acx::BenchSpec spec;
   spec.problems = acx::suite_problems(a.suite, a.seed);
   for (auto& p : spec.problems) {
      p.dim = a.dim;
   }
   for (const auto& name : a.algorithms) {
      spec.algorithms.push_back(acx::AlgorithmSpec::parse(name));
   }
   spec.draws = a.draws;
   spec.timeout_seconds = a.timeout;
   spec.max_repetitions = a.repetitions;
   spec.parallel = a.parallel;

   const std::filesystem::path out(a.out);
   const auto format = a.format ? acx::parse_format(*a.format)
                       : out.extension() == ".json" ? acx::TableFormat::Json
                                                    : acx::TableFormat::Csv;
   spec.validate();
   const acx::ProfileTable table = acx::run_suite(spec);
   acx::write_table(table, out, format);

   std::size_t converged = 0;
   for (const auto& row : table.rows) {
      converged += row.converged ? 1 : 0;
   }
   std::printf("%zu runs, %zu converged, written to %s\n", table.rows.size(), converged,
               a.out.c_str());
   return 0;
}

int run_profile(const ProfileArgs& a)
{
   const acx::ProfileTable table = acx::read_table(a.in);
   const acx::FilterResult filtered = acx::discrepancy_filter(table, a.crit_tol);
   const auto grid = acx::default_tau_grid(a.tau_max, a.points);
   const auto curves = acx::performance_profile(filtered.table, grid);
   acx::write_profile(curves, std::filesystem::path(a.out));

   std::printf("kept %zu draws, rejected %zu (%.2f%%)\n", filtered.kept, filtered.rejected,
               100.0 * filtered.rejection_rate());
   for (const auto& c : curves) {
      std::printf("%-10s fraction at tau=1: %.3f  at tau=%g: %.3f\n", c.algorithm.c_str(),
                  c.fraction.front(), a.tau_max, c.fraction.back());
   }
   return 0;
}

}  // namespace

int main(int argc, char** argv)
{
   CLI::App app{"Alternating cyclic extrapolation: solver and benchmark harness"};
   app.require_subcommand(1);

   std::string names;
   for (const auto& n : acx::catalog_names()) {
      names += names.empty() ? n : ", " + n;
   }

   SolveArgs sa;
   auto* solve = app.add_subcommand("solve", "Solve one catalog problem");
   solve->add_option("--problem", sa.problem, "Problem name: " + names)->required();
   solve->add_option("--dim", sa.dim, "Problem size (0 = problem default)");
   solve->add_option("--orders", sa.orders, "Extrapolation order schedule")->capture_default_str();
   solve->add_option("--step", sa.step, "Step length: abs, bb1, bb2, rv")->capture_default_str();
   solve->add_option("--tol", sa.tol, "Convergence tolerance (default per problem)");
   solve->add_option("--norm", sa.norm, "Convergence norm: inf or two (default per problem)");
   solve->add_option("--sigma-min", sa.sigma_min, "Lower bound on the step length");
   solve->add_flag("--stabilize", sa.stabilize, "One plain map before every cycle");
   solve->add_option("--bounds", sa.bounds, "Uniform box lo,hi (use inf/-inf for open sides)");
   solve->add_option("--omega", sa.omega, "Bound buffer in (0,1)");
   solve->add_option("--seed", sa.seed, "Seed for problem data and start point");
   solve->add_option("--draw", sa.draw, "Draw index under the seed");
   solve->add_option("--max-maps", sa.max_maps, "Map budget");
   solve->add_option("--trace", sa.trace, "Write the per-cycle trajectory to this CSV");

   BenchArgs ba;
   auto* bench = app.add_subcommand("bench", "Run algorithms over seeded problem draws");
   bench->add_option("--suite", ba.suite, "Problem name or 'all'")->capture_default_str();
   bench->add_option("--draws", ba.draws, "Draws per problem")->capture_default_str();
   bench->add_option("--seed", ba.seed, "Base seed")->capture_default_str();
   bench->add_option("--timeout", ba.timeout, "Per-run time limit in seconds")->capture_default_str();
   bench->add_option("--out", ba.out, "Results file")->capture_default_str();
   bench->add_option("--format", ba.format, "csv or json (default from the file extension)");
   bench->add_option("--algorithms", ba.algorithms, "acx-<orders>, plain, sd, bb")->delimiter(',');
   bench->add_option("--dim", ba.dim, "Problem size for every problem (0 = defaults)");
   bench->add_option("--repetitions", ba.repetitions, "Maximum timed repetitions of short runs")
       ->capture_default_str();
   bench->add_flag("--parallel", ba.parallel, "Run (problem, draw) cells on worker threads");

   ProfileArgs pa;
   auto* profile = app.add_subcommand("profile", "Filter results and compute performance profiles");
   profile->add_option("--in", pa.in, "Results file (csv or json)")->required();
   profile->add_option("--out", pa.out, "Profile CSV")->capture_default_str();
   profile->add_option("--tau-max", pa.tau_max, "Largest time ratio")->capture_default_str();
   profile->add_option("--points", pa.points, "Grid points")->capture_default_str();
   profile->add_option("--crit-tol", pa.crit_tol, "Objective discrepancy tolerance")
       ->capture_default_str();

   try {
      app.parse(argc, argv);
   } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : kConfigError;
   }

   try {
      if (*solve) {
         return run_solve(sa);
      }
      if (*bench) {
         return run_bench(ba);
      }
      return run_profile(pa);
   } catch (const acx::ConfigError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return kConfigError;
   } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kSolverFailure;
   }
}
