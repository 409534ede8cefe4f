#include "acx/bench.hpp"
#include "acx/baselines.hpp"
#include "acx/descent.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

namespace acx {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v)
{
   std::sort(v.begin(), v.end());
   const std::size_t mid = v.size() / 2;
   return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

struct TimedRun {
   RunReport report;
   double ms = 0.0;
};

TimedRun timed(const ProblemInstance& instance, const AlgorithmSpec& algorithm, double timeout)
{
   const auto start = Clock::now();
   TimedRun out{run_algorithm(instance, algorithm, timeout), 0.0};
   out.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
   return out;
}

ProfileRow measure(const ProblemInstance& instance, std::size_t draw,
                   const AlgorithmSpec& algorithm, const BenchSpec& spec, bool warmup)
{
   if (warmup) {
      (void)run_algorithm(instance, algorithm, spec.timeout_seconds);
   }
   const TimedRun first = timed(instance, algorithm, spec.timeout_seconds);
   const RunReport& r = first.report;

   ProfileRow row;
   row.problem = instance.name;
   row.draw = draw;
   row.algorithm = algorithm.name;
   row.maps = r.maps;
   row.grad_evals = r.grad_evals;
   row.obj_evals = r.objective_evals;
   row.converged = r.converged;
   row.final_objective = r.final_objective ? *r.final_objective
                         : instance.objective ? instance.objective(r.x_final)
                                              : std::numeric_limits<double>::quiet_NaN();
   if (!r.converged) {
      row.time_ms = std::numeric_limits<double>::infinity();
      return row;
   }

   std::vector<double> times{first.ms};
   if (first.ms >= 100.0) {
      while (times.size() < 5) {
         times.push_back(timed(instance, algorithm, spec.timeout_seconds).ms);
      }
   } else {
      // Short runs repeat up to max_repetitions, within about a second.
      double spent = first.ms;
      while (times.size() < spec.max_repetitions && spent < 1000.0) {
         times.push_back(timed(instance, algorithm, spec.timeout_seconds).ms);
         spent += times.back();
      }
   }
   row.time_ms = median(std::move(times));
   return row;
}

std::vector<ProfileRow> run_cell(const ProblemSpec& problem, std::size_t draw, const BenchSpec& spec)
{
   const ProblemInstance instance = make_instance(problem, draw);
   const auto algorithms = spec.algorithms.empty() ? default_algorithms(instance) : spec.algorithms;
   std::vector<ProfileRow> rows;
   for (const auto& algorithm : algorithms) {
      rows.push_back(measure(instance, draw, algorithm, spec, spec.warmup && draw == 0));
   }
   return rows;
}

}  // namespace

AlgorithmSpec AlgorithmSpec::parse(const std::string& name)
{
   AlgorithmSpec spec;
   spec.name = name;
   if (name == "plain") {
      spec.kind = AlgorithmKind::Plain;
   } else if (name == "sd") {
      spec.kind = AlgorithmKind::SteepestDescent;
   } else if (name == "bb") {
      spec.kind = AlgorithmKind::BarzilaiBorwein;
   } else if (name.rfind("acx-", 0) == 0 && name.size() > 4) {
      std::vector<int> orders;
      for (char c : name.substr(4)) {
         if (c < '0' || c > '9') {
            throw ConfigError("bad algorithm name '" + name + "'");
         }
         orders.push_back(c - '0');
      }
      spec.kind = AlgorithmKind::Acx;
      spec.schedule = OrderSchedule(std::move(orders));
   } else {
      throw ConfigError("unknown algorithm '" + name + "' (expected acx-<orders>, plain, sd or bb)");
   }
   return spec;
}

std::vector<AlgorithmSpec> default_algorithms(const ProblemInstance& instance)
{
   std::vector<AlgorithmSpec> out{AlgorithmSpec::parse("acx-2"), AlgorithmSpec::parse("acx-32"),
                                  AlgorithmSpec::parse("acx-332")};
   if (instance.quadratic) {
      out.push_back(AlgorithmSpec::parse("sd"));
      out.push_back(AlgorithmSpec::parse("bb"));
   } else if (instance.kind == ProblemKind::Mapping) {
      out.push_back(AlgorithmSpec::parse("plain"));
   }
   return out;
}

void BenchSpec::validate() const
{
   if (draws == 0) {
      throw ConfigError("draws must be at least 1");
   }
   if (problems.empty()) {
      throw ConfigError("bench needs at least one problem");
   }
   for (const auto& p : problems) {
      if (!in_catalog(p.name)) {
         throw ConfigError("unknown problem '" + p.name + "'");
      }
   }
   std::set<std::string> names;
   for (const auto& a : algorithms) {
      if (!names.insert(a.name).second) {
         throw ConfigError("duplicate algorithm name '" + a.name + "'");
      }
   }
   if (!(timeout_seconds >= 0.0)) {
      throw ConfigError("timeout must be non-negative");
   }
   if (max_repetitions == 0) {
      throw ConfigError("max_repetitions must be positive");
   }
}

std::vector<ProblemSpec> suite_problems(const std::string& suite, std::uint64_t seed)
{
   std::vector<ProblemSpec> out;
   if (suite == "all") {
      for (const auto& name : catalog_names()) {
         out.push_back(ProblemSpec{name, 0, seed, {}, {}, {}, {}, {}});
      }
      return out;
   }
   if (!in_catalog(suite)) {
      throw ConfigError("unknown suite '" + suite + "'");
   }
   out.push_back(ProblemSpec{suite, 0, seed, {}, {}, {}, {}, {}});
   return out;
}

void ProfileTable::sort()
{
   std::sort(rows.begin(), rows.end(), [](const ProfileRow& a, const ProfileRow& b) {
      return std::tie(a.problem, a.draw, a.algorithm) < std::tie(b.problem, b.draw, b.algorithm);
   });
}

RunReport run_algorithm(const ProblemInstance& instance, const AlgorithmSpec& algorithm,
                        double timeout_seconds)
{
   AcxConfig cfg = instance.config;
   cfg.time_limit_seconds = timeout_seconds;
   BaselineOptions baseline{cfg.tol, cfg.norm, cfg.max_maps, timeout_seconds};

   switch (algorithm.kind) {
   case AlgorithmKind::Acx:
      if (!algorithm.schedule) {
         throw ConfigError("acx algorithm without an order schedule");
      }
      cfg.schedule = *algorithm.schedule;
      if (instance.kind == ProblemKind::Descent) {
         return minimize(instance.descent, instance.x0, cfg);
      }
      return solve(instance.mapping, instance.x0, cfg);
   case AlgorithmKind::Plain:
      if (instance.kind != ProblemKind::Mapping) {
         throw ConfigError("plain iteration needs a mapping problem");
      }
      return plain_iteration(instance.mapping, instance.x0, baseline);
   case AlgorithmKind::SteepestDescent:
   case AlgorithmKind::BarzilaiBorwein:
      if (!instance.quadratic) {
         throw ConfigError("'" + algorithm.name + "' is only defined for linquad");
      }
      return algorithm.kind == AlgorithmKind::SteepestDescent
                 ? steepest_descent(*instance.quadratic, instance.x0, baseline)
                 : barzilai_borwein(*instance.quadratic, instance.x0, baseline);
   }
   throw ConfigError("unknown algorithm kind");
}

ProfileTable run_suite(const BenchSpec& spec)
{
   spec.validate();
   std::vector<std::pair<const ProblemSpec*, std::size_t>> cells;
   for (const auto& p : spec.problems) {
      for (std::size_t d = 0; d < spec.draws; ++d) {
         cells.emplace_back(&p, d);
      }
   }

   ProfileTable table;
   if (!spec.parallel) {
      for (const auto& [problem, draw] : cells) {
         auto rows = run_cell(*problem, draw, spec);
         table.rows.insert(table.rows.end(), rows.begin(), rows.end());
      }
   } else {
      std::atomic<std::size_t> next{0};
      std::mutex guard;
      std::exception_ptr failure;
      auto worker = [&] {
         while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
               return;
            }
            try {
               auto rows = run_cell(*cells[i].first, cells[i].second, spec);
               const std::lock_guard lock(guard);
               table.rows.insert(table.rows.end(), rows.begin(), rows.end());
            } catch (...) {
               const std::lock_guard lock(guard);
               if (!failure) {
                  failure = std::current_exception();
               }
            }
         }
      };
      const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) {
         pool.emplace_back(worker);
      }
      for (auto& t : pool) {
         t.join();
      }
      if (failure) {
         std::rethrow_exception(failure);
      }
   }
   table.sort();
   return table;
}

double FilterResult::rejection_rate() const
{
   const std::size_t total = kept + rejected;
   return total == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(total);
}

FilterResult discrepancy_filter(const ProfileTable& table, double tol)
{
   std::map<std::pair<std::string, std::size_t>, double> lowest;
   std::map<std::pair<std::string, std::size_t>, bool> reject;
   for (const auto& row : table.rows) {
      const auto key = std::make_pair(row.problem, row.draw);
      auto [it, inserted] = lowest.try_emplace(key, row.final_objective);
      if (!inserted) {
         it->second = std::min(it->second, row.final_objective);
      }
      reject[key] = reject[key] || !std::isfinite(row.final_objective);
   }
   for (const auto& row : table.rows) {
      const auto key = std::make_pair(row.problem, row.draw);
      if (!(std::abs(row.final_objective - lowest[key]) < tol)) {
         reject[key] = true;
      }
   }

   FilterResult out;
   for (const auto& [key, dropped] : reject) {
      dropped ? ++out.rejected : ++out.kept;
   }
   for (const auto& row : table.rows) {
      if (!reject[std::make_pair(row.problem, row.draw)]) {
         out.table.rows.push_back(row);
      }
   }
   return out;
}

std::vector<double> default_tau_grid(double tau_max, std::size_t points)
{
   if (!(tau_max >= 1.0) || points == 0) {
      throw ConfigError("tau grid needs tau_max >= 1 and at least one point");
   }
   std::vector<double> grid(points);
   if (points == 1) {
      grid[0] = tau_max;
      return grid;
   }
   const double step = std::log(tau_max) / static_cast<double>(points - 1);
   for (std::size_t i = 0; i < points; ++i) {
      grid[i] = std::exp(step * static_cast<double>(i));
   }
   grid.front() = 1.0;
   grid.back() = tau_max;
   return grid;
}

std::vector<ProfileCurve> performance_profile(const ProfileTable& table,
                                              std::span<const double> tau_grid)
{
   for (double tau : tau_grid) {
      if (!(tau >= 1.0)) {
         throw ConfigError("performance profile ratios must be at least 1");
      }
   }
   std::map<std::pair<std::string, std::size_t>, double> fastest;
   std::set<std::string> algorithms;
   for (const auto& row : table.rows) {
      algorithms.insert(row.algorithm);
      const auto key = std::make_pair(row.problem, row.draw);
      auto [it, inserted] = fastest.try_emplace(key, std::numeric_limits<double>::infinity());
      if (row.converged && row.time_ms < it->second) {
         it->second = row.time_ms;
      }
   }
   const double pairs = static_cast<double>(fastest.size());

   std::vector<ProfileCurve> curves;
   for (const auto& name : algorithms) {
      ProfileCurve curve;
      curve.algorithm = name;
      curve.tau.assign(tau_grid.begin(), tau_grid.end());
      for (double tau : tau_grid) {
         std::size_t within = 0;
         for (const auto& row : table.rows) {
            if (row.algorithm != name || !row.converged) {
               continue;
            }
            const double best = fastest[std::make_pair(row.problem, row.draw)];
            if (row.time_ms <= tau * best) {
               ++within;
            }
         }
         curve.fraction.push_back(pairs > 0.0 ? static_cast<double>(within) / pairs : 0.0);
      }
      curves.push_back(std::move(curve));
   }
   return curves;
}

}  // namespace acx
