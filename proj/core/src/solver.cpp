#include "acx/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

namespace acx {

namespace {

using Clock = std::chrono::steady_clock;

// Thrown inside the driver when the map budget or the time limit runs out.
struct Stop {
   Status status;
};

double clamp_coordinate(double previous, double proposal, double lower, double upper, double omega)
{
   if (std::isnan(proposal)) {
      return proposal;
   }
   double v = proposal;
   if (std::isfinite(upper)) {
      const double cap = omega * upper + (1.0 - omega) * previous;
      if (v > cap) {
         v = cap;
      }
      // Rounding in the blend can land exactly on the bound.
      if (v >= upper && previous < upper) {
         v = std::nextafter(upper, -std::numeric_limits<double>::infinity());
      }
   }
   if (std::isfinite(lower)) {
      const double floor = omega * lower + (1.0 - omega) * previous;
      if (v < floor) {
         v = floor;
      }
      if (v <= lower && previous > lower) {
         v = std::nextafter(lower, std::numeric_limits<double>::infinity());
      }
   }
   return v;
}

}  // namespace

BoxBounds::BoxBounds(Vector lower_, Vector upper_, double omega_)
    : lower(std::move(lower_)), upper(std::move(upper_)), omega(omega_)
{
}

BoxBounds BoxBounds::uniform(std::size_t dim, double lo, double hi, double omega)
{
   const auto n = static_cast<Eigen::Index>(dim);
   return BoxBounds(Vector::Constant(n, lo), Vector::Constant(n, hi), omega);
}

bool BoxBounds::strictly_contains(const Vector& x) const
{
   if (x.size() != lower.size() || x.size() != upper.size()) {
      return false;
   }
   for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (!(x[i] > lower[i] && x[i] < upper[i])) {
         return false;
      }
   }
   return true;
}

void BoxBounds::validate(std::size_t dim) const
{
   const auto n = static_cast<Eigen::Index>(dim);
   if (lower.size() != n || upper.size() != n) {
      throw ConfigError("bounds dimension does not match the problem");
   }
   if (!(omega > 0.0 && omega < 1.0)) {
      throw ConfigError("bound buffer omega must lie in (0, 1)");
   }
   for (Eigen::Index i = 0; i < n; ++i) {
      if (std::isnan(lower[i]) || std::isnan(upper[i]) || !(lower[i] < upper[i])) {
         throw ConfigError("bounds need lower < upper in every coordinate");
      }
   }
}

void AcxConfig::validate(std::size_t dim) const
{
   if (dim == 0) {
      throw ConfigError("problem dimension must be positive");
   }
   if (!(tol > 0.0) || !std::isfinite(tol)) {
      throw ConfigError("tolerance must be positive and finite");
   }
   if (max_maps == 0) {
      throw ConfigError("max_maps must be positive");
   }
   if (!(rho > 1.0) || !std::isfinite(rho)) {
      throw ConfigError("backtracking factor rho must exceed 1");
   }
   if (max_backtracks < 0) {
      throw ConfigError("max_backtracks must be non-negative");
   }
   if (sigma_min && (!(*sigma_min > 0.0) || !std::isfinite(*sigma_min))) {
      throw ConfigError("sigma_min must be positive and finite");
   }
   if (time_limit_seconds < 0.0 || std::isnan(time_limit_seconds)) {
      throw ConfigError("time limit must be non-negative");
   }
   if (bounds) {
      bounds->validate(dim);
   }
}

std::string to_string(Status status)
{
   switch (status) {
   case Status::Converged: return "converged";
   case Status::MaxMapsExceeded: return "max-maps-exceeded";
   case Status::TimedOut: return "timed-out";
   case Status::Unrecoverable: return "unrecoverable";
   }
   return "unknown";
}

double constrain_sigma(double sigma, const AcxConfig& cfg)
{
   return cfg.sigma_min ? std::max(*cfg.sigma_min, sigma) : sigma;
}

void apply_bounds_inplace(const Vector& previous, Vector& proposal, const BoxBounds& bounds)
{
   for (Eigen::Index i = 0; i < proposal.size(); ++i) {
      proposal[i] = clamp_coordinate(previous[i], proposal[i], bounds.lower[i], bounds.upper[i],
                                     bounds.omega);
   }
}

Vector apply_bounds(const Vector& previous, const Vector& proposal, const BoxBounds& bounds)
{
   Vector out = proposal;
   apply_bounds_inplace(previous, out, bounds);
   return out;
}

bool check_convergence(const Vector& delta, const AcxConfig& cfg)
{
   return norm(delta, cfg.norm) <= cfg.tol;
}

Vector stabilization_map(const Mapping& map, const Vector& x)
{
   Vector fx(x.size());
   map.apply(x, fx);
   if (!fx.allFinite()) {
      throw MappingFailure("stabilization map returned non-finite values");
   }
   return fx;
}

RunReport solve(const Mapping& map, const Vector& x0, const AcxConfig& cfg, CycleHooks* hooks)
{
   cfg.validate(map.dim);
   if (!map.apply) {
      throw ConfigError("mapping has no apply function");
   }
   if (static_cast<std::size_t>(x0.size()) != map.dim) {
      throw ConfigError("start point dimension does not match the mapping");
   }
   if (!x0.allFinite()) {
      throw ConfigError("start point must be finite");
   }
   if (cfg.bounds && !cfg.bounds->strictly_contains(x0)) {
      throw ConfigError("start point must lie strictly inside the bounds");
   }
   if (cfg.track_best_by == TrackBy::Objective && !map.objective) {
      throw ConfigError("tracking the best iterate by objective needs an objective");
   }

   CycleHooks default_hooks;
   CycleHooks& h = hooks ? *hooks : default_hooks;

   const auto start = Clock::now();
   const double inf = std::numeric_limits<double>::infinity();

   RunReport report;
   Vector x = x0;
   Vector best_x = x0;
   double best_residual = inf;
   double best_objective = inf;
   double last_residual = inf;
   int streak = 0;

   auto improve = [&](const Vector& point) {
      best_x = point;
      streak = 0;
      h.on_improvement();
   };

   auto apply_map = [&](const Vector& from, Vector& out) {
      if (report.maps >= cfg.max_maps) {
         throw Stop{Status::MaxMapsExceeded};
      }
      if (cfg.time_limit_seconds > 0.0) {
         const std::chrono::duration<double> elapsed = Clock::now() - start;
         if (elapsed.count() > cfg.time_limit_seconds) {
            throw Stop{Status::TimedOut};
         }
      }
      out.resize(from.size());
      ++report.maps;
      map.apply(from, out);
      if (!out.allFinite()) {
         throw MappingFailure("mapping returned non-finite values");
      }
   };

   // Residual of one map; true once converged at `pre`.
   auto after_map = [&](const Vector& pre, const Vector& image) {
      const double r = norm(image - pre, cfg.norm) * h.residual_scale();
      last_residual = r;
      if (cfg.track_best_by == TrackBy::Residual && r < best_residual) {
         best_residual = r;
         improve(pre);
      }
      if (r <= cfg.tol) {
         report.converged = true;
         report.status = Status::Converged;
         report.x_final = pre;
         report.final_residual = r;
         return true;
      }
      return false;
   };

   auto finish_early = [&](Status status) {
      report.converged = false;
      report.status = status;
      report.x_final = best_x;
      report.final_residual = cfg.track_best_by == TrackBy::Residual ? best_residual : last_residual;
      return report;
   };

   Vector image;
   Vector next;
   while (true) {
      try {
         if (cfg.track_best_by == TrackBy::Objective) {
            const double f = map.objective(x);
            ++report.objective_evals;
            if (f < best_objective) {
               best_objective = f;
               improve(x);
            }
         }

         TrajectoryPoint point;
         if (cfg.record_trajectory) {
            point.iteration = report.iterations;
            point.maps = report.maps;
            if (map.objective) {
               point.objective = map.objective(x);
            }
         }

         Vector base;
         if (cfg.stabilize) {
            apply_map(x, image);
            if (after_map(x, image)) {
               return report;
            }
            base = std::move(image);
         } else {
            base = x;
         }
         if (cfg.record_trajectory) {
            point.residual = last_residual;
         }

         const int scheduled = cfg.schedule.order_at(report.iterations);
         DifferenceStack stack(std::move(base), scheduled);
         for (int k = 0; k < stack.order(); ++k) {
            const Vector& from = k == 0 ? stack.base() : stack.image(k);
            apply_map(from, image);
            if (after_map(from, image)) {
               return report;
            }
            if (k == 0 && cfg.record_trajectory && !cfg.stabilize) {
               point.residual = last_residual;
            }
            stack.push(std::move(image));
            if (report.iterations == 0 && stack.order() == 3 && stack.count() == 2 &&
                h.adjusts_first_order()) {
               const Vector d1 = difference(stack, 1);
               const Vector d2 = difference(stack, 2);
               const double squared_sigma = std::abs(d2.dot(d1)) / d2.squaredNorm();
               if (std::isfinite(squared_sigma) && h.first_order(squared_sigma, 3) == 2) {
                  stack.truncate(2);
               }
            }
         }

         const StepLength step = step_length(stack, cfg.step_kind);
         double sigma = 0.0;
         if (step.degenerate) {
            sigma = h.on_degenerate();
         } else {
            sigma = constrain_sigma(step.wrong_sign ? 1.0 : step.sigma, cfg);
            h.on_step(sigma);
         }
         const double applied = sigma / std::pow(cfg.rho, streak);

         extrapolate(stack, applied, next);
         if (cfg.bounds) {
            apply_bounds_inplace(stack.base(), next, *cfg.bounds);
         }
         if (!next.allFinite()) {
            throw MappingFailure("extrapolation produced non-finite values");
         }

         if (cfg.record_trajectory) {
            point.sigma = applied;
            point.order = stack.order();
            report.trajectory.push_back(point);
         }
         std::swap(x, next);
         ++report.iterations;
      } catch (const Stop& stop) {
         return finish_early(stop.status);
      } catch (const MappingFailure&) {
         ++streak;
         ++report.backtrack_count;
         if (streak > cfg.max_backtracks) {
            return finish_early(Status::Unrecoverable);
         }
         x = best_x;
         h.on_backtrack(streak);
      }
   }
}

}  // namespace acx
