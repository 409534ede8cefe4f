#ifndef ACX_SOLVER_HPP
#define ACX_SOLVER_HPP

#include "acx/extrapolation.hpp"
#include "acx/types.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace acx {

/// A fixed-point map F: R^n -> R^n, optionally with an objective.
///
/// `apply` writes F(x) into its second argument (already sized to dim). It
/// may throw MappingFailure; non-finite output is detected by the solver.
struct Mapping {
   std::size_t dim = 0;
   std::function<void(const Vector& x, Vector& fx)> apply;
   std::function<double(const Vector& x)> objective;  ///< may be empty
};

/// Box S = prod (lower_i, upper_i) with an extrapolation buffer omega.
/// Infinite entries disable the corresponding clamp.
struct BoxBounds {
   Vector lower;
   Vector upper;
   double omega = 0.9;

   BoxBounds() = default;
   BoxBounds(Vector lower, Vector upper, double omega = 0.9);

   /// Same interval for every coordinate.
   static BoxBounds uniform(std::size_t dim, double lower, double upper, double omega = 0.9);

   bool strictly_contains(const Vector& x) const;
   void validate(std::size_t dim) const;
};

enum class TrackBy { Residual, Objective };

struct AcxConfig {
   OrderSchedule schedule{{3, 2}};
   StepLengthKind step_kind = StepLengthKind::AbsP;
   std::optional<double> sigma_min;  ///< lower clamp on sigma, e.g. 1 for EM maps
   bool stabilize = false;           ///< one plain map before every cycle
   std::optional<BoxBounds> bounds;
   double tol = 1e-7;
   Norm norm = Norm::Inf;
   std::size_t max_maps = 100000;
   double rho = 2.0;  ///< backtracking divides sigma (and alpha) by rho per failure
   TrackBy track_best_by = TrackBy::Residual;
   int max_backtracks = 30;
   bool record_trajectory = false;
   double time_limit_seconds = 0.0;  ///< 0 disables the wall-clock limit

   void validate(std::size_t dim) const;
};

enum class Status { Converged, MaxMapsExceeded, TimedOut, Unrecoverable };

std::string to_string(Status status);

struct TrajectoryPoint {
   std::size_t iteration = 0;
   std::size_t maps = 0;  ///< maps spent before the cycle started
   double residual = 0.0;
   std::optional<double> objective;
   double sigma = 0.0;  ///< step length applied in the cycle (0 if it failed)
   int order = 0;
};

struct RunReport {
   Vector x_final;
   bool converged = false;
   Status status = Status::MaxMapsExceeded;
   std::size_t maps = 0;
   std::size_t objective_evals = 0;
   std::size_t grad_evals = 0;
   std::size_t iterations = 0;
   double final_residual = 0.0;
   std::optional<double> final_objective;
   std::size_t backtrack_count = 0;
   std::vector<TrajectoryPoint> trajectory;
};

/// Extension points the gradient-descent adapter uses to steer the driver.
/// The default implementation gives plain mapping acceleration.
class CycleHooks {
public:
   virtual ~CycleHooks() = default;

   /// Multiplies ||F(x) - x|| before convergence and best-iterate checks.
   virtual double residual_scale() const { return 1.0; }

   /// Called after every completed extrapolation with the constrained sigma.
   virtual void on_step(double sigma) { (void)sigma; }

   /// ||D^p||_inf under the floor; returns the sigma to use.
   virtual double on_degenerate() { return 1.0; }

   /// A strictly better iterate was recorded.
   virtual void on_improvement() {}

   /// Restarting from the best iterate; `streak` failures since the last improvement.
   virtual void on_backtrack(int streak) { (void)streak; }

   /// When true, the first cycle of a schedule starting with a cubic order
   /// asks first_order() after its second map.
   virtual bool adjusts_first_order() const { return false; }
   virtual int first_order(double squared_sigma, int scheduled) const
   {
      (void)squared_sigma;
      return scheduled;
   }
};

/// max(sigma_min, sigma) when the constraint is set.
double constrain_sigma(double sigma, const AcxConfig& cfg);

/// Per-coordinate clamp keeping the proposal within a fraction omega of the
/// remaining distance to each bound. The result is strictly inside the box
/// whenever `previous` is.
Vector apply_bounds(const Vector& previous, const Vector& proposal, const BoxBounds& bounds);
void apply_bounds_inplace(const Vector& previous, Vector& proposal, const BoxBounds& bounds);

/// ||delta|| <= cfg.tol in cfg.norm.
bool check_convergence(const Vector& delta, const AcxConfig& cfg);

/// One stabilization map; counted by the caller as a regular map.
Vector stabilization_map(const Mapping& map, const Vector& x);

/// Alternating cyclic extrapolation of `map` from x0.
///
/// Each cycle maps p = cfg.schedule.order_at(k) times, checking convergence
/// after every map, then extrapolates with the constrained step length.
/// Non-finite images or extrapolations restart the run from the best
/// iterate with sigma divided by rho^t (t = failures since the last
/// improvement). The reported x_final is the converged point or, if the
/// run stops early, the best iterate seen.
RunReport solve(const Mapping& map, const Vector& x0, const AcxConfig& cfg,
                CycleHooks* hooks = nullptr);

}  // namespace acx

#endif  // ACX_SOLVER_HPP
