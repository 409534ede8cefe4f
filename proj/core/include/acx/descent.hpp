#ifndef ACX_DESCENT_HPP
#define ACX_DESCENT_HPP

#include "acx/solver.hpp"
#include "acx/types.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>

namespace acx {

struct DescentProblem {
   std::size_t dim = 0;
   std::function<double(const Vector& x)> objective;
   std::function<void(const Vector& x, Vector& grad)> gradient;
};

/// Direction in which the descent step reacts to sigma leaving the dead band.
enum class AlphaAdaptation {
   /// sigma < lower shrinks alpha, sigma > upper grows it. Since sigma scales
   /// like 1/alpha this pulls sigma back into the band.
   Restoring,
   /// sigma < lower grows alpha, sigma > upper shrinks it.
   Literal
};

struct AlphaPolicy {
   double c_ag = 0.25;
   double l_n = 2.0;
   double theta = 1.5;
   double sigma_lower = 1.0;
   double sigma_upper = 2.0;
   double alpha_cap = 1.0;        ///< cap used by the tiny-difference guard
   double alpha_floor = 1e-12;    ///< initial search gives up below this
   double alpha_ceiling = 1152921504606846976.0;  ///< 2^60
   bool squared_armijo = false;   ///< use ||g||^2 instead of ||g|| in the decrease test
   AlphaAdaptation adaptation = AlphaAdaptation::Restoring;

   void validate() const;
};

struct AlphaSearch {
   double alpha = 0.0;
   std::size_t objective_evals = 0;
   std::size_t grad_evals = 0;
};

/// Largest step on the grid alpha_base * theta^k that gives
///   (i)  f(x0 - a g) <= f(x0) - c_ag * a * ||g||_2   and
///   (ii) ||grad f(x0 - a g)||_2 <= l_n * ||g||_2.
/// alpha_base is the inverse of a secant curvature estimate along -g, so the
/// search usually settles within a few grid points. Throws NoAdmissibleStep
/// when nothing above alpha_floor qualifies, std::invalid_argument if g = 0.
AlphaSearch initial_alpha(const DescentProblem& problem, const Vector& x0,
                          const AlphaPolicy& policy = {});

double adapt_alpha(double alpha, double sigma, const AlphaPolicy& policy = {});

struct TinyDifferenceStep {
   double sigma = 1.0;
   double alpha = 0.0;
   int occurrences = 0;
};

/// sigma = 1, alpha = min(cap, 2^{1+t} alpha), t + 1.
TinyDifferenceStep tiny_difference_guard(double alpha, int occurrences,
                                         const AlphaPolicy& policy = {});

/// Order of the very first cycle given the squared step length measured on
/// its first two maps.
int first_cycle_order(double squared_sigma, const OrderSchedule& schedule);

/// F(x) = x - alpha * grad f(x), reading alpha through the shared cell on
/// every call. With bounds, each image is clamped relative to x.
Mapping descent_mapping(const DescentProblem& problem, std::shared_ptr<const double> alpha,
                        const std::optional<BoxBounds>& bounds = std::nullopt);
Mapping descent_mapping(const DescentProblem& problem, double alpha,
                        const std::optional<BoxBounds>& bounds = std::nullopt);

/// Adapter that owns the descent step size and feeds the solver's hooks.
class DescentAdapter final : public CycleHooks {
public:
   DescentAdapter(DescentProblem problem, double alpha0, AlphaPolicy policy, double rho,
                  std::optional<BoxBounds> bounds = std::nullopt);

   const Mapping& mapping() const { return mapping_; }
   double alpha() const { return *alpha_; }
   int tiny_occurrences() const { return tiny_occurrences_; }

   double residual_scale() const override { return 1.0 / *alpha_; }
   void on_step(double sigma) override;
   double on_degenerate() override;
   void on_improvement() override;
   void on_backtrack(int streak) override;
   bool adjusts_first_order() const override { return true; }
   int first_order(double squared_sigma, int scheduled) const override;

private:
   DescentProblem problem_;
   AlphaPolicy policy_;
   double rho_;
   std::shared_ptr<double> alpha_;
   double alpha_at_best_;
   int tiny_occurrences_ = 0;
   Mapping mapping_;
};

/// Gradient descent accelerated by alternating cyclic extrapolation.
///
/// Convergence is ||grad f||_inf <= tol (cfg.norm), measured as
/// ||F(x) - x|| / alpha so that box-clamped runs use the projected step.
/// grad_evals includes the initial step search; final_objective is filled
/// for reporting and is not counted in objective_evals.
RunReport minimize(const DescentProblem& problem, const Vector& x0, const AcxConfig& cfg,
                   const AlphaPolicy& policy = {});

}  // namespace acx

#endif  // ACX_DESCENT_HPP
