#ifndef ACX_EXTRAPOLATION_HPP
#define ACX_EXTRAPOLATION_HPP

#include "acx/types.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace acx {

/// Below this infinity-norm the highest-order difference carries no usable
/// information at double precision.
inline constexpr double kDegenerateDifferenceFloor = 1e-50;

enum class StepLengthKind {
   AbsP,  ///< |<D^p, D^{p-1}>| / ||D^p||^2 (default)
   BB1,   ///< ||D^{p-1}||^2 / <D^p, D^{p-1}>, magnitude
   BB2,   ///< <D^p, D^{p-1}> / ||D^p||^2, magnitude
   RV     ///< ||D^{p-1}|| / ||D^p||
};

StepLengthKind parse_step_kind(const std::string& text);
std::string to_string(StepLengthKind kind);

/// Repeating list of extrapolation orders, each 2 or 3.
class OrderSchedule {
public:
   explicit OrderSchedule(std::vector<int> orders);

   /// Parses "3,3,2" style lists.
   static OrderSchedule parse(const std::string& text);

   int order_at(std::size_t cycle) const { return orders_[cycle % orders_.size()]; }
   int max_order() const;
   int min_order() const;
   std::size_t size() const { return orders_.size(); }
   std::span<const int> orders() const { return orders_; }
   std::string to_string() const;

private:
   std::vector<int> orders_;
};

/// Base point x and its successive images F(x), F^2(x), F^3(x) for one
/// extrapolation cycle. Differences are never stored; they are formed
/// coordinate-wise from the images when needed.
class DifferenceStack {
public:
   DifferenceStack(Vector base, int order);

   /// Appends the next image F^{k+1}(x). Throws std::logic_error when full
   /// or when the dimension does not match.
   void push(Vector image);

   const Vector& base() const { return base_; }
   const Vector& image(int k) const;  ///< F^k(x), 1 <= k <= count()
   int order() const { return order_; }
   int count() const { return count_; }
   bool complete() const { return count_ == order_; }
   Eigen::Index dim() const { return base_.size(); }

   /// The i-th forward difference at coordinate j, 0 <= i <= count().
   double difference_at(int i, Eigen::Index j) const;

   /// Drops images beyond `order` and lowers the order; used when a cycle
   /// planned as cubic is finished as squared.
   void truncate(int order);

private:
   Vector base_;
   std::array<Vector, 3> images_;
   int order_;
   int count_ = 0;
};

/// Evaluates F p times starting from x. Throws MappingFailure when an
/// image contains NaN or infinity.
DifferenceStack build_stack(const std::function<void(const Vector&, Vector&)>& map,
                            const Vector& x, int order);

/// The i-th difference of the stack's base point (i = 0 gives the base).
Vector difference(const DifferenceStack& stack, int i);

struct StepLength {
   double sigma = 0.0;
   /// ||D^p||_inf fell below kDegenerateDifferenceFloor (or the ratio was
   /// not finite); sigma is meaningless.
   bool degenerate = false;
   /// BB1/BB2 only: the classical secant step came out positive.
   bool wrong_sign = false;
};

StepLength step_length(const DifferenceStack& stack, StepLengthKind kind = StepLengthKind::AbsP);

/// sum_{i=0}^{p} C(p,i) sigma^i D^i x.
Vector extrapolate(const DifferenceStack& stack, double sigma);
void extrapolate(const DifferenceStack& stack, double sigma, Vector& out);

/// (x+y)^p minus its decomposition
///   x^p + y^p - sum_{i=1}^{floor(p/2)} p (p-i-1)! (-xy)^i / i! * (x+y)^{p-2i} / (p-2i)!
/// Exact integer coefficients; p must be in [2, 12].
double binomial_decomposition_residual(double x, double y, int p);

}  // namespace acx

#endif  // ACX_EXTRAPOLATION_HPP
