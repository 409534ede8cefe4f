#include "acx/extrapolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace acx {

namespace {

constexpr std::array<std::array<double, 4>, 4> kBinomial{{
    {1, 0, 0, 0},
    {1, 1, 0, 0},
    {1, 2, 1, 0},
    {1, 3, 3, 1},
}};

// Forward differences D^0..D^count at one coordinate.
std::array<double, 4> differences_at(const DifferenceStack& stack, Eigen::Index j)
{
   std::array<double, 4> value{};
   value[0] = stack.base()[j];
   for (int k = 1; k <= stack.count(); ++k) {
      value[k] = stack.image(k)[j];
   }
   // In-place backward sweep turns (x, F x, F^2 x, F^3 x) into
   // (D^0, D^1, D^2, D^3) at x.
   std::array<double, 4> diff{};
   const int n = stack.count();
   for (int order = 0; order <= n; ++order) {
      diff[order] = value[0];
      for (int k = 0; k < n - order; ++k) {
         value[k] = value[k + 1] - value[k];
      }
   }
   return diff;
}

std::int64_t factorial(int n)
{
   std::int64_t f = 1;
   for (int i = 2; i <= n; ++i) {
      f *= i;
   }
   return f;
}

}  // namespace

StepLengthKind parse_step_kind(const std::string& text)
{
   if (text == "abs" || text == "absp") {
      return StepLengthKind::AbsP;
   }
   if (text == "bb1") {
      return StepLengthKind::BB1;
   }
   if (text == "bb2") {
      return StepLengthKind::BB2;
   }
   if (text == "rv") {
      return StepLengthKind::RV;
   }
   throw ConfigError("unknown step length '" + text + "' (expected abs, bb1, bb2 or rv)");
}

std::string to_string(StepLengthKind kind)
{
   switch (kind) {
   case StepLengthKind::AbsP: return "abs";
   case StepLengthKind::BB1: return "bb1";
   case StepLengthKind::BB2: return "bb2";
   case StepLengthKind::RV: return "rv";
   }
   return "abs";
}

OrderSchedule::OrderSchedule(std::vector<int> orders) : orders_(std::move(orders))
{
   if (orders_.empty()) {
      throw ConfigError("order schedule must not be empty");
   }
   for (int p : orders_) {
      if (p != 2 && p != 3) {
         throw ConfigError("extrapolation orders must be 2 or 3, got " + std::to_string(p));
      }
   }
}

OrderSchedule OrderSchedule::parse(const std::string& text)
{
   std::vector<int> orders;
   std::stringstream in(text);
   std::string item;
   while (std::getline(in, item, ',')) {
      try {
         std::size_t used = 0;
         orders.push_back(std::stoi(item, &used));
         if (used != item.size()) {
            throw std::invalid_argument(item);
         }
      } catch (const std::logic_error&) {
         throw ConfigError("bad order list '" + text + "'");
      }
   }
   return OrderSchedule(std::move(orders));
}

int OrderSchedule::max_order() const
{
   return *std::max_element(orders_.begin(), orders_.end());
}

int OrderSchedule::min_order() const
{
   return *std::min_element(orders_.begin(), orders_.end());
}

std::string OrderSchedule::to_string() const
{
   std::string s;
   for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (i > 0) {
         s += ',';
      }
      s += std::to_string(orders_[i]);
   }
   return s;
}

DifferenceStack::DifferenceStack(Vector base, int order) : base_(std::move(base)), order_(order)
{
   if (order_ != 2 && order_ != 3) {
      throw std::invalid_argument("difference stack order must be 2 or 3");
   }
   if (base_.size() == 0) {
      throw std::invalid_argument("difference stack needs a non-empty base point");
   }
}

void DifferenceStack::push(Vector image)
{
   if (count_ >= order_) {
      throw std::logic_error("difference stack already complete");
   }
   if (image.size() != base_.size()) {
      throw std::logic_error("image dimension does not match the base point");
   }
   images_[static_cast<std::size_t>(count_)] = std::move(image);
   ++count_;
}

const Vector& DifferenceStack::image(int k) const
{
   if (k < 1 || k > count_) {
      throw std::out_of_range("no such image in difference stack");
   }
   return images_[static_cast<std::size_t>(k - 1)];
}

double DifferenceStack::difference_at(int i, Eigen::Index j) const
{
   if (i < 0 || i > count_) {
      throw std::out_of_range("difference order exceeds the stored images");
   }
   return differences_at(*this, j)[static_cast<std::size_t>(i)];
}

void DifferenceStack::truncate(int order)
{
   if (order < 2 || order > order_ || count_ < order) {
      throw std::logic_error("cannot truncate difference stack to that order");
   }
   for (int k = order; k < count_; ++k) {
      images_[static_cast<std::size_t>(k)] = Vector();
   }
   order_ = order;
   count_ = order;
}

DifferenceStack build_stack(const std::function<void(const Vector&, Vector&)>& map,
                            const Vector& x, int order)
{
   DifferenceStack stack(x, order);
   for (int k = 0; k < order; ++k) {
      const Vector& from = k == 0 ? stack.base() : stack.image(k);
      Vector image(from.size());
      map(from, image);
      if (!image.allFinite()) {
         throw MappingFailure("mapping returned non-finite values");
      }
      stack.push(std::move(image));
   }
   return stack;
}

Vector difference(const DifferenceStack& stack, int i)
{
   if (i < 0 || i > stack.count()) {
      throw std::out_of_range("difference order exceeds the stored images");
   }
   Vector d(stack.dim());
   for (Eigen::Index j = 0; j < stack.dim(); ++j) {
      d[j] = differences_at(stack, j)[static_cast<std::size_t>(i)];
   }
   return d;
}

StepLength step_length(const DifferenceStack& stack, StepLengthKind kind)
{
   if (!stack.complete()) {
      throw std::logic_error("step length needs a complete difference stack");
   }
   const int p = stack.order();
   double inner = 0.0;     // <D^p, D^{p-1}>
   double top_sq = 0.0;    // ||D^p||^2
   double below_sq = 0.0;  // ||D^{p-1}||^2
   double top_inf = 0.0;
   for (Eigen::Index j = 0; j < stack.dim(); ++j) {
      const auto d = differences_at(stack, j);
      const double hi = d[static_cast<std::size_t>(p)];
      const double lo = d[static_cast<std::size_t>(p - 1)];
      inner += hi * lo;
      top_sq += hi * hi;
      below_sq += lo * lo;
      top_inf = std::max(top_inf, std::abs(hi));
   }

   StepLength result;
   if (top_inf < kDegenerateDifferenceFloor) {
      result.degenerate = true;
      return result;
   }
   switch (kind) {
   case StepLengthKind::AbsP:
      result.sigma = std::abs(inner) / top_sq;
      break;
   case StepLengthKind::BB2:
      result.sigma = std::abs(inner) / top_sq;
      result.wrong_sign = inner > 0.0;
      break;
   case StepLengthKind::BB1:
      result.sigma = below_sq / std::abs(inner);
      result.wrong_sign = inner > 0.0;
      break;
   case StepLengthKind::RV:
      result.sigma = std::sqrt(below_sq / top_sq);
      break;
   }
   if (!std::isfinite(result.sigma)) {
      result.sigma = 0.0;
      result.degenerate = true;
   }
   return result;
}

void extrapolate(const DifferenceStack& stack, double sigma, Vector& out)
{
   if (!stack.complete()) {
      throw std::logic_error("extrapolation needs a complete difference stack");
   }
   const int p = stack.order();
   std::array<double, 4> weight{};
   double power = 1.0;
   for (int i = 0; i <= p; ++i) {
      weight[static_cast<std::size_t>(i)] = kBinomial[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] * power;
      power *= sigma;
   }
   out.resize(stack.dim());
   for (Eigen::Index j = 0; j < stack.dim(); ++j) {
      const auto d = differences_at(stack, j);
      double acc = 0.0;
      for (int i = p; i >= 0; --i) {
         acc += weight[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i)];
      }
      out[j] = acc;
   }
}

Vector extrapolate(const DifferenceStack& stack, double sigma)
{
   Vector out;
   extrapolate(stack, sigma, out);
   return out;
}

double binomial_decomposition_residual(double x, double y, int p)
{
   if (p < 2 || p > 12) {
      throw std::invalid_argument("decomposition residual supports 2 <= p <= 12");
   }
   const double s = x + y;
   double rhs = std::pow(x, p) + std::pow(y, p);
   for (int i = 1; i <= p / 2; ++i) {
      // p (p-i-1)! / (i! (p-2i)!) is an integer; form it exactly.
      const std::int64_t num = static_cast<std::int64_t>(p) * factorial(p - i - 1);
      const std::int64_t den = factorial(i) * factorial(p - 2 * i);
      const double coefficient = static_cast<double>(num / den);
      rhs -= coefficient * std::pow(-x * y, i) * std::pow(s, p - 2 * i);
   }
   return std::pow(s, p) - rhs;
}

}  // namespace acx
