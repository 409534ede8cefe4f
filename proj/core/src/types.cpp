#include "acx/random.hpp"
#include "acx/types.hpp"

#include <cmath>
#include <numbers>

namespace acx {

double norm(const Vector& v, Norm kind)
{
   if (v.size() == 0) {
      return 0.0;
   }
   return kind == Norm::Inf ? v.lpNorm<Eigen::Infinity>() : v.norm();
}

bool all_finite(const Vector& v)
{
   return v.allFinite();
}

Norm parse_norm(const std::string& text)
{
   if (text == "inf" || text == "infinity") {
      return Norm::Inf;
   }
   if (text == "two" || text == "2" || text == "l2") {
      return Norm::Two;
   }
   throw ConfigError("unknown norm '" + text + "' (expected inf or two)");
}

std::string to_string(Norm kind)
{
   return kind == Norm::Inf ? "inf" : "two";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
   std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
   z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
   return z ^ (z >> 31);
}

double Rng::normal()
{
   double u1 = uniform();
   while (u1 <= 0.0) {
      u1 = uniform();
   }
   const double u2 = uniform();
   return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace acx
