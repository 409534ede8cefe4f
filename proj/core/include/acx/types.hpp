#ifndef ACX_TYPES_HPP
#define ACX_TYPES_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace acx {

/// Dense, contiguous, double-precision parameter vector.
using Vector = Eigen::VectorXd;

enum class Norm { Inf, Two };

double norm(const Vector& v, Norm kind);

/// True when every entry is finite (no NaN or infinity).
bool all_finite(const Vector& v);

Norm parse_norm(const std::string& text);
std::string to_string(Norm kind);

class Error : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};

/// A mapping or gradient produced non-finite output, or refused its input.
/// The solver treats it as a signal to backtrack.
class MappingFailure : public Error {
public:
   using Error::Error;
};

/// Input outside the domain of a problem's mapping (e.g. a negative Poisson mean).
class DomainError : public MappingFailure {
public:
   using MappingFailure::MappingFailure;
};

/// Invalid configuration or problem specification; raised before any work is done.
class ConfigError : public Error {
public:
   using Error::Error;
};

/// No step size on the search grid satisfied the initial-step conditions.
class NoAdmissibleStep : public Error {
public:
   using Error::Error;
};

}  // namespace acx

#endif  // ACX_TYPES_HPP
