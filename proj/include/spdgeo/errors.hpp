#ifndef SPDGEO_ERRORS_HPP
#define SPDGEO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spdgeo {

/// Malformed inputs: non-finite entries, dimension mismatches, bad arguments.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs outside the mathematical domain of an operation (non-PD, negative
/// eigenvalue beyond tolerance, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Results that would overflow or degenerate in double precision.
class RangeError : public std::range_error {
public:
  using std::range_error::range_error;
};

/// Rank deficiency detected where full rank is required.
class DegeneracyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An iterative procedure did not reach its tolerance within its budget.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File or record could not be parsed.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace spdgeo

#endif
