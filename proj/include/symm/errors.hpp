#ifndef SYMM_ERRORS_HPP
#define SYMM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace symm {

// Argument outside the mathematical domain of an operation.
// std::domain_error is used directly for that case.

/// Violated precondition that couples two inputs (misaligned cells, mismatched intervals).
class ContractError : public std::logic_error {
public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Iterative solver did not reach its tolerance within the iteration budget.
class SolverFailure : public std::runtime_error {
public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Operation requested on a geometry kind that does not support it.
class UnsupportedGeometry : public std::runtime_error {
public:
  explicit UnsupportedGeometry(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine that must always succeed on its documented range failed.
class InternalError : public std::runtime_error {
public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace symm

#endif
