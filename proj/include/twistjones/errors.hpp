#pragma once

#include <stdexcept>
#include <string>

namespace twistjones {

// Exit codes used by the CLI map onto these categories.
enum class ErrorKind { Domain = 2, Accuracy = 3, Solver = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

// Argument lies outside the branch on which a formula is implemented.
class BranchError : public DomainError {
public:
  explicit BranchError(const std::string& what) : DomainError(what) {}
};

class DegeneracyError : public DomainError {
public:
  explicit DegeneracyError(const std::string& what) : DomainError(what) {}
};

class AccuracyError : public Error {
public:
  AccuracyError(const std::string& what, double achieved = 0.0)
      : Error(ErrorKind::Accuracy, what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

class PrecisionError : public AccuracyError {
public:
  PrecisionError(const std::string& what, unsigned suggested_bits)
      : AccuracyError(what), suggested_bits_(suggested_bits) {}
  unsigned suggested_bits() const noexcept { return suggested_bits_; }

private:
  unsigned suggested_bits_;
};

class SolverError : public Error {
public:
  SolverError(const std::string& what, std::string trace = {})
      : Error(ErrorKind::Solver, what), trace_(std::move(trace)) {}
  const std::string& trace() const noexcept { return trace_; }

private:
  std::string trace_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace twistjones
