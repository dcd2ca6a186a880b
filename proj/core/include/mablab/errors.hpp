#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mablab {

/// Argument outside the mathematical domain of an operation (u not in (0,1),
/// arm index out of range, odd SLRT time, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A rule produced internally inconsistent output, e.g. sampling
/// probabilities that do not sum to one.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A sample mean was requested for an arm with no observations.
class UndefinedMeanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every repetition was censored or the input carried no rows.
class NoDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedFamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario configuration rejected; `path()` names the offending field,
/// e.g. `sampling.delta`.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::invalid_argument(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Raw CSV did not match the schema. Line numbers are 1-based and count
/// the header.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mablab
