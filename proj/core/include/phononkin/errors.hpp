#pragma once

#include <stdexcept>
#include <string>

namespace phononkin {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Structural assumptions on the coupling sequence.
enum class Assumption { a1, a2, a3, a4 };

std::string to_string(Assumption item);

class AssumptionViolation : public Error {
public:
  AssumptionViolation(Assumption item, const std::string& detail)
      : Error("assumption (" + to_string(item) + ") violated: " + detail), item_(item) {}

  Assumption item() const noexcept { return item_; }

private:
  Assumption item_;
};

class DegenerateDispersion : public Error {
public:
  using Error::Error;
};

class NegativeCovariance : public Error {
public:
  using Error::Error;
};

class NonPositiveInitial : public Error {
public:
  using Error::Error;
};

class ResolutionError : public Error {
public:
  using Error::Error;
};

class InadmissibleG : public Error {
public:
  using Error::Error;
};

class EmptyWindow : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration; `field()` names the offending key.
class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& detail)
      : Error("config field '" + field + "': " + detail), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

}  // namespace phononkin
