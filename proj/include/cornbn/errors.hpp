#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cornbn {

enum class ErrorKind {
  InvalidArgument,
  UnknownVariable,
  UnknownEdge,
  CycleError,
  DuplicateEdge,
  InvalidCpt,
  InvalidEvidence,
  InfeasibleConstraints,
  InvalidRange,
  EmptyMonth,
  DegenerateColumn,
  EmptyBin,
  EmptyData,
  EmptyFamily,
  ImpossibleEvidence,
  MissingBinMeans,
  BinOutOfRange,
  NonPositiveActual,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as this type; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Same kind, message prefixed with `context: `.
  Error with_context(std::string_view context) const;

 private:
  ErrorKind kind_;
};

}  // namespace cornbn
