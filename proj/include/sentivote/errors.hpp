#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sentivote {

enum class ErrorKind {
  UnknownLabel,
  BadSchema,
  Io,
  MalformedRow,
  DuplicateId,
  MissingSample,
  ExtraSample,
  BadProbability,
  WeightOutOfRange,
  ShapeMismatch,
  DuplicateModelId,
  LengthMismatch,
  LabelOutOfRange,
  EmptyInput,
  EmptyBundle,
  KTooLarge,
  AllZeroWeights,
  BadSpec,
  BadConfig,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type. `where` carries
// "file:line" context when the failure is tied to an input location.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string detail, std::string where = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::string where_;
};

}  // namespace sentivote
