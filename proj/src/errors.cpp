#include "sentivote/errors.hpp"

namespace sentivote {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::BadSchema: return "BadSchema";
    case ErrorKind::Io: return "Io";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::MissingSample: return "MissingSample";
    case ErrorKind::ExtraSample: return "ExtraSample";
    case ErrorKind::BadProbability: return "BadProbability";
    case ErrorKind::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DuplicateModelId: return "DuplicateModelId";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::EmptyBundle: return "EmptyBundle";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::AllZeroWeights: return "AllZeroWeights";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

static std::string compose(ErrorKind kind, const std::string& detail,
                           const std::string& where) {
  std::string out;
  if (!where.empty()) out += where + ": ";
  out += to_string(kind);
  if (!detail.empty()) out += ": " + detail;
  return out;
}

Error::Error(ErrorKind kind, std::string detail, std::string where)
    : std::runtime_error(compose(kind, detail, where)),
      kind_(kind),
      detail_(std::move(detail)),
      where_(std::move(where)) {}

}  // namespace sentivote
