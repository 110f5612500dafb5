#include "fountain/error.hpp"

namespace fountain {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyLabels: return "EmptyLabels";
    case ErrorCode::kUpsertConflict: return "UpsertConflict";
    case ErrorCode::kDanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::kCorruptRecord: return "CorruptRecord";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnboundVariable: return "UnboundVariable";
    case ErrorCode::kTooManyHops: return "TooManyHops";
    case ErrorCode::kMissingParam: return "MissingParam";
    case ErrorCode::kMissingParent: return "MissingParent";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kDuplicatePartId: return "DuplicatePartId";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kUnknownPart: return "UnknownPart";
    case ErrorCode::kDuplicateClaimId: return "DuplicateClaimId";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kPartNotFound: return "PartNotFound";
    case ErrorCode::kAmbiguousPart: return "AmbiguousPart";
    case ErrorCode::kNotAFailureMode: return "NotAFailureMode";
    case ErrorCode::kUnknownPairId: return "UnknownPairId";
    case ErrorCode::kUnknownDeviation: return "UnknownDeviation";
    case ErrorCode::kBusy: return "Busy";
  }
  return "Unknown";
}

}  // namespace fountain
