#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace fountain {

enum class ErrorCode {
  kInvalidArgument,
  // graph store
  kEmptyLabels,
  kUpsertConflict,
  kDanglingEndpoint,
  kUnknownNode,
  kIoError,
  kFormatVersionMismatch,
  kCorruptRecord,
  // query language
  kSyntaxError,
  kUnboundVariable,
  kTooManyHops,
  kMissingParam,
  // ingestion
  kMissingParent,
  kCycleDetected,
  kDuplicatePartId,
  kMalformedRow,
  kUnknownPart,
  kDuplicateClaimId,
  // embedding
  kProviderUnavailable,
  kDimensionMismatch,
  // linker / explain
  kPartNotFound,
  kAmbiguousPart,
  kNotAFailureMode,
  // evaluation
  kUnknownPairId,
  kUnknownDeviation,
  // service
  kBusy,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library. `details` carries machine-readable
// context (offsets, line numbers, suggestion lists) that the HTTP layer
// forwards verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        nlohmann::json details = nullptr)
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  nlohmann::json details_;
};

}  // namespace fountain
