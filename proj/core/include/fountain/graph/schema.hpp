#pragma once

#include <array>
#include <string_view>

#include "fountain/graph/graph.hpp"

// Instance labels and relationship types shared by every module, plus the
// concept layer that instances attach to through INSTANCE_OF.
namespace fountain::graph::schema {

inline constexpr std::string_view kConcept = "Concept";

inline constexpr std::string_view kPart = "Part";
inline constexpr std::string_view kProcess = "Process";
inline constexpr std::string_view kFailureMode = "FailureMode";
inline constexpr std::string_view kCause = "Cause";
inline constexpr std::string_view kEffect = "Effect";
inline constexpr std::string_view kDetection = "Detection";
inline constexpr std::string_view kPrevention = "Prevention";
inline constexpr std::string_view kDeviation = "Deviation";
inline constexpr std::string_view kWarrantyClaim = "WarrantyClaim";

inline constexpr std::array<std::string_view, 9> kInstanceLabels = {
    kPart, kProcess, kFailureMode, kCause, kEffect, kDetection, kPrevention, kDeviation,
    kWarrantyClaim};

inline constexpr std::string_view kHasChild = "HAS_CHILD";
inline constexpr std::string_view kHasFailureMode = "HAS_FAILURE_MODE";
inline constexpr std::string_view kHasCause = "HAS_CAUSE";
inline constexpr std::string_view kHasEffect = "HAS_EFFECT";
inline constexpr std::string_view kDetectedBy = "DETECTED_BY";
inline constexpr std::string_view kPreventedBy = "PREVENTED_BY";
inline constexpr std::string_view kInstanceOf = "INSTANCE_OF";
inline constexpr std::string_view kConcernsPart = "CONCERNS_PART";
inline constexpr std::string_view kClaimFor = "CLAIM_FOR";
inline constexpr std::string_view kSimilarTo = "SIMILAR_TO";
// Deviation -> FailureMode, one per returned recommendation (props: rank, score).
inline constexpr std::string_view kRecommends = "RECOMMENDS";

// Props used across the instance layer.
inline constexpr std::string_view kKeyProp = "key";      // globally unique upsert key
inline constexpr std::string_view kIdProp = "id";        // external identifier
inline constexpr std::string_view kNameProp = "name";
inline constexpr std::string_view kTextProp = "text";    // verbatim source text
inline constexpr std::string_view kNormProp = "norm";    // synonym-normalized text
inline constexpr std::string_view kScoreProp = "score";

// Creates (idempotently) the concept node for every instance label and the
// concept-level relationships between them. Returns the concept node for
// `label`.
NodeId ensure_concept(Graph& graph, std::string_view label);
void ensure_schema(Graph& graph);

// Creates or reuses an instance node keyed by `key` and links it to its
// concept. `created` reports whether the instance node is new.
Upserted<NodeId> upsert_instance(Graph& graph, std::string_view label, std::string key,
                                 PropertyMap props);

}  // namespace fountain::graph::schema
