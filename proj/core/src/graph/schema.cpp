#include "fountain/graph/schema.hpp"

#include <string>
#include <tuple>

namespace fountain::graph::schema {

namespace {

constexpr std::array<std::tuple<std::string_view, std::string_view, std::string_view>, 9>
    kConceptRelations = {{
        {kPart, kHasChild, kPart},
        {kPart, kHasFailureMode, kFailureMode},
        {kFailureMode, kHasCause, kCause},
        {kFailureMode, kHasEffect, kEffect},
        {kFailureMode, kDetectedBy, kDetection},
        {kFailureMode, kPreventedBy, kPrevention},
        {kDeviation, kConcernsPart, kPart},
        {kWarrantyClaim, kClaimFor, kPart},
        {kDeviation, kSimilarTo, kCause},
    }};

std::string concept_key(std::string_view label) { return "concept:" + std::string(label); }

}  // namespace

NodeId ensure_concept(Graph& graph, std::string_view label) {
  PropertyMap props{{std::string(kNameProp), std::string(label)},
                    {std::string(kKeyProp), concept_key(label)}};
  return graph.create_node(LabelSet{std::string(kConcept)}, std::move(props),
                           std::string(kKeyProp));
}

void ensure_schema(Graph& graph) {
  for (const auto label : kInstanceLabels) {
    ensure_concept(graph, label);
  }
  for (const auto& [from, type, to] : kConceptRelations) {
    graph.create_edge(std::string(type), ensure_concept(graph, from), ensure_concept(graph, to),
                      {}, true);
  }
}

Upserted<NodeId> upsert_instance(Graph& graph, std::string_view label, std::string key,
                                 PropertyMap props) {
  const NodeId concept_node = ensure_concept(graph, label);
  props[std::string(kKeyProp)] = std::move(key);
  auto result = graph.upsert_node(LabelSet{std::string(label)}, std::move(props),
                                  std::string(kKeyProp));
  if (result.created) {
    graph.create_edge(std::string(kInstanceOf), result.id, concept_node);
  }
  return result;
}

}  // namespace fountain::graph::schema
