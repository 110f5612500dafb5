#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fountain/embed/provider.hpp"
#include "fountain/eval/sentences.hpp"

namespace fountain::eval {

struct IdPair {
  std::string first;
  std::string second;
  bool operator==(const IdPair&) const = default;
};

struct CheckSpec {
  std::string name;
  std::string row_group;
  std::string column_group;
  std::vector<IdPair> expected_high;
  std::vector<IdPair> expected_low;
  double delta = 0.15;
  double tau = 0.45;

  // {"name", "groups": [row, column], "delta"?, "tau"?, "expected_high":
  // [[a, b], ...], "expected_low": [...]}. Throws kInvalidArgument.
  static CheckSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  static const CheckSpec& builtin_suitability();
  static const CheckSpec& builtin_negation();
};

struct PairResult {
  IdPair pair;
  bool expected_high = false;
  double similarity = 0.0;
  // High pairs must reach tau, low pairs must stay below it.
  bool within_threshold = false;
};

struct SuitabilityReport {
  std::string check;
  std::string provider;
  std::string fingerprint;
  std::vector<std::string> row_ids;
  std::vector<std::string> column_ids;
  std::vector<std::vector<double>> matrix;  // row_ids x column_ids
  std::vector<PairResult> pairs;            // expected_high first, then expected_low
  std::optional<double> min_high;
  std::optional<double> max_low;
  std::optional<double> separation;         // min_high - max_low when both exist
  double delta = 0.0;
  double tau = 0.0;
  bool pass = false;

  // High pairs below tau.
  std::vector<IdPair> flagged_high() const;
  nlohmann::json to_json() const;
  // Aligned cosine matrix followed by one line per checked pair.
  std::string to_text() const;
};

// pass <=> separation >= delta and min_high >= tau and max_low < tau, where a
// missing side makes its conditions vacuous.
bool gate_passes(std::optional<double> min_high, std::optional<double> max_low, double delta,
                 double tau);

// Throws kUnknownPairId when a pair names an id outside the set, and
// propagates provider errors.
SuitabilityReport run_suitability(const embed::EmbeddingProvider& provider,
                                  const SentenceGroupSet& groups, const CheckSpec& spec);
// The built-in negation check over the built-in Group3/Group4.
SuitabilityReport run_negation(const embed::EmbeddingProvider& provider);

}  // namespace fountain::eval
