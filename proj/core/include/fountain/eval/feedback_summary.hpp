#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace fountain::eval {

enum class Verdict { kUseful, kNotUseful };

std::string_view to_string(Verdict v);
// "useful" | "not_useful"; nullopt otherwise.
std::optional<Verdict> parse_verdict(std::string_view text);

struct FeedbackRecord {
  std::string feedback_id;
  std::uint64_t deviation_id = 0;  // graph node ids
  std::uint64_t item_ref = 0;
  Verdict verdict = Verdict::kUseful;
  bool selected = false;
  std::optional<std::string> justification;
  std::optional<std::string> user_ref;
  std::int64_t timestamp_ms = 0;

  bool operator==(const FeedbackRecord&) const = default;
};

nlohmann::json to_json(const FeedbackRecord& r);
// Throws kInvalidArgument on missing fields or an unknown verdict.
FeedbackRecord feedback_from_json(const nlohmann::json& j);

struct UserSummary {
  std::optional<std::string> user_ref;  // nullopt is the anonymous bucket
  std::size_t deviations_evaluated = 0;
  std::size_t all_useful = 0;
  std::size_t mixed = 0;
  std::size_t none_useful = 0;
  // Deviations where this user left some recommended items unrated.
  std::size_t incomplete = 0;
  bool operator==(const UserSummary&) const = default;
};

struct FeedbackSummary {
  std::vector<UserSummary> users;  // anonymous bucket first, then by user_ref
  std::size_t useful_items = 0;
  std::size_t not_useful_items = 0;
  nlohmann::json to_json() const;
};

// Recommended items (failure and claim node ids) per deviation node id.
using RecommendedItems = std::map<std::uint64_t, std::vector<std::uint64_t>>;

// Latest record (log order) wins per (deviation, item, user_ref). A deviation
// counts for a user once every recommended item has a verdict from that user:
// all_useful, none_useful or mixed. Item tallies count the latest verdicts.
// Throws kUnknownDeviation for a record whose deviation is not in `items`.
FeedbackSummary summarize_feedback(const std::vector<FeedbackRecord>& records,
                                   const RecommendedItems& items);

}  // namespace fountain::eval
