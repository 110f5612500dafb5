#include "fountain/eval/feedback_summary.hpp"

#include <algorithm>
#include <tuple>

#include "fountain/error.hpp"

namespace fountain::eval {

std::string_view to_string(Verdict v) { return v == Verdict::kUseful ? "useful" : "not_useful"; }

std::optional<Verdict> parse_verdict(std::string_view text) {
  if (text == "useful") return Verdict::kUseful;
  if (text == "not_useful") return Verdict::kNotUseful;
  return std::nullopt;
}

nlohmann::json to_json(const FeedbackRecord& r) {
  nlohmann::json j{{"feedback_id", r.feedback_id},
                   {"deviation_id", r.deviation_id},
                   {"item_ref", r.item_ref},
                   {"verdict", to_string(r.verdict)},
                   {"selected", r.selected},
                   {"timestamp_ms", r.timestamp_ms}};
  j["justification"] = r.justification ? nlohmann::json(*r.justification) : nlohmann::json(nullptr);
  j["user_ref"] = r.user_ref ? nlohmann::json(*r.user_ref) : nlohmann::json(nullptr);
  return j;
}

FeedbackRecord feedback_from_json(const nlohmann::json& j) {
  try {
    FeedbackRecord r;
    r.feedback_id = j.at("feedback_id").get<std::string>();
    r.deviation_id = j.at("deviation_id").get<std::uint64_t>();
    r.item_ref = j.at("item_ref").get<std::uint64_t>();
    const auto verdict = parse_verdict(j.at("verdict").get<std::string>());
    if (!verdict) throw Error(ErrorCode::kInvalidArgument, "unknown verdict");
    r.verdict = *verdict;
    r.selected = j.value("selected", false);
    if (j.contains("justification") && !j["justification"].is_null()) {
      r.justification = j["justification"].get<std::string>();
    }
    if (j.contains("user_ref") && !j["user_ref"].is_null()) r.user_ref = j["user_ref"].get<std::string>();
    r.timestamp_ms = j.value("timestamp_ms", std::int64_t{0});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("invalid feedback record: ") + e.what());
  }
}

nlohmann::json FeedbackSummary::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& u : users) {
    arr.push_back({{"user_ref", u.user_ref ? nlohmann::json(*u.user_ref) : nlohmann::json(nullptr)},
                   {"deviations_evaluated", u.deviations_evaluated},
                   {"all_useful", u.all_useful},
                   {"mixed", u.mixed},
                   {"none_useful", u.none_useful},
                   {"incomplete", u.incomplete}});
  }
  return {{"users", arr}, {"useful_items", useful_items}, {"not_useful_items", not_useful_items}};
}

FeedbackSummary summarize_feedback(const std::vector<FeedbackRecord>& records,
                                   const RecommendedItems& items) {
  using User = std::optional<std::string>;
  // user -> deviation -> item -> latest verdict
  std::map<User, std::map<std::uint64_t, std::map<std::uint64_t, Verdict>>> latest;
  for (const auto& r : records) {
    if (items.find(r.deviation_id) == items.end()) {
      throw Error(ErrorCode::kUnknownDeviation,
                  "feedback references unknown deviation " + std::to_string(r.deviation_id),
                  {{"deviation_id", r.deviation_id}});
    }
    latest[r.user_ref][r.deviation_id][r.item_ref] = r.verdict;
  }

  FeedbackSummary summary;
  for (const auto& [user, by_deviation] : latest) {
    UserSummary row;
    row.user_ref = user;
    for (const auto& [deviation, verdicts] : by_deviation) {
      for (const auto& [item, v] : verdicts) {
        (v == Verdict::kUseful ? summary.useful_items : summary.not_useful_items) += 1;
      }
      const auto& recommended = items.at(deviation);
      if (recommended.empty()) continue;
      std::size_t useful = 0;
      std::size_t rated = 0;
      for (const auto item : recommended) {
        const auto it = verdicts.find(item);
        if (it == verdicts.end()) continue;
        ++rated;
        if (it->second == Verdict::kUseful) ++useful;
      }
      if (rated < recommended.size()) {
        ++row.incomplete;
      } else if (useful == rated) {
        ++row.all_useful;
      } else if (useful == 0) {
        ++row.none_useful;
      } else {
        ++row.mixed;
      }
    }
    row.deviations_evaluated = row.all_useful + row.mixed + row.none_useful;
    summary.users.push_back(std::move(row));
  }
  return summary;
}

}  // namespace fountain::eval
