#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fountain::eval {

struct Sentence {
  std::string id;
  std::string text;
};

struct SentenceGroup {
  std::string name;
  std::vector<Sentence> sentences;  // file order
};

// Named sentence lists with globally unique ids.
class SentenceGroupSet {
 public:
  SentenceGroupSet() = default;

  // CSV with columns group,id,sentence. Throws kMalformedRow on blank fields
  // or a repeated id.
  static SentenceGroupSet parse_csv(std::string_view csv_text);
  // Group1/Group2 and Group3/Group4 sentence tables shipped with the library.
  static const SentenceGroupSet& builtin();

  const std::vector<SentenceGroup>& groups() const { return groups_; }
  // Throws kInvalidArgument for an unknown group.
  const SentenceGroup& group(std::string_view name) const;
  const Sentence* find(std::string_view id) const;

 private:
  std::vector<SentenceGroup> groups_;
};

}  // namespace fountain::eval
