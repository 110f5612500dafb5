#include "fountain/eval/sentences.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "fountain/error.hpp"
#include "fountain/eval/builtin_fixtures.hpp"
#include "fountain/ingest/csv.hpp"
#include "fountain/ingest/text.hpp"

namespace fountain::eval {

SentenceGroupSet SentenceGroupSet::parse_csv(std::string_view csv_text) {
  static constexpr std::string_view kColumns[] = {"group", "id", "sentence"};
  const ingest::CsvTable table(csv_text, kColumns);
  SentenceGroupSet set;
  std::set<std::string> ids;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const std::size_t line = table.row(r).line;
    const std::string group = ingest::collapse_whitespace(table.get(r, "group"));
    const std::string id = ingest::collapse_whitespace(table.get(r, "id"));
    const std::string text = ingest::collapse_whitespace(table.get(r, "sentence"));
    if (group.empty() || id.empty() || text.empty()) {
      throw Error(ErrorCode::kMalformedRow, "line " + std::to_string(line) + ": blank field",
                  {{"line", line}});
    }
    if (!ids.insert(id).second) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line) + ": duplicate sentence id '" + id + "'",
                  {{"line", line}, {"id", id}});
    }
    auto it = std::find_if(set.groups_.begin(), set.groups_.end(),
                           [&](const SentenceGroup& g) { return g.name == group; });
    if (it == set.groups_.end()) {
      set.groups_.push_back({group, {}});
      it = std::prev(set.groups_.end());
    }
    it->sentences.push_back({id, text});
  }
  return set;
}

const SentenceGroupSet& SentenceGroupSet::builtin() {
  static const SentenceGroupSet set = parse_csv(builtin::sentence_groups_csv());
  return set;
}

const SentenceGroup& SentenceGroupSet::group(std::string_view name) const {
  for (const auto& g : groups_) {
    if (g.name == name) return g;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown sentence group '" + std::string(name) + "'",
              {{"group", std::string(name)}});
}

const Sentence* SentenceGroupSet::find(std::string_view id) const {
  for (const auto& g : groups_) {
    for (const auto& s : g.sentences) {
      if (s.id == id) return &s;
    }
  }
  return nullptr;
}

}  // namespace fountain::eval
