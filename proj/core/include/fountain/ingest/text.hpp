#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fountain::ingest {

// Simple Unicode case folding over UTF-8: ASCII, Latin-1 Supplement, Latin
// Extended-A, Greek and Cyrillic capitals map to their lowercase forms and
// U+00DF folds to "ss". Other code points pass through; invalid UTF-8 bytes
// are copied unchanged.
std::string casefold(std::string_view text);

// Trims and collapses runs of whitespace (ASCII space, tab, CR, LF, VT, FF,
// and U+00A0) into a single ASCII space.
std::string collapse_whitespace(std::string_view text);

// casefold + collapse_whitespace; the text part of FMEA chain keys.
std::string canonical_text(std::string_view text);

// Domain term -> BOM name mapping applied to free text before matching.
class SynonymMap {
 public:
  SynonymMap() = default;
  // Throws Error(kInvalidArgument) when a term repeats (case-insensitively),
  // a term or canonical is blank, or a canonical form is itself a term.
  explicit SynonymMap(std::vector<std::pair<std::string, std::string>> entries);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Replaces every whole-word, case-insensitive occurrence of a term with its
  // canonical form in a single left-to-right pass; longer terms win when
  // several start at the same position. Replacement text is not rescanned.
  std::string normalize(std::string_view text) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  // (folded term, canonical) sorted by folded length descending.
  std::vector<std::pair<std::string, std::string>> by_length_;
};

std::string normalize_text(std::string_view text, const SynonymMap& synonyms);

// Parses the two-column `term,canonical` CSV. Errors are kMalformedRow with
// the offending line.
SynonymMap parse_synonyms(std::string_view csv_text);
std::string render_synonyms(const SynonymMap& synonyms);

}  // namespace fountain::ingest
