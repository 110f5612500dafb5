#include "fountain/ingest/text.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include "fountain/error.hpp"
#include "fountain/ingest/csv.hpp"

namespace fountain::ingest {

namespace {

struct Decoded {
  std::uint32_t cp = 0;
  std::size_t length = 1;
  bool valid = false;
};

Decoded decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1, true};
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1, false};
  }
  if (i + len > s.size()) return {b0, 1, false};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {b0, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len, true};
}

void encode(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

void fold_code_point(std::string& out, std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') {
    out.push_back(static_cast<char>(cp + 0x20));
    return;
  }
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
    return;
  }
  std::uint32_t folded = cp;
  if (cp == 0x00DF) {
    out += "ss";
    return;
  } else if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) {
    folded = cp + 0x20;
  } else if (cp == 0x0130) {
    out.push_back('i');
    encode(out, 0x0307);
    return;
  } else if ((cp >= 0x0100 && cp <= 0x012F) || (cp >= 0x0132 && cp <= 0x0137) ||
             (cp >= 0x014A && cp <= 0x0177)) {
    folded = cp | 1U;
  } else if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E)) {
    folded = (cp % 2 == 1) ? cp + 1 : cp;
  } else if (cp == 0x0178) {
    folded = 0x00FF;
  } else if (cp == 0x017F) {
    folded = 's';
  } else if ((cp >= 0x0391 && cp <= 0x03A1) || (cp >= 0x03A3 && cp <= 0x03AB)) {
    folded = cp + 0x20;
  } else if (cp == 0x03C2) {
    folded = 0x03C3;
  } else if (cp == 0x0386) {
    folded = 0x03AC;
  } else if (cp >= 0x0388 && cp <= 0x038A) {
    folded = cp + 0x25;
  } else if (cp == 0x038C) {
    folded = 0x03CC;
  } else if (cp == 0x038E || cp == 0x038F) {
    folded = cp + 0x3F;
  } else if (cp >= 0x0410 && cp <= 0x042F) {
    folded = cp + 0x20;
  } else if (cp >= 0x0400 && cp <= 0x040F) {
    folded = cp + 0x50;
  }
  encode(out, folded);
}

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

std::string trim(std::string_view s) { return collapse_whitespace(s); }

}  // namespace

std::string casefold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode(text, i);
    if (!d.valid) {
      out.push_back(text[i]);
      i += 1;
      continue;
    }
    fold_code_point(out, d.cp);
    i += d.length;
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    std::size_t width = 0;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      width = 1;
    } else if (static_cast<unsigned char>(c) == 0xC2 && i + 1 < text.size() &&
               static_cast<unsigned char>(text[i + 1]) == 0xA0) {
      width = 2;
    }
    if (width > 0) {
      pending_space = !out.empty();
      i += width;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::string canonical_text(std::string_view text) { return collapse_whitespace(casefold(text)); }

SynonymMap::SynonymMap(std::vector<std::pair<std::string, std::string>> entries)
    : entries_(std::move(entries)) {
  std::set<std::string> folded_terms;
  for (auto& [term, canonical] : entries_) {
    term = trim(term);
    canonical = trim(canonical);
    if (term.empty() || canonical.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "synonym term and canonical must be non-empty");
    }
    if (!folded_terms.insert(casefold(term)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate synonym term '" + term + "'",
                  {{"term", term}});
    }
  }
  for (const auto& [term, canonical] : entries_) {
    if (folded_terms.count(casefold(canonical)) != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "canonical form '" + canonical + "' is itself a synonym term",
                  {{"term", term}, {"canonical", canonical}});
    }
    by_length_.emplace_back(casefold(term), canonical);
  }
  std::stable_sort(by_length_.begin(), by_length_.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
}

std::string SynonymMap::normalize(std::string_view text) const {
  if (by_length_.empty()) {
    return std::string(text);
  }
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const bool at_boundary = i == 0 || !is_word_byte(text[i - 1]);
    bool replaced = false;
    if (at_boundary && is_word_byte(text[i])) {
      for (const auto& [term, canonical] : by_length_) {
        // Fold the text incrementally until it covers the term.
        std::string folded;
        std::size_t j = i;
        while (folded.size() < term.size() && j < text.size()) {
          const Decoded d = decode(text, j);
          if (d.valid) {
            fold_code_point(folded, d.cp);
          } else {
            folded.push_back(text[j]);
          }
          j += d.length;
          if (term.compare(0, std::min(folded.size(), term.size()), folded, 0,
                           std::min(folded.size(), term.size())) != 0) {
            break;
          }
        }
        if (folded != term) continue;
        if (j < text.size() && is_word_byte(text[j])) continue;
        out += canonical;
        i = j;
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

std::string normalize_text(std::string_view text, const SynonymMap& synonyms) {
  return synonyms.normalize(text);
}

SynonymMap parse_synonyms(std::string_view csv_text) {
  static constexpr std::string_view kColumns[] = {"term", "canonical"};
  const CsvTable table(csv_text, kColumns);
  std::vector<std::pair<std::string, std::string>> entries;
  for (std::size_t r = 0; r < table.size(); ++r) {
    entries.emplace_back(table.get(r, "term"), table.get(r, "canonical"));
    try {
      SynonymMap check(entries);
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedRow,
                  "synonyms line " + std::to_string(table.row(r).line) + ": " + e.what(),
                  {{"line", table.row(r).line}});
    }
  }
  return SynonymMap(std::move(entries));
}

std::string render_synonyms(const SynonymMap& synonyms) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
    return out;
  };
  std::string out = "term,canonical\n";
  for (const auto& [term, canonical] : synonyms.entries()) {
    out += quote(term) + "," + quote(canonical) + "\n";
  }
  return out;
}

}  // namespace fountain::ingest
