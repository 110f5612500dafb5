#include "fountain/ingest/loaders.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "fountain/error.hpp"
#include "fountain/graph/schema.hpp"
#include "fountain/ingest/csv.hpp"

namespace fountain::ingest {

namespace schema = graph::schema;
using graph::Graph;
using graph::NodeId;
using graph::PropertyMap;

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kMalformedRow, "line " + std::to_string(line) + ": " + what,
              {{"line", line}});
}

std::string field(const CsvTable& table, std::size_t row, std::string_view column) {
  return collapse_whitespace(table.get(row, column));
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

bool valid_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  const auto year = parse_int(s.substr(0, 4));
  const auto month = parse_int(s.substr(5, 2));
  const auto day = parse_int(s.substr(8, 2));
  if (!year || !month || !day || *month < 1 || *month > 12 || *day < 1) return false;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (*year % 4 == 0 && *year % 100 != 0) || *year % 400 == 0;
  const int max_day = kDays[*month - 1] + ((*month == 2 && leap) ? 1 : 0);
  return *day <= max_day;
}

std::string json_key(std::string_view prefix, std::initializer_list<std::string_view> parts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto p : parts) arr.push_back(std::string(p));
  return std::string(prefix) + arr.dump();
}

NodeId require_part(Graph& graph, const std::string& part_id, std::size_t line,
                    const LoadOptions& options) {
  if (auto found = find_part(graph, part_id)) return *found;
  if (!options.allow_orphans) {
    throw Error(ErrorCode::kUnknownPart, "line " + std::to_string(line) + ": unknown part '" +
                                             part_id + "'",
                {{"part_id", part_id}, {"line", line}});
  }
  PropertyMap props{{std::string(schema::kIdProp), part_id},
                    {std::string(schema::kNameProp), part_id},
                    {"placeholder", true}};
  return schema::upsert_instance(graph, schema::kPart, part_key(part_id), std::move(props)).id;
}

PropertyMap text_props(const std::string& raw, const SynonymMap& synonyms) {
  return {{std::string(schema::kTextProp), raw},
          {std::string(schema::kNormProp), normalize_text(raw, synonyms)}};
}

}  // namespace

std::string part_key(std::string_view part_id) { return "part:" + std::string(part_id); }
std::string claim_key(std::string_view claim_id) { return "claim:" + std::string(claim_id); }

std::string chain_key(char fmea_type, std::string_view part_id, std::string_view failure_mode,
                      std::string_view cause) {
  const std::string type(1, fmea_type);
  return json_key("chain", {type, part_id, canonical_text(failure_mode), canonical_text(cause)});
}

std::optional<NodeId> find_part(const Graph& graph, std::string_view part_id) {
  for (const NodeId id : graph.find_by_property(std::string(schema::kKeyProp),
                                                graph::PropertyValue{part_key(part_id)})) {
    if (graph.node(id).has_label(schema::kPart)) return id;
  }
  return std::nullopt;
}

BomLoadResult load_bom(Graph& graph, std::string_view csv_text) {
  static constexpr std::string_view kColumns[] = {"part_id", "parent_id", "part_name", "level",
                                                  "quantity"};
  const CsvTable table(csv_text, kColumns);

  struct Row {
    std::string id;
    std::string parent;
    std::string name;
    std::int64_t level = 0;
    std::int64_t quantity = 1;
    std::size_t line = 0;
  };
  std::vector<Row> rows;
  std::unordered_map<std::string, std::size_t> index;
  std::optional<std::size_t> root;

  for (std::size_t r = 0; r < table.size(); ++r) {
    const std::size_t line = table.row(r).line;
    Row row;
    row.line = line;
    row.id = field(table, r, "part_id");
    row.parent = field(table, r, "parent_id");
    row.name = field(table, r, "part_name");
    if (row.id.empty()) malformed(line, "empty part_id");
    if (row.name.empty()) malformed(line, "empty part_name");
    const auto level = parse_int(field(table, r, "level"));
    if (!level || *level < 0) malformed(line, "level must be a non-negative integer");
    const auto quantity = parse_int(field(table, r, "quantity"));
    if (!quantity || *quantity < 1) malformed(line, "quantity must be a positive integer");
    row.level = *level;
    row.quantity = *quantity;
    if (!index.emplace(row.id, rows.size()).second) {
      throw Error(ErrorCode::kDuplicatePartId,
                  "line " + std::to_string(line) + ": duplicate part_id '" + row.id + "'",
                  {{"part_id", row.id}, {"line", line}});
    }
    if (row.parent.empty()) {
      if (root) malformed(line, "more than one root row (empty parent_id)");
      root = rows.size();
    }
    rows.push_back(std::move(row));
  }
  if (!root) malformed(table.size() == 0 ? 1 : table.row(0).line, "no root row (empty parent_id)");

  std::vector<std::vector<std::size_t>> children(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].parent.empty()) continue;
    const auto it = index.find(rows[i].parent);
    if (it == index.end()) {
      throw Error(ErrorCode::kMissingParent,
                  "line " + std::to_string(rows[i].line) + ": parent '" + rows[i].parent +
                      "' of part '" + rows[i].id + "' is not in the file",
                  {{"part_id", rows[i].id}, {"parent_id", rows[i].parent}, {"line", rows[i].line}});
    }
    children[it->second].push_back(i);
  }

  // Everything must hang off the root; leftovers sit on a parent cycle.
  std::vector<bool> reached(rows.size(), false);
  std::vector<std::size_t> stack{*root};
  reached[*root] = true;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (const std::size_t c : children[cur]) {
      if (!reached[c]) {
        reached[c] = true;
        stack.push_back(c);
      }
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (reached[i]) continue;
    std::vector<std::string> path;
    std::set<std::size_t> seen;
    std::size_t cur = i;
    while (seen.insert(cur).second) {
      path.push_back(rows[cur].id);
      cur = index.at(rows[cur].parent);
    }
    // Trim the lead-in so the path starts at the repeated node.
    const auto start = std::find(path.begin(), path.end(), rows[cur].id);
    std::vector<std::string> cycle(start, path.end());
    cycle.push_back(rows[cur].id);
    std::string rendered;
    for (const auto& id : cycle) rendered += (rendered.empty() ? "" : " -> ") + id;
    throw Error(ErrorCode::kCycleDetected, "BOM parent cycle: " + rendered, {{"path", cycle}});
  }

  return graph.apply_batch([&](Graph& g) {
    schema::ensure_schema(g);
    BomLoadResult result;
    std::vector<NodeId> ids(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      PropertyMap props{{std::string(schema::kIdProp), rows[i].id},
                        {std::string(schema::kNameProp), rows[i].name},
                        {"level", rows[i].level},
                        {"quantity", rows[i].quantity}};
      const auto up = schema::upsert_instance(g, schema::kPart, part_key(rows[i].id), std::move(props));
      ids[i] = up.id;
      if (up.created) ++result.parts_created;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].parent.empty()) continue;
      const NodeId parent = ids[index.at(rows[i].parent)];
      const auto existing = g.find_edge(schema::kHasChild, parent, ids[i]);
      if (existing) continue;
      // The file itself is acyclic; guard against closing a loop through
      // parts loaded by an earlier BOM.
      const auto below = g.descendants(ids[i], schema::kHasChild);
      if (ids[i] == parent || std::binary_search(below.begin(), below.end(), parent)) {
        throw Error(ErrorCode::kCycleDetected,
                    "adding " + rows[i].parent + " -> " + rows[i].id +
                        " closes a cycle with an already loaded BOM",
                    {{"path", {rows[i].id, rows[i].parent, rows[i].id}}});
      }
      g.create_edge(std::string(schema::kHasChild), parent, ids[i],
                    {{"quantity", rows[i].quantity}});
      ++result.edges_created;
    }
    result.root = ids[*root];
    return result;
  });
}

FmeaLoadResult load_fmea(Graph& graph, std::string_view csv_text, const SynonymMap& synonyms,
                         LoadOptions options) {
  static constexpr std::string_view kColumns[] = {"fmea_id", "fmea_type", "part_id",
                                                  "failure_mode", "cause", "effect"};
  const CsvTable table(csv_text, kColumns);

  struct Row {
    std::string fmea_id;
    char type = 'D';
    std::string part_id;
    std::string failure_mode, cause, effect, detection, prevention;
    std::size_t line = 0;
  };
  std::vector<Row> rows;
  rows.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    Row row;
    row.line = table.row(r).line;
    row.fmea_id = field(table, r, "fmea_id");
    const std::string type = field(table, r, "fmea_type");
    if (type != "D" && type != "P" && type != "d" && type != "p") {
      malformed(row.line, "fmea_type must be D or P, got '" + type + "'");
    }
    row.type = static_cast<char>(std::toupper(static_cast<unsigned char>(type[0])));
    row.part_id = field(table, r, "part_id");
    if (row.part_id.empty()) malformed(row.line, "empty part_id");
    row.failure_mode = field(table, r, "failure_mode");
    row.cause = field(table, r, "cause");
    if (row.failure_mode.empty()) malformed(row.line, "empty failure_mode");
    if (row.cause.empty()) malformed(row.line, "empty cause");
    row.effect = field(table, r, "effect");
    row.detection = field(table, r, "detection");
    row.prevention = field(table, r, "prevention");
    rows.push_back(std::move(row));
  }

  return graph.apply_batch([&](Graph& g) {
    schema::ensure_schema(g);
    FmeaLoadResult result;
    result.records_read = rows.size();
    const std::string key_prop(schema::kKeyProp);
    for (const Row& row : rows) {
      const NodeId part = require_part(g, row.part_id, row.line, options);
      const std::string fm_norm = normalize_text(row.failure_mode, synonyms);
      const std::string cause_norm = normalize_text(row.cause, synonyms);
      const std::string key = chain_key(row.type, row.part_id, fm_norm, cause_norm);
      if (!g.find_by_property(key_prop, graph::PropertyValue{key}).empty()) {
        ++result.duplicates_dropped;
        continue;
      }
      const std::string type(1, row.type);
      const std::string fm_key =
          json_key("fm", {type, row.part_id, canonical_text(fm_norm)});

      PropertyMap fm_props = text_props(row.failure_mode, synonyms);
      fm_props["fmea_type"] = type;
      fm_props["part_id"] = row.part_id;
      fm_props["fmea_id"] = row.fmea_id;
      const auto fm = schema::upsert_instance(g, schema::kFailureMode, fm_key, std::move(fm_props));
      g.create_edge(std::string(schema::kHasFailureMode), part, fm.id, {}, true);

      PropertyMap cause_props = text_props(row.cause, synonyms);
      cause_props["fmea_id"] = row.fmea_id;
      const auto cause = schema::upsert_instance(g, schema::kCause, key, std::move(cause_props));
      g.create_edge(std::string(schema::kHasCause), fm.id, cause.id, {}, true);

      const auto attach = [&](const std::string& raw, std::string_view label,
                              std::string_view edge_type, std::string_view prefix) {
        if (raw.empty()) return;
        const std::string norm = normalize_text(raw, synonyms);
        const std::string node_key =
            json_key(prefix, {type, row.part_id, canonical_text(fm_norm), canonical_text(norm)});
        const auto node = schema::upsert_instance(g, label, node_key, text_props(raw, synonyms));
        g.create_edge(std::string(edge_type), fm.id, node.id, {}, true);
      };
      attach(row.effect, schema::kEffect, schema::kHasEffect, "effect");
      attach(row.detection, schema::kDetection, schema::kDetectedBy, "detection");
      attach(row.prevention, schema::kPrevention, schema::kPreventedBy, "prevention");
      ++result.chains_created;
    }
    return result;
  });
}

ClaimsLoadResult load_claims(Graph& graph, std::string_view csv_text, const SynonymMap& synonyms,
                             LoadOptions options) {
  static constexpr std::string_view kColumns[] = {"claim_id", "part_id", "claim_text", "date"};
  const CsvTable table(csv_text, kColumns);

  struct Row {
    std::string id, part_id, text, date;
    std::size_t line = 0;
  };
  std::vector<Row> rows;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.size(); ++r) {
    Row row;
    row.line = table.row(r).line;
    row.id = field(table, r, "claim_id");
    row.part_id = field(table, r, "part_id");
    row.text = field(table, r, "claim_text");
    row.date = field(table, r, "date");
    if (row.id.empty()) malformed(row.line, "empty claim_id");
    if (row.part_id.empty()) malformed(row.line, "empty part_id");
    if (row.text.empty()) malformed(row.line, "empty claim_text");
    if (!valid_iso_date(row.date)) malformed(row.line, "date must be YYYY-MM-DD, got '" + row.date + "'");
    if (!seen.insert(row.id).second) {
      throw Error(ErrorCode::kDuplicateClaimId,
                  "line " + std::to_string(row.line) + ": duplicate claim_id '" + row.id + "'",
                  {{"claim_id", row.id}, {"line", row.line}});
    }
    rows.push_back(std::move(row));
  }

  return graph.apply_batch([&](Graph& g) {
    schema::ensure_schema(g);
    ClaimsLoadResult result;
    const std::string key_prop(schema::kKeyProp);
    for (const Row& row : rows) {
      const NodeId part = require_part(g, row.part_id, row.line, options);
      const auto existing = g.find_by_property(key_prop, graph::PropertyValue{claim_key(row.id)});
      if (!existing.empty()) {
        // Re-loading the same claim is a no-op; a different claim under the
        // same id is not.
        const auto& props = g.node(existing.front()).props;
        if (graph::text_prop(props, "part_id") != row.part_id ||
            graph::text_prop(props, std::string(schema::kTextProp)) != row.text ||
            graph::text_prop(props, "date") != row.date) {
          throw Error(ErrorCode::kDuplicateClaimId,
                      "line " + std::to_string(row.line) + ": claim_id '" + row.id +
                          "' already loaded with different content",
                      {{"claim_id", row.id}, {"line", row.line}});
        }
        continue;
      }
      PropertyMap props = text_props(row.text, synonyms);
      props[std::string(schema::kIdProp)] = row.id;
      props["part_id"] = row.part_id;
      props["date"] = row.date;
      const auto claim =
          schema::upsert_instance(g, schema::kWarrantyClaim, claim_key(row.id), std::move(props));
      g.create_edge(std::string(schema::kClaimFor), claim.id, part, {}, true);
      ++result.claims_created;
    }
    return result;
  });
}

}  // namespace fountain::ingest
