#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "fountain/graph/graph.hpp"
#include "fountain/ingest/text.hpp"

// Bulk loaders from the CSV exports into the instance layer. Each load is
// all-or-nothing: on any error the graph is left exactly as it was.
namespace fountain::ingest {

struct BomLoadResult {
  std::size_t parts_created = 0;
  std::size_t edges_created = 0;  // HAS_CHILD edges
  graph::NodeId root;
};

struct FmeaLoadResult {
  std::size_t records_read = 0;
  std::size_t chains_created = 0;
  std::size_t duplicates_dropped = 0;
};

struct ClaimsLoadResult {
  std::size_t claims_created = 0;
};

struct LoadOptions {
  // Create placeholder Part nodes for unknown part_ids instead of failing.
  bool allow_orphans = false;
};

// columns: part_id,parent_id,part_name,level,quantity
BomLoadResult load_bom(graph::Graph& graph, std::string_view csv_text);

// columns: fmea_id,fmea_type,part_id,failure_mode,cause,effect,detection,prevention
FmeaLoadResult load_fmea(graph::Graph& graph, std::string_view csv_text,
                         const SynonymMap& synonyms, LoadOptions options = {});

// columns: claim_id,part_id,claim_text,date
ClaimsLoadResult load_claims(graph::Graph& graph, std::string_view csv_text,
                             const SynonymMap& synonyms, LoadOptions options = {});

// Dedup key of one FMEA row: (type, part, canonical failure mode, canonical cause).
std::string chain_key(char fmea_type, std::string_view part_id, std::string_view failure_mode,
                      std::string_view cause);

// Instance-layer keys, exposed so other modules can address nodes by them.
std::string part_key(std::string_view part_id);
std::string claim_key(std::string_view claim_id);

// External id -> Part node, if loaded.
std::optional<graph::NodeId> find_part(const graph::Graph& graph, std::string_view part_id);

}  // namespace fountain::ingest
