#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "fountain/graph/graph.hpp"

// Line-delimited JSON snapshot:
//   {"format":"fountain-graph","version":1,"nodes":N,"edges":M}
//   {"kind":"node","id":0,"labels":[...],"props":{...}}   (N lines)
//   {"kind":"edge","id":0,"type":"...","from":0,"to":1,"props":{...}}   (M lines)
// The node/edge counts in the header let the loader detect a file cut at a
// line boundary; readers accept headers without them.
namespace fountain::graph {

inline constexpr std::string_view kSnapshotFormat = "fountain-graph";
inline constexpr int kSnapshotVersion = 1;

nlohmann::json node_record(const Node& node);
nlohmann::json edge_record(const Edge& edge);
// `line` is only used for error reporting.
Node parse_node_record(const nlohmann::json& record, std::size_t line);
Edge parse_edge_record(const nlohmann::json& record, std::size_t line);

std::string serialize_snapshot(const Graph& graph);
Graph parse_snapshot(std::string_view content);

// Returns the number of node and edge records written.
std::size_t snapshot_save(const Graph& graph, const std::filesystem::path& path);
Graph snapshot_load(const std::filesystem::path& path);

}  // namespace fountain::graph
