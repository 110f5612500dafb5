#include "fountain/graph/snapshot.hpp"

#include "fountain/error.hpp"
#include "fountain/io.hpp"

namespace fountain::graph {

namespace {

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kCorruptRecord,
              "corrupt snapshot record at line " + std::to_string(line) + ": " + what,
              {{"line", line}});
}

std::uint64_t id_field(const nlohmann::json& record, const char* field, std::size_t line) {
  const auto it = record.find(field);
  if (it == record.end() || !it->is_number_unsigned()) {
    corrupt(line, std::string("missing or invalid '") + field + "'");
  }
  return it->get<std::uint64_t>();
}

PropertyMap props_field(const nlohmann::json& record, std::size_t line) {
  const auto it = record.find("props");
  if (it == record.end()) {
    return {};
  }
  try {
    return props_from_json(*it);
  } catch (const Error& e) {
    corrupt(line, e.what());
  }
}

}  // namespace

nlohmann::json node_record(const Node& node) {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& label : node.labels) {
    labels.push_back(label);
  }
  return {{"kind", "node"}, {"id", node.id.value}, {"labels", std::move(labels)},
          {"props", to_json(node.props)}};
}

nlohmann::json edge_record(const Edge& edge) {
  return {{"kind", "edge"},         {"id", edge.id.value}, {"type", edge.type},
          {"from", edge.from.value}, {"to", edge.to.value}, {"props", to_json(edge.props)}};
}

Node parse_node_record(const nlohmann::json& record, std::size_t line) {
  Node node;
  node.id = NodeId{id_field(record, "id", line)};
  const auto labels = record.find("labels");
  if (labels == record.end() || !labels->is_array() || labels->empty()) {
    corrupt(line, "node needs a non-empty 'labels' array");
  }
  for (const auto& label : *labels) {
    if (!label.is_string()) {
      corrupt(line, "labels must be strings");
    }
    node.labels.insert(label.get<std::string>());
  }
  node.props = props_field(record, line);
  return node;
}

Edge parse_edge_record(const nlohmann::json& record, std::size_t line) {
  Edge edge;
  edge.id = EdgeId{id_field(record, "id", line)};
  const auto type = record.find("type");
  if (type == record.end() || !type->is_string()) {
    corrupt(line, "edge needs a 'type' string");
  }
  edge.type = type->get<std::string>();
  edge.from = NodeId{id_field(record, "from", line)};
  edge.to = NodeId{id_field(record, "to", line)};
  edge.props = props_field(record, line);
  return edge;
}

std::string serialize_snapshot(const Graph& graph) {
  std::string out;
  const nlohmann::json header = {{"format", kSnapshotFormat},
                                 {"version", kSnapshotVersion},
                                 {"nodes", graph.node_count()},
                                 {"edges", graph.edge_count()}};
  out += header.dump();
  out += '\n';
  for (const Node& node : graph.nodes()) {
    out += node_record(node).dump();
    out += '\n';
  }
  for (const Edge& edge : graph.edges()) {
    out += edge_record(edge).dump();
    out += '\n';
  }
  return out;
}

Graph parse_snapshot(std::string_view content) {
  const io::Lines lines = io::split_lines(content);
  if (lines.lines.empty()) {
    corrupt(1, "missing header");
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(lines.lines.front());
  } catch (const nlohmann::json::exception&) {
    corrupt(1, "header is not JSON");
  }
  if (!header.is_object() || header.value("format", "") != kSnapshotFormat) {
    throw Error(ErrorCode::kFormatVersionMismatch, "not a fountain-graph snapshot");
  }
  if (!header.contains("version") || header["version"] != kSnapshotVersion) {
    throw Error(ErrorCode::kFormatVersionMismatch,
                "unsupported snapshot version " + header.value("version", nlohmann::json()).dump(),
                {{"expected", kSnapshotVersion}});
  }

  Graph graph;
  bool in_edges = false;
  std::size_t line_no = 1;
  for (std::size_t i = 1; i < lines.lines.size(); ++i) {
    line_no = i + 1;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(lines.lines[i]);
    } catch (const nlohmann::json::exception&) {
      corrupt(line_no, "not valid JSON");
    }
    if (!record.is_object()) {
      corrupt(line_no, "record is not an object");
    }
    const std::string kind = record.value("kind", "");
    try {
      if (kind == "node") {
        if (in_edges) {
          corrupt(line_no, "node record after edge records");
        }
        graph.restore_node(parse_node_record(record, line_no));
      } else if (kind == "edge") {
        in_edges = true;
        graph.restore_edge(parse_edge_record(record, line_no));
      } else {
        corrupt(line_no, "unknown record kind '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kCorruptRecord) {
        throw;
      }
      corrupt(line_no, e.what());
    }
  }
  if (lines.torn_tail) {
    corrupt(lines.lines.size() + 1, "truncated record (no trailing newline)");
  }
  const auto expect = [&](const char* field, std::size_t actual) {
    if (header.contains(field) && header[field].is_number_unsigned() &&
        header[field].get<std::size_t>() != actual) {
      corrupt(lines.lines.size() + 1, std::string("expected ") + header[field].dump() + " " +
                                          field + ", found " + std::to_string(actual));
    }
  };
  expect("nodes", graph.node_count());
  expect("edges", graph.edge_count());
  return graph;
}

std::size_t snapshot_save(const Graph& graph, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_snapshot(graph));
  return graph.node_count() + graph.edge_count();
}

Graph snapshot_load(const std::filesystem::path& path) {
  return parse_snapshot(io::read_file(path));
}

}  // namespace fountain::graph
