#include "fountain/service/journal.hpp"

#include <nlohmann/json.hpp>

#include "fountain/error.hpp"
#include "fountain/graph/snapshot.hpp"

namespace fountain::service {

namespace {

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kCorruptRecord, "graph journal line " + std::to_string(line) + ": " + what,
              {{"line", line}});
}

}  // namespace

GraphJournal::GraphJournal(const std::filesystem::path& path, bool sync) : path_(path) {
  if (std::filesystem::exists(path)) {
    const std::string content = io::read_file(path);
    const io::Lines lines = io::split_lines(content);
    if (lines.torn_tail) {
      std::string kept;
      for (const auto line : lines.lines) {
        kept.append(line);
        kept.push_back('\n');
      }
      io::write_file_atomic(path, kept);
    }
  }
  file_ = io::AppendFile(path, sync);
}

std::size_t GraphJournal::replay(graph::Graph& graph) {
  const std::string content = io::read_file(path_);
  const io::Lines lines = io::split_lines(content);
  std::size_t applied = 0;
  for (std::size_t i = 0; i < lines.lines.size(); ++i) {
    const std::size_t line = i + 1;
    nlohmann::json batch;
    try {
      batch = nlohmann::json::parse(lines.lines[i]);
    } catch (const nlohmann::json::exception&) {
      corrupt(line, "invalid JSON");
    }
    if (!batch.is_object() || batch.value("kind", "") != "batch" || !batch.contains("nodes") ||
        !batch.contains("edges")) {
      corrupt(line, "expected a batch record");
    }
    bool changed = false;
    try {
      for (const auto& rec : batch.at("nodes")) {
        graph::Node node = graph::parse_node_record(rec, line);
        if (node.id.value < graph.node_count()) continue;
        if (node.id.value != graph.node_count()) corrupt(line, "node id gap");
        graph.restore_node(std::move(node));
        changed = true;
      }
      for (const auto& rec : batch.at("edges")) {
        graph::Edge edge = graph::parse_edge_record(rec, line);
        if (edge.id.value < graph.edge_count()) continue;
        if (edge.id.value != graph.edge_count()) corrupt(line, "edge id gap");
        graph.restore_edge(std::move(edge));
        changed = true;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kCorruptRecord) throw;
      corrupt(line, e.what());
    }
    if (changed) ++applied;
  }
  return applied;
}

void GraphJournal::append(const graph::Graph& graph, graph::Graph::Mark since) {
  if (graph.node_count() == since.nodes && graph.edge_count() == since.edges) return;
  nlohmann::json batch{{"kind", "batch"}, {"nodes", nlohmann::json::array()},
                       {"edges", nlohmann::json::array()}};
  for (std::size_t i = since.nodes; i < graph.node_count(); ++i) {
    batch["nodes"].push_back(graph::node_record(graph.nodes()[i]));
  }
  for (std::size_t i = since.edges; i < graph.edge_count(); ++i) {
    batch["edges"].push_back(graph::edge_record(graph.edges()[i]));
  }
  file_.append(batch.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n");
}

void GraphJournal::reset() { file_.reset(""); }

}  // namespace fountain::service
