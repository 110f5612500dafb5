#pragma once

#include <filesystem>

#include "fountain/graph/graph.hpp"
#include "fountain/io.hpp"

namespace fountain::service {

// Write-ahead log of graph mutations since the last snapshot. Each committed
// batch is one line {"kind":"batch","nodes":[...],"edges":[...]} written with
// a single append, so a crash loses either nothing or the whole batch.
class GraphJournal {
 public:
  GraphJournal(const std::filesystem::path& path, bool sync);

  // Re-applies batches on top of `graph` (normally the last snapshot).
  // Records the snapshot already holds are skipped. Returns the number of
  // batches applied. A torn last line is dropped; any other damage throws
  // kCorruptRecord.
  std::size_t replay(graph::Graph& graph);

  // Appends everything created since `since`; no-op when nothing changed.
  void append(const graph::Graph& graph, graph::Graph::Mark since);
  // Empties the journal once a snapshot covers its content.
  void reset();

 private:
  std::filesystem::path path_;
  io::AppendFile file_;
};

}  // namespace fountain::service
