#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "fountain/link/linker.hpp"

namespace fountain::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds an ephemeral port
  std::filesystem::path data_dir = "fountain-data";
  // "test", "test:<d>", "lookup:<path>" or an http:// base URL.
  std::string provider = "test";
  // Initial synonyms; a synonyms.csv in the data directory takes precedence.
  std::optional<std::filesystem::path> synonyms_path;
  link::LinkerConfig linker;
  // 0 disables periodic snapshots.
  std::uint32_t snapshot_interval_seconds = 0;
  // fdatasync every journal and feedback append before acknowledging.
  bool sync_writes = true;

  // {"listen": "host:port", "data_dir", "provider", "synonyms",
  //  "linker": {"tau_link", "tau_claim", "top_k", "scope_depth"},
  //  "snapshot_interval_seconds", "sync_writes"}; every key optional.
  // Relative paths resolve against `base_dir`. Throws kInvalidArgument.
  static ServiceConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static ServiceConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  std::filesystem::path snapshot_path() const { return data_dir / "graph.snapshot.jsonl"; }
  std::filesystem::path journal_path() const { return data_dir / "graph.journal.jsonl"; }
  std::filesystem::path feedback_path() const { return data_dir / "feedback.jsonl"; }
  std::filesystem::path embeddings_path() const { return data_dir / "embeddings.jsonl"; }
  std::filesystem::path synonyms_file() const { return data_dir / "synonyms.csv"; }
};

}  // namespace fountain::service
