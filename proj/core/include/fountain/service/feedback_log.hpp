#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <vector>

#include "fountain/eval/feedback_summary.hpp"
#include "fountain/io.hpp"

namespace fountain::service {

// Append-only JSONL feedback store. Records are acknowledged only after they
// reach the file, so every acknowledged record survives a crash; a torn last
// line left by a crash is discarded on open.
class FeedbackLog {
 public:
  FeedbackLog(const std::filesystem::path& path, bool sync);

  // Fills feedback_id and a timestamp no earlier than the previous record's,
  // appends, and returns the stored record.
  eval::FeedbackRecord append(eval::FeedbackRecord record, std::int64_t now_ms);

  std::vector<eval::FeedbackRecord> records() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::vector<eval::FeedbackRecord> records_;
  io::AppendFile file_;
};

}  // namespace fountain::service
