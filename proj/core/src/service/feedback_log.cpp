#include "fountain/service/feedback_log.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "fountain/error.hpp"

namespace fountain::service {

FeedbackLog::FeedbackLog(const std::filesystem::path& path, bool sync) {
  if (std::filesystem::exists(path)) {
    const std::string content = io::read_file(path);
    const io::Lines lines = io::split_lines(content);
    std::string kept;
    for (std::size_t i = 0; i < lines.lines.size(); ++i) {
      try {
        records_.push_back(eval::feedback_from_json(nlohmann::json::parse(lines.lines[i])));
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::kCorruptRecord,
                    "feedback log line " + std::to_string(i + 1) + " is not valid JSON",
                    {{"line", i + 1}, {"path", path.string()}});
      } catch (const Error& e) {
        throw Error(ErrorCode::kCorruptRecord,
                    "feedback log line " + std::to_string(i + 1) + ": " + e.what(),
                    {{"line", i + 1}, {"path", path.string()}});
      }
      kept.append(lines.lines[i]);
      kept.push_back('\n');
    }
    if (lines.torn_tail) io::write_file_atomic(path, kept);
  }
  file_ = io::AppendFile(path, sync);
}

eval::FeedbackRecord FeedbackLog::append(eval::FeedbackRecord record, std::int64_t now_ms) {
  std::lock_guard lock(mutex_);
  char id[32];
  std::snprintf(id, sizeof(id), "fb-%06zu", records_.size() + 1);
  record.feedback_id = id;
  record.timestamp_ms = records_.empty() ? now_ms : std::max(now_ms, records_.back().timestamp_ms);
  file_.append(eval::to_json(record).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) +
               "\n");
  records_.push_back(record);
  return record;
}

std::vector<eval::FeedbackRecord> FeedbackLog::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::size_t FeedbackLog::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

}  // namespace fountain::service
