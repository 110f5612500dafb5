#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fountain::io {

// Throws Error(kIoError).
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, fsyncs, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Append-only file handle. Each append() is a single write(2) of a complete
// record followed by fdatasync when `sync` is set, so a killed process leaves
// at most one torn trailing line.
class AppendFile {
 public:
  AppendFile() = default;
  AppendFile(const std::filesystem::path& path, bool sync);
  ~AppendFile();
  AppendFile(const AppendFile&) = delete;
  AppendFile& operator=(const AppendFile&) = delete;
  AppendFile(AppendFile&& other) noexcept;
  AppendFile& operator=(AppendFile&& other) noexcept;

  void append(std::string_view data);
  // Truncates to zero length and writes `data`.
  void reset(std::string_view data);
  bool is_open() const { return fd_ >= 0; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void close();

  std::filesystem::path path_;
  int fd_ = -1;
  bool sync_ = true;
};

// Splits file content into lines. A trailing fragment without a final newline
// is reported through `torn_tail` and not included.
struct Lines {
  std::vector<std::string_view> lines;
  bool torn_tail = false;
};
Lines split_lines(std::string_view content);

}  // namespace fountain::io
