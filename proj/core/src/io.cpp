#include "fountain/io.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "fountain/error.hpp"

namespace fountain::io {

namespace {

[[noreturn]] void io_error(const std::string& what, const std::filesystem::path& path) {
  throw Error(ErrorCode::kIoError, what + " '" + path.string() + "': " + std::strerror(errno),
              {{"path", path.string()}});
}

void write_all(int fd, std::string_view data, const std::filesystem::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      io_error("write failed for", path);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    io_error("cannot open", path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    io_error("cannot create", tmp);
  }
  try {
    write_all(fd, content, tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_error("fsync failed for", tmp);
  }
  ::close(fd);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "rename to '" + path.string() + "' failed: " + ec.message());
  }
}

AppendFile::AppendFile(const std::filesystem::path& path, bool sync) : path_(path), sync_(sync) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    io_error("cannot open for append", path);
  }
}

AppendFile::~AppendFile() { close(); }

AppendFile::AppendFile(AppendFile&& other) noexcept
    : path_(std::move(other.path_)), fd_(other.fd_), sync_(other.sync_) {
  other.fd_ = -1;
}

AppendFile& AppendFile::operator=(AppendFile&& other) noexcept {
  if (this != &other) {
    close();
    path_ = std::move(other.path_);
    fd_ = other.fd_;
    sync_ = other.sync_;
    other.fd_ = -1;
  }
  return *this;
}

void AppendFile::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void AppendFile::append(std::string_view data) {
  if (fd_ < 0) {
    throw Error(ErrorCode::kIoError, "append on closed file");
  }
  write_all(fd_, data, path_);
  if (sync_ && ::fdatasync(fd_) != 0) {
    io_error("fdatasync failed for", path_);
  }
}

void AppendFile::reset(std::string_view data) {
  if (fd_ < 0) {
    throw Error(ErrorCode::kIoError, "reset on closed file");
  }
  if (::ftruncate(fd_, 0) != 0) {
    io_error("truncate failed for", path_);
  }
  append(data);
}

Lines split_lines(std::string_view content) {
  Lines out;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    if (nl == std::string_view::npos) {
      out.torn_tail = true;
      break;
    }
    auto line = content.substr(0, nl);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    out.lines.push_back(line);
    content.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace fountain::io
