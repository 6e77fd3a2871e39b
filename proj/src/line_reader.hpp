#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <zlib.h>

namespace lexitrend::detail {

// Buffered line reader over plain or gzip files. Lines are returned
// without the trailing '\n' (and '\r').
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool ok() const { return file_ != nullptr || gz_ != nullptr; }
  bool next(std::string& line);
  bool failed() const { return failed_; }

 private:
  bool fill();

  std::FILE* file_ = nullptr;
  gzFile gz_ = nullptr;
  std::vector<char> buf_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  bool failed_ = false;
};

}  // namespace lexitrend::detail
