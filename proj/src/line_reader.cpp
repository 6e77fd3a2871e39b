#include "line_reader.hpp"

#include <cstring>

namespace lexitrend::detail {

LineReader::LineReader(const std::filesystem::path& path) : buf_(1 << 20) {
  if (path.extension() == ".gz") {
    gz_ = gzopen(path.c_str(), "rb");
    if (gz_) gzbuffer(gz_, 1 << 18);
  } else {
    file_ = std::fopen(path.c_str(), "rb");
  }
}

LineReader::~LineReader() {
  if (file_) std::fclose(file_);
  if (gz_) gzclose(gz_);
}

bool LineReader::fill() {
  if (eof_) return false;
  if (begin_ > 0) {
    std::memmove(buf_.data(), buf_.data() + begin_, end_ - begin_);
    end_ -= begin_;
    begin_ = 0;
  }
  if (end_ == buf_.size()) buf_.resize(buf_.size() * 2);
  std::size_t want = buf_.size() - end_;
  long got;
  if (gz_) {
    int n = gzread(gz_, buf_.data() + end_, static_cast<unsigned>(want));
    if (n < 0) {
      failed_ = true;
      n = 0;
    }
    got = n;
  } else {
    got = static_cast<long>(std::fread(buf_.data() + end_, 1, want, file_));
    if (std::ferror(file_)) failed_ = true;
  }
  if (got <= 0) {
    eof_ = true;
    return false;
  }
  end_ += static_cast<std::size_t>(got);
  return true;
}

bool LineReader::next(std::string& line) {
  for (;;) {
    const char* start = buf_.data() + begin_;
    auto* nl = static_cast<const char*>(std::memchr(start, '\n', end_ - begin_));
    if (nl) {
      std::size_t len = static_cast<std::size_t>(nl - start);
      begin_ += len + 1;
      if (len > 0 && start[len - 1] == '\r') --len;
      line.assign(start, len);
      return true;
    }
    if (!fill()) {
      if (begin_ == end_) return false;
      std::size_t len = end_ - begin_;
      const char* s = buf_.data() + begin_;
      if (len > 0 && s[len - 1] == '\r') --len;
      line.assign(s, len);
      begin_ = end_;
      return true;
    }
  }
}

}  // namespace lexitrend::detail
