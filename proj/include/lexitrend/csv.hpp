#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// RFC 4180 CSV: comma separated, CRLF-free output, fields quoted only when
// they contain a comma, quote or line break.
namespace lexitrend::csv {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);
/// Empty for nullopt.
std::string format_optional(const std::optional<double>& v);

std::string escape(std::string_view field);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws DataError when absent.
  std::size_t column(std::string_view name) const;
};

/// Parses a whole CSV document; the first record is the header. Throws
/// DataError on unterminated quotes or ragged rows.
Table parse(std::istream& in);
Table read_file(const std::filesystem::path& path);

}  // namespace lexitrend::csv
