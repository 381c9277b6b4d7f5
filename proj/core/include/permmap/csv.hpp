#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace permmap::csv {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

/// Streaming reader for comma-separated text with RFC 4180 quoting: fields may
/// be wrapped in double quotes, quotes inside are doubled, and quoted fields
/// may span lines. A leading UTF-8 byte order mark is skipped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::optional<Record> next();

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  bool started_ = false;
};

std::string_view trim(std::string_view s) noexcept;
std::string lower(std::string_view s);

/// Quotes a field only when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

}  // namespace permmap::csv
