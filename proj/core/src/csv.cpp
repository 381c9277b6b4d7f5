#include "permmap/csv.hpp"

#include <algorithm>
#include <cctype>

namespace permmap::csv {

std::optional<Record> Reader::next() {
  if (!started_) {
    started_ = true;
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF)) {
        in_.clear();
        in_.seekg(0);
      }
    }
  }

  for (;;) {
    if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

    Record record;
    record.line = line_;
    std::string field;
    bool quoted = false;
    bool any = false;
    int c;
    while ((c = in_.get()) != std::char_traits<char>::eof()) {
      any = true;
      char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field.push_back(ch);
        }
        continue;
      }
      if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        record.fields.push_back(std::move(field));
        field.clear();
      } else if (ch == '\r') {
        if (in_.peek() == '\n') continue;
        ++line_;
        break;
      } else if (ch == '\n') {
        ++line_;
        break;
      } else {
        field.push_back(ch);
      }
    }
    if (!any) return std::nullopt;
    record.fields.push_back(std::move(field));
    // Blank lines carry no record.
    if (record.fields.size() == 1 && trim(record.fields.front()).empty()) continue;
    return record;
  }
}

std::string_view trim(std::string_view s) noexcept {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace permmap::csv
