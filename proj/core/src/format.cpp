#include "permmap/format.hpp"

#include <array>
#include <charconv>

namespace permmap {

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

}  // namespace permmap
