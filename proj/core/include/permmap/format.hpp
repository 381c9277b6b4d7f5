#pragma once

#include <string>

namespace permmap {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

}  // namespace permmap
