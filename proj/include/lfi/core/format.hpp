#pragma once

#include <string>

namespace lfi {

/// Shortest decimal string that round-trips to the same double.
/// Non-finite values render as "nan", "inf", "-inf".
std::string format_double(double value);

}  // namespace lfi
