#pragma once

#include <charconv>
#include <string>

namespace witsim {

// Shortest decimal string that round-trips the exact double. Printed numbers
// therefore equal the computed values bit for bit after parsing back.
inline std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace witsim
