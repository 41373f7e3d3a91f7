#pragma once

#include <stdexcept>
#include <string>

namespace witsim {

// File-format error. `line` is 1-based; 0 means the problem is not tied to a
// single line (e.g. a missing key).
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& origin, int line, const std::string& detail)
        : std::runtime_error(origin + (line > 0 ? ":" + std::to_string(line) : "") + ": " + detail),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace witsim
