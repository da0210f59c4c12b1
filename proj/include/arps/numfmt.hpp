#pragma once

#include <charconv>
#include <string>

namespace arps {

/// Shortest round-trip is not what we want for regression diffs: every
/// number is written with exactly 17 significant digits.
inline std::string format_g17(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace arps
