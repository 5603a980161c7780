#pragma once

/// Shortest round-trip decimal formatting for doubles (std::to_chars), the
/// single formatter behind every CSV and text export so outputs are
/// byte-identical across runs, platforms with the same libc++, and thread
/// counts.

#include <charconv>
#include <string>

namespace fracspec {

inline std::string format_shortest(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

}  // namespace fracspec
