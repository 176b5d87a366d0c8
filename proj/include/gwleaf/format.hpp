#pragma once

#include <charconv>
#include <ostream>
#include <span>
#include <string>

namespace gwleaf {

// Shortest round-trip representation is not used on purpose: files carry
// exactly 17 significant digits so that golden comparisons are bit-stable.
inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

template <class T>
std::string join(std::span<const T> values, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace gwleaf
