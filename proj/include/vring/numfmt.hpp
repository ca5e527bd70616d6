#pragma once

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "vring/errors.hpp"

namespace vring {

// Shortest decimal form that round-trips to the same double. Snapshot files
// rely on this for bit-exact read/write cycles.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw IoError("bad numeric field: '" + std::string(s) + "'");
    return v;
}

inline long parse_long(std::string_view s) {
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw IoError("bad integer field: '" + std::string(s) + "'");
    return v;
}

} // namespace vring
