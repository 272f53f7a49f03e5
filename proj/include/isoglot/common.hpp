#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace isoglot {

// Raised for malformed or unreadable input files. Messages carry the path and,
// where meaningful, a 1-based line number.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a computation cannot proceed on the given data (degenerate
// spectrum, rank deficiency, empty join, ...). Argument validation failures
// use std::invalid_argument instead.
class compute_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Renders a double with 17 significant digits, enough for an exact
// binary64 round-trip through decimal text.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// FNV-1a, used to key cached spectra to file contents.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace isoglot
