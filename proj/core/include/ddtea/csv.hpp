// Locale-independent number formatting for the text interfaces.
// All files use '.' decimal separator, '\n' line endings, UTF-8; doubles are
// written with 17 significant digits so every value round-trips bit exactly.
#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

namespace ddtea {

/// 17-significant-digit decimal form of x; locale-independent and exact
/// under round trip.
inline std::string fmt_g17(double x) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

/// Strict full-string double parse; returns false on any trailing garbage.
inline bool parse_double(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace ddtea
