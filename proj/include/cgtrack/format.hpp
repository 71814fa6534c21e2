#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace cgtrack {

// Fixed-decimal rendering, no exponent notation; the C locale decimal point
// is assumed (the CLI pins LC_NUMERIC). Negative zero renders as zero so
// file output stays canonical.
inline std::string format_fixed(double v, int digits = 6) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s(buf);
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') {
        s.erase(0, 1);
    }
    return s;
}

// The double nearest the fixed-decimal rendering of v. Generated data is
// quantized with this before leaving the generator, so writing and
// re-parsing a file reproduces the in-memory values exactly.
inline double quantize(double v, int digits = 6) {
    return std::strtod(format_fixed(v, digits).c_str(), nullptr);
}

}  // namespace cgtrack
