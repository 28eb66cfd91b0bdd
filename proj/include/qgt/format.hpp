#pragma once

#include <cstdio>
#include <string>

namespace qgt {

// Locale-independent "%.12g" formatting; all CSV output goes through this so
// identical runs produce identical bytes.
inline std::string g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace qgt
