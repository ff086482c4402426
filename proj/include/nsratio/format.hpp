#pragma once

#include <cstdio>
#include <string>

namespace nsratio {

/// 12 significant digits, the output convention of every tool.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace nsratio
