#pragma once

namespace nsratio {
inline constexpr const char* kVersion = "0.1.0";
}
