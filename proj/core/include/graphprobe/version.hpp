#pragma once

namespace graphprobe {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace graphprobe
