#pragma once

namespace evodepth {

inline constexpr const char* kVersion = "0.1.0";

}   // namespace evodepth
