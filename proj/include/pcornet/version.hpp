#pragma once

namespace pcornet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pcornet
