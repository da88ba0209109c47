#pragma once

namespace scanstress {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace scanstress
