#pragma once

namespace hsball {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hsball
