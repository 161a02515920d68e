#pragma once

namespace crahn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crahn
