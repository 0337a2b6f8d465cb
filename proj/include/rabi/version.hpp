#pragma once

namespace rabi {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace rabi
