#pragma once

namespace ddtea {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ddtea
