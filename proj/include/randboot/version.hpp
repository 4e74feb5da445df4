#pragma once

namespace randboot {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace randboot
