#pragma once

namespace funss {

inline constexpr const char* kVersionString = "funss 0.1.0";

}  // namespace funss
