#pragma once

namespace tbi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tbi
