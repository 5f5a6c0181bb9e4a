#pragma once

namespace bramble_forge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bramble_forge
