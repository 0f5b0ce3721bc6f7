#pragma once

namespace pinning {
inline constexpr const char* kVersion = "0.1.0";
}
