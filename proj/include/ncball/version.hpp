#pragma once

namespace ncball {
inline constexpr const char* kVersion = "0.1.0";
}
