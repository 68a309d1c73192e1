#pragma once

namespace epoly {
inline constexpr const char* kVersion = "0.1.0";
}
