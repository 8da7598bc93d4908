#pragma once

namespace multdim {
inline constexpr const char* kVersion = "0.1.0";
}
