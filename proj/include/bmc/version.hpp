#pragma once

namespace bmc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bmc
