#pragma once

namespace cml {

inline constexpr const char* kVersion = "cml 0.1.0";

}  // namespace cml
