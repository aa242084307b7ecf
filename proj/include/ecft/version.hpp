#pragma once

namespace ecft {

inline constexpr const char* kToolkitVersion = "1.0.0";

}  // namespace ecft
