#pragma once

namespace gradcoh {

// Bumped whenever a change can alter computed reports; part of every cache key.
inline constexpr const char* kEngineVersion = "1.0.0";

}  // namespace gradcoh
