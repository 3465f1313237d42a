#pragma once

namespace hdasc {

inline constexpr const char* kVersion = "0.1.0";

// Quick internal consistency pass over the coder, PHY, schedule, metrics and
// cipher; throws on the first failed check.
void run_selftest(bool verbose);

}  // namespace hdasc
