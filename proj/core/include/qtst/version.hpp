#pragma once

namespace qtst {

inline constexpr const char* kToolName = "qtst-sim";
inline constexpr const char* kVersion = "0.1.0";

// Revision string stamped into sweep metadata so result files can be
// traced back to the code that produced them.
inline constexpr const char* kRevision = "qtst-sim-0.1.0";

}  // namespace qtst
