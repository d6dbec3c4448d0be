#pragma once

#include <iosfwd>

namespace motifsp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the motifsp binary. Report text goes to out, diagnostics
/// to err; data files are written under --out-dir.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace motifsp::cli
