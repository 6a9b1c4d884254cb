#pragma once

// Command-line front end: check, reduce, profile, simulate, analyze.
//
// Exit codes: 0 success, 2 usage or config error, 3 blow-up, 4 numerical failure.
// Without --out, simulate writes to $NULLWAVE_OUT_ROOT/<config stem>-<hash prefix>
// (default root: ./runs).

#include <string>
#include <vector>

namespace nullwave {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBlowUp = 3;
inline constexpr int kExitNumerical = 4;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutRootEnv = "NULLWAVE_OUT_ROOT";

/// Parses argv and dispatches; never throws.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace nullwave
