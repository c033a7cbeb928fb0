#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace surveq::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // Bad usage or invalid input data.
inline constexpr int kExitInternal = 2;

// Subcommands curve, synth, alpha and calibrate. args[0] is the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int Main(int argc, char** argv);

}  // namespace surveq::cli
