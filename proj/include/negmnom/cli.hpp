#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace negmnom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitError = 2;

// Runs the negmnom command line. args excludes the program name.
// Exit 0 on success or an accepted/inside verdict, 1 on a rejected/outside
// verdict, 2 on usage or input errors (one diagnostic line on err).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// %.17g formatting used for every floating point value the CLI prints.
std::string format_double(double v);

}  // namespace negmnom::cli
