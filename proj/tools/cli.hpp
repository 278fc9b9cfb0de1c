#pragma once

#include <iosfwd>

namespace prepcost {

// Exit codes: 0 success, 2 input error, 3 numerical error, 4 dimension limit.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace prepcost
