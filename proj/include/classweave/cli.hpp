#pragma once

#include <ostream>

namespace classweave {

// Exit status: 0 success, 1 data error, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace classweave
