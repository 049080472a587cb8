#pragma once

#include <iosfwd>

namespace semviz::cli {

// Exit codes: 0 ok, 1 other failure, 2 usage, 3 not found, 4 network, 5 parse.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semviz::cli
