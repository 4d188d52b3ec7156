#pragma once

#include <string>
#include <vector>

namespace hesvs::cli {

// Exit codes: 0 success, 1 usage error, 2 zero-probability event,
// 3 validation failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace hesvs::cli
