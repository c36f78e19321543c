#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shrinkerlab::cli {

/// Entry point behind main(); args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shrinkerlab::cli
