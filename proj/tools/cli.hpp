#ifndef ABELKIT_CLI_HPP
#define ABELKIT_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace abelkit::cli
{

enum exit_code : int { ok = 0, usage = 1, input = 2, precondition = 3, accuracy = 4 };

// args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace abelkit::cli

#endif
