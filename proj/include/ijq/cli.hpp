#pragma once

#include <string>
#include <vector>

namespace ijq {

/**
 * Run one CLI invocation; args excludes the program name. Prints a JSON
 * report (or CSV for bench) to stdout or --out. Returns the process exit
 * code: 0 for every successful run, the Boolean result of eval lives only
 * in the report; 1 on errors, which go to stderr.
 */
int run_cli(const std::vector<std::string>& args);

}  // namespace ijq
