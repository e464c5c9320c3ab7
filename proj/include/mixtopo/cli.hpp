#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace mixtopo::cli {

/// Runs one CLI command. Returns the process exit code: 0 success, 1 usage
/// error, 2 invalid input or model, 3 numerical failure. A one-line summary
/// goes to `out`; failures emit a machine-readable JSON object on `err`.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

} // namespace mixtopo::cli
