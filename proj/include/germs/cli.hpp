#pragma once

#include <iosfwd>
#include <string>

namespace germs::cli {

// Exit statuses.
constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

// The germcheck command line. `data_dir` holds the bundled examples.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const std::string& data_dir);

}  // namespace germs::cli
