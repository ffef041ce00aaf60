#pragma once

namespace qclob {

namespace cli_exit {
constexpr int ok = 0;
constexpr int usage = 2;
constexpr int parse = 3;      // parse or validation failure
constexpr int internal = 4;
constexpr int empty_session = 5;
}  // namespace cli_exit

// Entry point shared by the binary and in-process tests.
int run_cli(int argc, const char* const* argv);

}  // namespace qclob
