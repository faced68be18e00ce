#pragma once

namespace routegame {

/// Command-line entry point. Exit codes: 0 success, 1 validation or verdict
/// failure, 2 input/config error, 3 internal assertion violated during a run.
int run_cli(int argc, const char* const* argv);

}  // namespace routegame
