#pragma once

namespace tfvtg {

/// Entry point of the `tfvtg` tool. Returns 0 on success, 1 on input errors
/// (bad flags, missing or malformed files), 2 on internal failures.
int run_cli(int argc, const char* const* argv);

}  // namespace tfvtg
