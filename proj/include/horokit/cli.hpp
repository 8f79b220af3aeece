#pragma once

namespace horokit {

// Full command-line surface: parses argv, runs the requested subcommand,
// writes the JSON report (stdout or --out), and returns the process exit
// code: 0 pass, 1 usage/config error, 2 verification failure.
int run_cli(int argc, char** argv);

}  // namespace horokit
