#pragma once

namespace market {

// Full command-line front end; returns the process exit code.
// 0 = success, 1 = usage/parse/budget error, 2 = no equilibrium,
// 3 = verification failure.
int run_cli(int argc, char** argv);

}  // namespace market
