#pragma once

namespace gapmm {

// Full command-line front end; returns the process exit code.
// 0: success. 1: usage/configuration error. 2: hypothesis failure or no gap
// eigenvalue. 3: a verified property or invariant failed.
int run_cli(int argc, const char* const* argv);

}  // namespace gapmm
