#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace g2lab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

/// Runs the command line `args` (without the program name). Output goes to
/// `out`, diagnostics to `err`; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker cap from GAMMA2LAB_THREADS, else the hardware concurrency; at least 1.
std::size_t worker_count();

/// Calls f(i) for i in [0, count) on up to worker_count() threads. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& f);

}  // namespace g2lab
