#pragma once

#include <string>

#include "mrsim/run_config.hpp"

namespace mrsim {

/// Each command writes its CSV / dataset files into config.out_dir, writes
/// the run summary to <out_dir>/summary.json, and returns that JSON text.
std::string cmd_wsl(const RunConfig& config);
std::string cmd_curve(const RunConfig& config);
std::string cmd_mc(const RunConfig& config);
std::string cmd_scan(const RunConfig& config);
std::string cmd_noise(const RunConfig& config);

/// threads resolution: explicit config value, else MRSIM_THREADS, else 0
/// (library default = hardware concurrency).
unsigned resolve_thread_count(const RunConfig& config);

}  // namespace mrsim
