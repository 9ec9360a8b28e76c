#pragma once

#include "firmgrid/config.hpp"

#include <iosfwd>

namespace firmgrid {

enum class Command { Simulate, Optimize, Scenario };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;  // bad arguments or config
inline constexpr int data = 2;   // I/O or dataset validation
inline constexpr int infeasible = 3;
}  // namespace exit_code

AlignedDataset load_dataset(const DatasetConfig& config);

/// Executes one command and writes its outputs under config.output_dir:
/// report.csv, trajectory.csv when optimizing, trace.csv when requested,
/// and run_manifest.txt. Diagnostics go to `log`. Never throws.
int run(RunConfig config, Command command, std::ostream& log);

}  // namespace firmgrid
