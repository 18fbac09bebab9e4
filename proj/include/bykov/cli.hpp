#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bykov/config.hpp"

namespace bykov {

// One value per CLI flag; unset optionals fall back to per-command defaults.
struct CliFlags {
  std::string config_path;  // --config (empty: built-in defaults)
  std::string out_path;     // --out (empty: stdout)
  std::string csv_dir;      // --csv-dir (empty: no sidecar)
  int jobs = 1;             // --jobs
  std::uint64_t seed = 0;   // --seed
  std::optional<double> lambda;     // --lambda
  std::optional<double> lambda_hi;  // --lambda-hi
  std::optional<double> lambda_lo;  // --lambda-lo
  std::optional<int> strip;         // --strip
  std::optional<int> pulse;         // --pulse
  std::optional<int> depth;         // --depth
  std::optional<int> max_iters;     // --max-iters
  std::string format = "jsonl";     // --format jsonl|csv
};

inline constexpr const char* kCommands[] = {
    "validate", "sweep",  "tangency",    "strips",    "classify", "delta",
    "orbit",    "fixedpoints", "bifurcate", "cover", "entropy",  "escape",
};

// Runs one subcommand. Returns the process exit code: 0 on success, 1 when
// the model rejects the request (domain error), 2 on usage errors. All
// output is deterministic for a fixed config, flags, and seed.
int run_command(const std::string& command, const CliFlags& flags);

}  // namespace bykov
