#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "superact/quantum_state.hpp"

namespace superact {

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int count = 101;

  std::vector<double> points() const;
};

/// "start:stop:count"; throws std::invalid_argument.
GridSpec parse_grid(const std::string& text);

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  GridSpec grid;
  double threshold_tolerance = 0.0;  // 0 selects the per-property default
  double feasibility_tolerance = 1e-7;
  std::uint64_t seed = 7;
  std::string output;  // empty writes to stdout
  std::optional<OutputFormat> format;

  std::string protocol = "pbs";
  std::string localize;
  bool certify_output = false;

  bool curves = false;
  std::vector<std::string> thresholds;
  std::string certifiers;

  std::optional<double> schedule_p;
  std::string sample_setting;
  std::uint64_t shots = 1000;
  bool fidelity = false;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

/// Reads the RunConfig JSON schema; unknown keys are rejected.
RunConfig load_config(const std::string& json_text);

/// noisy-ghz:p, noisy-w:p, noise-model:p,q,r, or a path to a JSON state file.
DensityMatrix parse_state_spec(const std::string& spec);

/// Worker count: SUPERACT_THREADS when set to a positive integer, else the
/// hardware concurrency.
unsigned worker_count();

/// Runs f(0..n-1) on up to worker_count() threads and returns the results in
/// index order. Rethrows the exception of the lowest failing index.
std::vector<std::string> parallel_map(std::size_t n, const std::function<std::string(std::size_t)>& f);

/// Subcommand bodies; each returns the text to write.
std::string cmd_certify(const RunConfig& cfg);
std::string cmd_distill(const RunConfig& cfg);
std::string cmd_sweep(const RunConfig& cfg);
std::string cmd_coincidence(const RunConfig& cfg);

/// Writes through a temporary file and a rename, so a failure never leaves a
/// partial file behind. An empty path writes to stdout.
void write_output(const std::string& path, const std::string& content);

/// Process entry point. Returns 0 on success, 2 for invalid input, 1 for
/// other failures.
int run_cli(int argc, const char* const* argv);

}  // namespace superact
