#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "markov/chain_core.hpp"
#include "markov/truncation.hpp"

namespace markov {

/// Union of the knobs used by the CLI subcommands; each command validates the
/// subset it consumes. A fixed config (seed included) produces byte-identical
/// output files.
struct ExperimentConfig {
  std::string command;

  // kernel selection
  std::string kernel = "birth-death";
  double p = 1.0 / 3.0;          // birth-death up probability
  double arrival_rate = 1.0;     // mm1
  double service_rate = 2.0;     // mm1

  // truncation sweep
  std::vector<std::size_t> n_list;
  std::size_t n_ref = 0;
  TruncationScheme scheme = TruncationScheme::redirect(0);

  // diagnostics
  StateIndex x = 0;
  std::size_t horizon = 1000;
  double eps_mix = 1e-3;
  std::string weight = "none";   // none | linear (w(x) = x + 1)
  double threshold_b = 0.0;      // <= 0 selects the power-of-two default

  // fte
  std::string matrix_file;
  std::size_t n = 0;             // single truncation size when kernel-driven
  std::vector<StateIndex> target_set;
  double alpha = 0.0;
  std::string reward = "indicator";  // indicator | ones | file:<path>
  std::string method = "all";        // vi | linear | ratio | all
  double agree_tol = 1e-8;

  // ctmc
  std::string rates_file;  // single-generator mode when set
  std::size_t skeleton_horizon = 10;
  double skeleton_step = 1.0;
  double eps = 1e-10;

  // continuous-state fixtures
  double x_real = 0.3;
  std::string drift_family = "uniform-shift";
  double drift_base = -0.75;
  std::size_t samples = 10000;
  std::vector<std::size_t> k_list;
  std::string ifs_family = "deterministic";  // deterministic | random
  double ratio = 0.5;

  // solver tolerances
  double tol = 1e-12;
  double cap = 1e12;
  std::size_t max_iters = 10'000'000;

  // global
  std::uint64_t seed = 1;
  int threads = 1;
  std::filesystem::path out_dir = ".";
};

// Runs one experiment, writing its CSV (and any matrix/distribution files)
// under out_dir. Returns 0 on success. Configuration problems throw
// ConfigError (CLI exit 1); numerical failures propagate the library error
// (CLI exit 2).
int run_experiment(const ExperimentConfig& config);

}  // namespace markov
