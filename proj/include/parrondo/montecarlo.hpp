#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "parrondo/game.hpp"

namespace parrondo {

/// SplitMix64 finalizer. Replication k of a run seeded with `seed` uses the
/// engine seeded with stream_seed(seed, k); stream 0 is the plain seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

using Engine = std::mt19937_64;

struct SimulationOptions {
  std::uint64_t turns = 1'000'000;
  std::uint64_t seed = 1;
  /// Uniform over all 2^n configurations when unset.
  std::optional<Configuration> initial;
  std::size_t max_checkpoints = 10'000;
  /// Batch count for the batch-means standard error.
  std::size_t batches = 100;
  /// Count visits to each configuration (n <= 16).
  bool record_occupancy = false;
};

struct Checkpoint {
  std::uint64_t turn;
  double running_mean;
};

struct SimulationRun {
  int n = 0;
  ParamVector<double> params;
  PatternSpec pattern;
  std::uint64_t turns = 0;
  std::uint64_t seed = 0;
  Configuration initial;
  Configuration final_state;
  std::int64_t total_payoff = 0;  // S_T
  double final_mean = 0.0;        // S_T / T
  double standard_error = 0.0;    // batch means
  std::vector<Checkpoint> trajectory;
  std::vector<std::uint64_t> occupancy;
};

/// Plays the ensemble game: each turn a uniformly chosen player tosses the
/// coin of the active game and takes status 1 (+1) on heads, 0 (-1) on tails.
SimulationRun simulate(int n, const ParamVector<double>& params, const PatternSpec& pattern,
                       const SimulationOptions& options);

struct SllnReport {
  double exact_mu = 0.0;
  double reference = 0.0;
  std::vector<double> final_means;
  std::vector<double> z_scores;
  double mean_of_means = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  double threshold = 4.0;
  bool flagged = false;
};

/// Runs `replications` independent simulations and compares their final
/// means with the exact mean, or with `reference` when given. Flags when the
/// pooled |z| or any single-run |z| exceeds `threshold`.
SllnReport slln_check(int n, const ParamVector<double>& params, const PatternSpec& pattern,
                      std::uint64_t turns, std::size_t replications, std::uint64_t seed,
                      std::optional<double> reference = std::nullopt, std::size_t jobs = 1,
                      double threshold = 4.0);

}  // namespace parrondo
