#include "parrondo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "parrondo/means.hpp"

namespace parrondo {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  if (stream == 0) return seed;
  std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

inline double unit(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::uint32_t below(Engine& rng, std::uint32_t bound) {
  return static_cast<std::uint32_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

double standard_error_of(const std::vector<double>& batch_means) {
  const auto b = static_cast<double>(batch_means.size());
  if (batch_means.size() < 2) return std::nan("");
  double mean = 0.0;
  for (double v : batch_means) mean += v;
  mean /= b;
  double ss = 0.0;
  for (double v : batch_means) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (b - 1.0) / b);
}

}  // namespace

SimulationRun simulate(int n, const ParamVector<double>& params, const PatternSpec& pattern,
                       const SimulationOptions& options) {
  PARRONDO_REQUIRE(n >= kMinPlayers && n <= kMaxPlayers, "player count must be in [3, 24]");
  PARRONDO_REQUIRE(options.turns >= 1, "simulation needs at least one turn");
  if (pattern.kind == PatternSpec::Kind::Pattern) {
    PARRONDO_REQUIRE(pattern.r >= 1 && pattern.s >= 1, "pattern [r,s] needs r, s >= 1");
  }
  if (options.record_occupancy) PARRONDO_REQUIRE(n <= 16, "occupancy counts need n <= 16");

  Engine rng(options.seed);
  const std::uint32_t mask = (std::uint32_t{1} << n) - 1u;
  std::uint32_t state;
  if (options.initial) {
    PARRONDO_REQUIRE(options.initial->n() == n, "initial configuration has the wrong size");
    state = options.initial->code();
  } else {
    state = static_cast<std::uint32_t>(rng()) & mask;
  }

  SimulationRun run{n, params, pattern, options.turns, options.seed, Configuration(n, state),
                    Configuration(n, state), 0, 0.0, 0.0, {}, {}};
  if (options.record_occupancy) run.occupancy.assign(std::size_t{1} << n, 0);

  const std::array<double, 4> p_b = params.values();
  const double gamma = pattern.kind == PatternSpec::Kind::Mixture ? to_double(pattern.gamma) : 0.0;
  const int period = pattern.kind == PatternSpec::Kind::Pattern ? pattern.r + pattern.s : 1;
  const int plays_a = pattern.kind == PatternSpec::Kind::Pattern ? pattern.r : 0;

  const std::uint64_t turns = options.turns;
  const std::uint64_t stride =
      std::max<std::uint64_t>(1, (turns + options.max_checkpoints - 1) /
                                     std::max<std::size_t>(1, options.max_checkpoints));
  const std::size_t batches = std::max<std::size_t>(1, std::min<std::uint64_t>(options.batches, turns));
  const std::uint64_t batch_len = turns / batches;
  std::vector<double> batch_means;
  batch_means.reserve(batches);

  std::int64_t total = 0;
  std::int64_t batch_total = 0;
  int phase = 0;
  for (std::uint64_t t = 1; t <= turns; ++t) {
    const std::uint32_t i = below(rng, static_cast<std::uint32_t>(n));  // player i+1
    bool play_a;
    switch (pattern.kind) {
      case PatternSpec::Kind::Pattern:
        play_a = phase < plays_a;
        if (++phase == period) phase = 0;
        break;
      case PatternSpec::Kind::Mixture:
        play_a = unit(rng) < gamma;
        break;
      default:
        play_a = false;
    }
    double p = 0.5;
    if (!play_a) {
      const std::uint32_t left = (state >> (i == 0 ? n - 1 : i - 1)) & 1u;
      const std::uint32_t right = (state >> (i + 1 == static_cast<std::uint32_t>(n) ? 0 : i + 1)) & 1u;
      p = p_b[2 * left + right];
    }
    if (unit(rng) < p) {
      state |= 1u << i;
      ++total;
      ++batch_total;
    } else {
      state &= ~(1u << i);
      --total;
      --batch_total;
    }
    if (options.record_occupancy) ++run.occupancy[state];
    if (t % stride == 0 || t == turns) {
      run.trajectory.push_back({t, static_cast<double>(total) / static_cast<double>(t)});
    }
    if (batch_len > 0 && t % batch_len == 0 && batch_means.size() < batches) {
      batch_means.push_back(static_cast<double>(batch_total) / static_cast<double>(batch_len));
      batch_total = 0;
    }
  }
  run.final_state = Configuration(n, state);
  run.total_payoff = total;
  run.final_mean = static_cast<double>(total) / static_cast<double>(turns);
  run.standard_error = standard_error_of(batch_means);
  return run;
}

SllnReport slln_check(int n, const ParamVector<double>& params, const PatternSpec& pattern,
                      std::uint64_t turns, std::size_t replications, std::uint64_t seed,
                      std::optional<double> reference, std::size_t jobs, double threshold) {
  PARRONDO_REQUIRE(replications >= 1, "need at least one replication");
  SllnReport report;
  report.exact_mu = mean(n, params, pattern).mu;
  report.reference = reference.value_or(report.exact_mu);
  report.threshold = threshold;
  report.final_means.resize(replications);
  std::vector<double> errors(replications);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < replications; k = next++) {
      SimulationOptions opts;
      opts.turns = turns;
      opts.seed = stream_seed(seed, k);
      opts.max_checkpoints = 1;
      auto run = simulate(n, params, pattern, opts);
      report.final_means[k] = run.final_mean;
      errors[k] = run.standard_error;
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, replications);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  double pooled_var = 0.0;
  for (std::size_t k = 0; k < replications; ++k) {
    report.mean_of_means += report.final_means[k];
    pooled_var += errors[k] * errors[k];
    const double diff = report.final_means[k] - report.reference;
    const double z = diff == 0.0 ? 0.0 : diff / errors[k];
    report.z_scores.push_back(z);
    if (!(std::fabs(z) <= threshold)) report.flagged = true;
  }
  const auto reps = static_cast<double>(replications);
  report.mean_of_means /= reps;
  report.standard_error = std::sqrt(pooled_var) / reps;
  const double diff = report.mean_of_means - report.reference;
  report.z = diff == 0.0 ? 0.0 : diff / report.standard_error;
  if (!(std::fabs(report.z) <= threshold)) report.flagged = true;
  return report;
}

}  // namespace parrondo
