#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "parrondo/game.hpp"

namespace parrondo {

enum class Label { Neither, Parrondo, AntiParrondo };

const char* to_string(Label label);

/// |mu| below this counts as zero on the non-strict side of each inequality.
inline constexpr double kTieTolerance = 1e-12;

/// Parrondo: mu_b <= 0 and mu_pattern > 0. Anti-Parrondo: mu_b >= 0 and
/// mu_pattern < 0.
Label label_of(double mu_b, double mu_pattern);

/// A point of the (p0, p3, p1) cube; p2 is p1.
struct RegionPoint {
  double p0 = 0.0;
  double p3 = 0.0;
  double p1 = 0.0;
  double mu_b = 0.0;
  double mu_pattern = 0.0;
  Label label = Label::Neither;
};

RegionPoint classify_point(double p0, double p1, double p3, const PatternSpec& pattern, int n);

/// (p0, p1, p3) -> (1 - p3, 1 - p1, 1 - p0). Maps the Parrondo region onto
/// the anti-Parrondo region.
std::array<double, 3> symmetry_map(double p0, double p1, double p3);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Subcube {
  Interval p0;
  Interval p3;
  Interval p1;

  friend bool operator==(const Subcube&, const Subcube&) = default;
};

struct ScanOptions {
  int resolution = 64;
  Subcube subcube;
  std::size_t jobs = 1;
  bool keep_points = true;
  /// Classify Lambda(x) in place of each grid midpoint x.
  bool reflect = false;
};

struct ScanResult {
  int n = 0;
  PatternSpec pattern;
  int resolution = 0;
  Subcube subcube;
  /// Ordered by grid index ((i0 * R) + i3) * R + i1.
  std::vector<RegionPoint> points;
  std::size_t parrondo_cells = 0;
  std::size_t anti_cells = 0;
  double cell_volume = 0.0;
  double parrondo_volume = 0.0;
  double anti_volume = 0.0;
  /// Half the volume of the labelled cells that touch a differently
  /// labelled neighbour.
  double parrondo_error = 0.0;
  double anti_error = 0.0;
};

/// Midpoint-rule scan of the open cube (or a subcube).
ScanResult scan(int n, const PatternSpec& pattern, const ScanOptions& options);

struct VolumeEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

struct RegionSample {
  VolumeEstimate parrondo;
  VolumeEstimate anti;
  std::size_t samples = 0;
};

/// Monte Carlo region volumes from uniform points of the open unit cube.
RegionSample sample_volumes(int n, const PatternSpec& pattern, std::size_t samples,
                            std::uint64_t seed, std::size_t jobs = 1);

struct ConditionReport {
  std::array<bool, 4> holds{};
  bool in_union = false;
  double p_bar = 0.0;
};

/// Sufficient conditions for ergodicity of the infinite-lattice spin system,
/// evaluated literally. With `gamma`, p_m is first replaced by
/// gamma/2 + (1 - gamma) p_m.
template <Scalar T>
ConditionReport ergodicity_conditions(const ParamVector<T>& params,
                                      std::optional<T> gamma = std::nullopt);

struct ConditionVolumes {
  std::array<VolumeEstimate, 4> conditions;
  VolumeEstimate any;
  std::size_t samples = 0;
};

inline constexpr std::size_t kMinConditionSamples = 10'000;

/// Volumes of the condition regions in the (p0, p1, p3) cube with p2 = p1.
ConditionVolumes condition_volumes(std::size_t samples, std::uint64_t seed);

}  // namespace parrondo
