#include "parrondo/region.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "parrondo/means.hpp"

namespace parrondo {

const char* to_string(Label label) {
  switch (label) {
    case Label::Parrondo:
      return "parrondo";
    case Label::AntiParrondo:
      return "anti-parrondo";
    case Label::Neither:
      break;
  }
  return "neither";
}

Label label_of(double mu_b, double mu_pattern) {
  if (mu_b <= kTieTolerance && mu_pattern > kTieTolerance) return Label::Parrondo;
  if (mu_b >= -kTieTolerance && mu_pattern < -kTieTolerance) return Label::AntiParrondo;
  return Label::Neither;
}

RegionPoint classify_point(double p0, double p1, double p3, const PatternSpec& pattern, int n) {
  PARRONDO_REQUIRE(pattern.kind != PatternSpec::Kind::GameB,
                   "the combined game must be a pattern or a mixture");
  const ParamVector<double> params(p0, p1, p1, p3);
  RegionPoint point{p0, p3, p1, 0.0, 0.0, Label::Neither};
  point.mu_b = mean_game_b(n, params).mu;
  point.mu_pattern = mean(n, params, pattern).mu;
  point.label = label_of(point.mu_b, point.mu_pattern);
  return point;
}

std::array<double, 3> symmetry_map(double p0, double p1, double p3) {
  return {1.0 - p3, 1.0 - p1, 1.0 - p0};
}

namespace {

// Runs body(k) for k in [0, count) on `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& body) {
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t start = next.fetch_add(kChunk); start < count; start = next.fetch_add(kChunk)) {
      const std::size_t end = std::min(count, start + kChunk);
      for (std::size_t k = start; k < end; ++k) body(k);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, jobs);
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

double midpoint(const Interval& iv, int index, int resolution) {
  return iv.lo + (iv.hi - iv.lo) * (index + 0.5) / resolution;
}

}  // namespace

ScanResult scan(int n, const PatternSpec& pattern, const ScanOptions& options) {
  const int res = options.resolution;
  PARRONDO_REQUIRE(res >= 2, "scan resolution must be at least 2");
  for (const Interval* iv : {&options.subcube.p0, &options.subcube.p3, &options.subcube.p1}) {
    PARRONDO_REQUIRE(iv->lo >= 0.0 && iv->hi <= 1.0 && iv->lo < iv->hi,
                     "subcube bounds must satisfy 0 <= lo < hi <= 1");
  }
  const auto r = static_cast<std::size_t>(res);
  const std::size_t cells = r * r * r;

  ScanResult result;
  result.n = n;
  result.pattern = pattern;
  result.resolution = res;
  result.subcube = options.subcube;
  std::vector<Label> labels(cells, Label::Neither);
  if (options.keep_points) result.points.resize(cells);

  parallel_for(cells, options.jobs, [&](std::size_t k) {
    const int i0 = static_cast<int>(k / (r * r));
    const int i3 = static_cast<int>((k / r) % r);
    const int i1 = static_cast<int>(k % r);
    double p0 = midpoint(options.subcube.p0, i0, res);
    double p3 = midpoint(options.subcube.p3, i3, res);
    double p1 = midpoint(options.subcube.p1, i1, res);
    if (options.reflect) {
      const auto image = symmetry_map(p0, p1, p3);
      p0 = image[0];
      p1 = image[1];
      p3 = image[2];
    }
    RegionPoint point = classify_point(p0, p1, p3, pattern, n);
    labels[k] = point.label;
    if (options.keep_points) result.points[k] = point;
  });

  const auto& sc = options.subcube;
  result.cell_volume =
      (sc.p0.hi - sc.p0.lo) * (sc.p3.hi - sc.p3.lo) * (sc.p1.hi - sc.p1.lo) / static_cast<double>(cells);
  std::size_t parrondo_edge = 0;
  std::size_t anti_edge = 0;
  for (std::size_t k = 0; k < cells; ++k) {
    const Label label = labels[k];
    if (label == Label::Neither) continue;
    (label == Label::Parrondo ? result.parrondo_cells : result.anti_cells) += 1;
    const std::array<std::size_t, 3> coord{k / (r * r), (k / r) % r, k % r};
    const std::array<std::size_t, 3> stride{r * r, r, 1};
    bool edge = false;
    for (int axis = 0; axis < 3 && !edge; ++axis) {
      if (coord[axis] > 0 && labels[k - stride[axis]] != label) edge = true;
      if (coord[axis] + 1 < r && labels[k + stride[axis]] != label) edge = true;
    }
    if (edge) (label == Label::Parrondo ? parrondo_edge : anti_edge) += 1;
  }
  result.parrondo_volume = static_cast<double>(result.parrondo_cells) * result.cell_volume;
  result.anti_volume = static_cast<double>(result.anti_cells) * result.cell_volume;
  result.parrondo_error = 0.5 * static_cast<double>(parrondo_edge) * result.cell_volume;
  result.anti_error = 0.5 * static_cast<double>(anti_edge) * result.cell_volume;
  return result;
}

namespace {

VolumeEstimate proportion(std::size_t hits, std::size_t samples) {
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

double open_unit(std::mt19937_64& rng) {
  // (0,1): midpoint of a 2^-53 cell
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

RegionSample sample_volumes(int n, const PatternSpec& pattern, std::size_t samples,
                            std::uint64_t seed, std::size_t jobs) {
  PARRONDO_REQUIRE(samples >= 1, "need at least one sample");
  std::mt19937_64 rng(seed);
  std::vector<std::array<double, 3>> points(samples);
  for (auto& pt : points) {
    for (double& v : pt) v = open_unit(rng);
  }
  std::vector<Label> labels(samples);
  parallel_for(samples, jobs, [&](std::size_t k) {
    const auto& [p0, p3, p1] = points[k];
    labels[k] = classify_point(p0, p1, p3, pattern, n).label;
  });
  const auto parrondo = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Parrondo));
  const auto anti = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::AntiParrondo));
  return {proportion(parrondo, samples), proportion(anti, samples), samples};
}

template <Scalar T>
ConditionReport ergodicity_conditions(const ParamVector<T>& params, std::optional<T> gamma) {
  const ParamVector<T> eff = gamma ? params.mixed_with_fair(*gamma) : params;
  const T& p0 = eff.p(0);
  const T& p1 = eff.p(1);
  const T& p2 = eff.p(2);
  const T& p3 = eff.p(3);
  auto absdiff = [](const T& a, const T& b) { return T(a > b ? T(a - b) : T(b - a)); };
  using std::max;
  using std::min;

  ConditionReport report;
  report.holds[0] = T(max(absdiff(p0, p1), absdiff(p2, p3)) + max(absdiff(p0, p2), absdiff(p1, p3))) < T(1);
  report.holds[1] = T(0) < min(p0, p3) && min(p0, p3) <= min(p1, p2) && min(p1, p2) <= max(p1, p2) &&
                    max(p1, p2) <= max(p0, p3) && max(p0, p3) < T(1);
  const T skew = p1 + p2 - p3;
  const T upper = max(max(p1, p2), max(p3, skew));
  const T lower = min(min(p1, p2), min(p3, skew));
  const T half_p0 = p0 / T(2);
  report.holds[2] = T(upper - p3) < half_p0 && half_p0 < lower;
  const T p_bar = (p0 + p1 + p2 + p3) / T(4);
  const T lo = max(T(2 * p_bar - 1), T(0));
  const T hi = min(T(2 * p_bar), T(1));
  report.holds[3] = std::all_of(eff.values().begin(), eff.values().end(),
                                [&](const T& v) { return lo < v && v < hi; });
  report.in_union = report.holds[0] || report.holds[1] || report.holds[2] || report.holds[3];
  report.p_bar = to_double(p_bar);
  return report;
}

template ConditionReport ergodicity_conditions(const ParamVector<double>&, std::optional<double>);
template ConditionReport ergodicity_conditions(const ParamVector<Rational>&, std::optional<Rational>);

ConditionVolumes condition_volumes(std::size_t samples, std::uint64_t seed) {
  PARRONDO_REQUIRE(samples >= kMinConditionSamples, "condition volumes need at least 10000 samples");
  std::mt19937_64 rng(seed);
  std::array<std::size_t, 4> hits{};
  std::size_t any = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double p0 = open_unit(rng);
    const double p1 = open_unit(rng);
    const double p3 = open_unit(rng);
    const auto report = ergodicity_conditions(ParamVector<double>(p0, p1, p1, p3));
    for (int c = 0; c < 4; ++c) hits[c] += report.holds[c] ? 1 : 0;
    any += report.in_union ? 1 : 0;
  }
  ConditionVolumes out;
  for (int c = 0; c < 4; ++c) out.conditions[c] = proportion(hits[c], samples);
  out.any = proportion(any, samples);
  out.samples = samples;
  return out;
}

}  // namespace parrondo
