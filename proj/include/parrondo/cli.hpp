#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parrondo/game.hpp"
#include "parrondo/region.hpp"

namespace parrondo::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitSolver = 3,
  kExitCheckFailed = 4,
};

/// One fully resolved invocation. Probabilities keep their input spelling so
/// fractions survive a JSON round trip.
struct JobConfig {
  std::string command;
  std::optional<int> n;
  std::optional<std::pair<int, int>> n_range;
  std::vector<std::string> params;  // p0, p1, p2, p3
  std::vector<PatternSpec> patterns;
  std::string group = "auto";
  std::string mode = "float";
  std::uint64_t turns = 1'000'000;
  std::uint64_t seed = 1;
  int resolution = 64;
  std::size_t jobs = 1;
  std::string out;
  std::string format = "text";

  // simulate
  std::size_t replications = 1;
  std::optional<double> reference;
  bool check = false;
  // region
  bool reflect = false;
  Subcube subcube;
  std::size_t samples = 0;
  // ergodicity
  bool volumes = false;

  /// The values of N the job covers, in order.
  std::vector<int> n_values() const;

  friend bool operator==(const JobConfig&, const JobConfig&) = default;
};

nlohmann::json to_json(const JobConfig& config);
JobConfig job_config_from_json(const nlohmann::json& j);

nlohmann::json pattern_to_json(const PatternSpec& spec);
PatternSpec pattern_from_json(const nlohmann::json& j);

/// "1,0.16,0.16,0.7" or "p0,p1,p3" (p2 := p1). Throws ContractViolation.
std::vector<std::string> split_params(const std::string& text);
/// "A:B" with 3 <= A <= B <= 24.
std::pair<int, int> parse_n_range(const std::string& text);
/// "r,s" with r, s >= 1.
PatternSpec parse_pattern(const std::string& text);
/// "a:b,c:d,e:f" for the p0, p3 and p1 axes.
Subcube parse_subcube(const std::string& text);
/// Non-negative integer, also written as "1e7".
std::uint64_t parse_count(const std::string& text);

/// Rejects invalid combinations; the message names the violated constraint.
void validate(const JobConfig& config);

/// Entry point shared by the tool and the tests. args excludes the program
/// name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parrondo::cli
