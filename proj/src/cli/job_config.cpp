#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "parrondo/cli.hpp"
#include "parrondo/errors.hpp"

namespace parrondo::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ContractViolation(std::string(what) + ": expected an integer, got '" + text + "'");
}

json interval_to_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

Interval interval_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

const std::set<std::string> kCommands{"mean", "table", "simulate", "region", "ergodicity"};

}  // namespace

std::vector<int> JobConfig::n_values() const {
  std::vector<int> out;
  if (n_range) {
    for (int k = n_range->first; k <= n_range->second; ++k) out.push_back(k);
  } else if (n) {
    out.push_back(*n);
  }
  return out;
}

std::vector<std::string> split_params(const std::string& text) {
  std::vector<std::string> parts;
  for (const auto& p : split(text, ',')) parts.push_back(trim(p));
  PARRONDO_REQUIRE(parts.size() == 3 || parts.size() == 4,
                   "--params needs four probabilities p0,p1,p2,p3 (or three, p0,p1,p3)");
  for (const auto& p : parts) {
    Rational v;
    try {
      v = parse_scalar<Rational>(p);
    } catch (const std::exception&) {
      throw ContractViolation("--params: cannot parse probability '" + p + "'");
    }
    PARRONDO_REQUIRE(v >= 0 && v <= 1, "--params: probability '" + p + "' outside [0,1]");
  }
  if (parts.size() == 3) parts.insert(parts.begin() + 2, parts[1]);
  return parts;
}

std::pair<int, int> parse_n_range(const std::string& text) {
  const auto parts = split(text, ':');
  PARRONDO_REQUIRE(parts.size() == 2, "--n-range must look like A:B");
  const int a = parse_int(trim(parts[0]), "--n-range");
  const int b = parse_int(trim(parts[1]), "--n-range");
  PARRONDO_REQUIRE(a >= kMinPlayers && b <= kMaxPlayers && a <= b,
                   "--n-range needs 3 <= A <= B <= 24");
  return {a, b};
}

PatternSpec parse_pattern(const std::string& text) {
  const auto parts = split(text, ',');
  PARRONDO_REQUIRE(parts.size() == 2, "--pattern must look like r,s");
  const int r = parse_int(trim(parts[0]), "--pattern");
  const int s = parse_int(trim(parts[1]), "--pattern");
  PARRONDO_REQUIRE(r >= 1 && s >= 1, "--pattern needs r >= 1 and s >= 1");
  return PatternSpec::pattern(r, s);
}

Subcube parse_subcube(const std::string& text) {
  const auto axes = split(text, ',');
  PARRONDO_REQUIRE(axes.size() == 3, "--subcube must look like a:b,c:d,e:f (p0, p3, p1)");
  std::array<Interval, 3> iv;
  for (int k = 0; k < 3; ++k) {
    const auto ends = split(axes[k], ':');
    PARRONDO_REQUIRE(ends.size() == 2, "--subcube axis must look like lo:hi");
    try {
      iv[k] = {parse_scalar<double>(trim(ends[0])), parse_scalar<double>(trim(ends[1]))};
    } catch (const std::exception&) {
      throw ContractViolation("--subcube: cannot parse '" + axes[k] + "'");
    }
    PARRONDO_REQUIRE(iv[k].lo >= 0.0 && iv[k].hi <= 1.0 && iv[k].lo < iv[k].hi,
                     "--subcube bounds must satisfy 0 <= lo < hi <= 1");
  }
  return {iv[0], iv[1], iv[2]};
}

std::uint64_t parse_count(const std::string& text) {
  double v;
  try {
    v = parse_scalar<double>(trim(text));
  } catch (const std::exception&) {
    throw ContractViolation("expected a count, got '" + text + "'");
  }
  PARRONDO_REQUIRE(v >= 0 && v < 0x1.0p63 && std::floor(v) == v,
                   "expected a non-negative integer count, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

json pattern_to_json(const PatternSpec& spec) {
  switch (spec.kind) {
    case PatternSpec::Kind::GameB:
      return {{"kind", "B"}};
    case PatternSpec::Kind::Pattern:
      return {{"kind", "pattern"}, {"r", spec.r}, {"s", spec.s}};
    case PatternSpec::Kind::Mixture:
      return {{"kind", "mixture"}, {"gamma", spec.gamma.get_str()}};
  }
  return {};
}

PatternSpec pattern_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "B") return PatternSpec::game_b();
  if (kind == "pattern") return PatternSpec::pattern(j.at("r").get<int>(), j.at("s").get<int>());
  if (kind == "mixture") return PatternSpec::mixture(parse_scalar<Rational>(j.at("gamma").get<std::string>()));
  throw ContractViolation("unknown game kind '" + kind + "'");
}

json to_json(const JobConfig& c) {
  json j;
  j["command"] = c.command;
  j["n"] = c.n ? json(*c.n) : json(nullptr);
  j["n_range"] = c.n_range ? json::array({c.n_range->first, c.n_range->second}) : json(nullptr);
  j["params"] = c.params;
  j["patterns"] = json::array();
  for (const auto& p : c.patterns) j["patterns"].push_back(pattern_to_json(p));
  j["group"] = c.group;
  j["mode"] = c.mode;
  j["turns"] = c.turns;
  j["seed"] = c.seed;
  j["resolution"] = c.resolution;
  j["jobs"] = c.jobs;
  j["out"] = c.out;
  j["format"] = c.format;
  j["replications"] = c.replications;
  j["reference"] = c.reference ? json(*c.reference) : json(nullptr);
  j["check"] = c.check;
  j["reflect"] = c.reflect;
  j["subcube"] = {{"p0", interval_to_json(c.subcube.p0)},
                  {"p3", interval_to_json(c.subcube.p3)},
                  {"p1", interval_to_json(c.subcube.p1)}};
  j["samples"] = c.samples;
  j["volumes"] = c.volumes;
  return j;
}

JobConfig job_config_from_json(const json& j) {
  JobConfig c;
  c.command = j.at("command").get<std::string>();
  if (!j.at("n").is_null()) c.n = j.at("n").get<int>();
  if (!j.at("n_range").is_null()) c.n_range = {j.at("n_range").at(0).get<int>(), j.at("n_range").at(1).get<int>()};
  c.params = j.at("params").get<std::vector<std::string>>();
  for (const auto& p : j.at("patterns")) c.patterns.push_back(pattern_from_json(p));
  c.group = j.at("group").get<std::string>();
  c.mode = j.at("mode").get<std::string>();
  c.turns = j.at("turns").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.resolution = j.at("resolution").get<int>();
  c.jobs = j.at("jobs").get<std::size_t>();
  c.out = j.at("out").get<std::string>();
  c.format = j.at("format").get<std::string>();
  c.replications = j.at("replications").get<std::size_t>();
  if (!j.at("reference").is_null()) c.reference = j.at("reference").get<double>();
  c.check = j.at("check").get<bool>();
  c.reflect = j.at("reflect").get<bool>();
  const auto& sc = j.at("subcube");
  c.subcube = {interval_from_json(sc.at("p0")), interval_from_json(sc.at("p3")),
               interval_from_json(sc.at("p1"))};
  c.samples = j.at("samples").get<std::size_t>();
  c.volumes = j.at("volumes").get<bool>();
  return c;
}

void validate(const JobConfig& c) {
  PARRONDO_REQUIRE(kCommands.count(c.command), "unknown command '" + c.command + "'");
  PARRONDO_REQUIRE(c.format == "text" || c.format == "csv" || c.format == "json",
                   "--format must be csv or json");
  PARRONDO_REQUIRE(c.mode == "float" || c.mode == "rational", "--mode must be rational or float");
  PARRONDO_REQUIRE(c.group == "auto" || c.group == "cyclic" || c.group == "dihedral",
                   "--group must be cyclic, dihedral or auto");
  PARRONDO_REQUIRE(!(c.n && c.n_range), "--n and --n-range are mutually exclusive");
  if (c.n) {
    PARRONDO_REQUIRE(*c.n >= kMinPlayers && *c.n <= kMaxPlayers, "--n must lie in [3, 24]");
  }
  if (c.n_range) {
    PARRONDO_REQUIRE(c.n_range->first >= kMinPlayers && c.n_range->second <= kMaxPlayers &&
                         c.n_range->first <= c.n_range->second,
                     "--n-range needs 3 <= A <= B <= 24");
  }
  PARRONDO_REQUIRE(c.params.empty() || c.params.size() == 4, "--params needs four probabilities");
  PARRONDO_REQUIRE(c.jobs >= 1, "--jobs must be at least 1");

  const bool needs_params = c.command != "ergodicity" || !c.volumes;
  if (needs_params && c.command != "region") {
    PARRONDO_REQUIRE(!c.params.empty(), "--params is required for " + c.command);
  }
  if (c.command == "region") {
    PARRONDO_REQUIRE(c.params.empty(), "region scans the (p0, p3, p1) cube; --params does not apply");
  }
  const bool has_dihedral = c.group == "dihedral";
  if (has_dihedral && !c.params.empty()) {
    PARRONDO_REQUIRE(parse_scalar<Rational>(c.params[1]) == parse_scalar<Rational>(c.params[2]),
                     "--group dihedral requires p1 == p2");
  }

  if (c.command == "mean" || c.command == "simulate" || c.command == "region") {
    PARRONDO_REQUIRE(c.n || c.n_range, "--n (or --n-range) is required for " + c.command);
    PARRONDO_REQUIRE(c.patterns.size() == 1,
                     "exactly one of --pattern, --game b, --mixture is required for " + c.command);
  }
  if (c.command == "table") {
    PARRONDO_REQUIRE(c.n || c.n_range, "--n-range (or --n) is required for table");
    PARRONDO_REQUIRE(!c.patterns.empty(), "table needs at least one game");
  }
  if (c.command == "simulate") {
    PARRONDO_REQUIRE(c.n.has_value(), "simulate takes a single --n");
    PARRONDO_REQUIRE(c.turns >= 1, "--turns must be at least 1");
    PARRONDO_REQUIRE(c.replications >= 1, "--replications must be at least 1");
    PARRONDO_REQUIRE(c.mode == "float", "simulate runs in float mode only");
  }
  if (c.command == "region") {
    PARRONDO_REQUIRE(c.n.has_value(), "region takes a single --n");
    PARRONDO_REQUIRE(c.patterns.front().kind != PatternSpec::Kind::GameB,
                     "region compares game B with a pattern or mixture; --game b does not apply");
    PARRONDO_REQUIRE(c.resolution >= 2, "--resolution must be at least 2");
    PARRONDO_REQUIRE(c.mode == "float", "region runs in float mode only");
  }
  if (c.command == "ergodicity") {
    PARRONDO_REQUIRE(c.patterns.size() <= 1, "ergodicity takes at most one --mixture");
    if (!c.patterns.empty()) {
      PARRONDO_REQUIRE(c.patterns.front().kind == PatternSpec::Kind::Mixture,
                       "ergodicity accepts --mixture only");
    }
    if (c.volumes) PARRONDO_REQUIRE(c.samples >= kMinConditionSamples, "--samples must be at least 10000");
  }
}

}  // namespace parrondo::cli
