#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "parrondo/cli.hpp"
#include "parrondo/errors.hpp"
#include "parrondo/means.hpp"
#include "parrondo/montecarlo.hpp"

namespace parrondo::cli {

using nlohmann::json;

namespace {

constexpr int kTableWarnAbove = 14;
constexpr double kFlagThreshold = 4.0;

GroupChoice group_choice(const std::string& name) {
  if (name == "cyclic") return GroupChoice::Cyclic;
  if (name == "dihedral") return GroupChoice::Dihedral;
  return GroupChoice::Auto;
}

template <Scalar T>
ParamVector<T> params_of(const JobConfig& c) {
  return {parse_scalar<T>(c.params[0]), parse_scalar<T>(c.params[1]), parse_scalar<T>(c.params[2]),
          parse_scalar<T>(c.params[3])};
}

std::string column_name(const PatternSpec& spec) {
  switch (spec.kind) {
    case PatternSpec::Kind::GameB:
      return "mu_B";
    case PatternSpec::Kind::Pattern:
      return "mu_" + std::to_string(spec.r) + "_" + std::to_string(spec.s);
    case PatternSpec::Kind::Mixture: {
      auto g = spec.gamma.get_str();
      std::replace(g.begin(), g.end(), '/', '_');
      return "mu_mix_" + g;
    }
  }
  return "mu";
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct MeanRow {
  int n = 0;
  PatternSpec pattern;
  double mu = 0.0;
  std::optional<std::string> exact;
  int case_id = 0;
  std::size_t class_count = 0;
  double residual = 0.0;
  std::string method;
  bool forced = false;
};

MeanRow compute_row(const JobConfig& c, int n, const PatternSpec& pattern) {
  MeanRow row;
  row.n = n;
  row.pattern = pattern;
  auto fill = [&](const auto& report) {
    row.case_id = report.case_id;
    row.class_count = report.class_count;
    row.residual = report.residual;
    row.method = to_string(report.method);
    row.forced = report.forced;
  };
  if (c.mode == "rational") {
    const auto report = mean(n, params_of<Rational>(c), pattern, group_choice(c.group));
    row.mu = to_double(report.mu);
    row.exact = report.mu.get_str();
    fill(report);
  } else {
    const auto report = mean(n, params_of<double>(c), pattern, group_choice(c.group));
    row.mu = report.mu;
    fill(report);
  }
  return row;
}

json row_to_json(const MeanRow& row) {
  return {{"n", row.n},
          {"game", pattern_to_json(row.pattern)},
          {"mu", row.mu},
          {"mu_6sd", format_significant(row.mu, 6)},
          {"exact", row.exact ? json(*row.exact) : json(nullptr)},
          {"case_id", row.case_id},
          {"class_count", row.class_count},
          {"residual", row.residual},
          {"method", row.method},
          {"forced", row.forced}};
}

json diagnostics_of(const std::vector<MeanRow>& rows) {
  double residual = 0.0;
  std::size_t classes = 0;
  for (const auto& r : rows) {
    residual = std::max(residual, r.residual);
    classes = std::max(classes, r.class_count);
  }
  return {{"residual", residual},
          {"case_id", rows.empty() ? 0 : rows.front().case_id},
          {"class_count", classes}};
}

struct Output {
  json result;
  json diagnostics;
  std::string csv;
  std::string text;
  int exit_code = kExitOk;
};

Output cmd_mean(const JobConfig& c) {
  Output o;
  std::vector<MeanRow> rows;
  for (int n : c.n_values()) rows.push_back(compute_row(c, n, c.patterns.front()));
  o.result["rows"] = json::array();
  for (const auto& r : rows) o.result["rows"].push_back(row_to_json(r));
  if (rows.size() == 1) o.result["mu"] = rows.front().mu;
  o.diagnostics = diagnostics_of(rows);

  std::ostringstream csv;
  std::ostringstream text;
  csv << "n,kind,r,s,gamma,mu,mu_6sd,exact,case_id,class_count,residual\n";
  for (const auto& r : rows) {
    const auto& p = r.pattern;
    const char* kind = p.kind == PatternSpec::Kind::GameB     ? "B"
                       : p.kind == PatternSpec::Kind::Pattern ? "pattern"
                                                              : "mixture";
    csv << r.n << ',' << kind << ',' << p.r << ',' << p.s << ',' << p.gamma.get_str() << ','
        << format_shortest(r.mu) << ',' << format_significant(r.mu, 6) << ',' << r.exact.value_or("")
        << ',' << r.case_id << ',' << r.class_count << ',' << format_shortest(r.residual) << '\n';
    text << "n=" << r.n << " game=" << p.to_string() << " mu=" << format_shortest(r.mu)
         << " (" << format_significant(r.mu, 6) << ")";
    if (r.exact) text << " exact=" << *r.exact;
    text << " case=" << r.case_id << " classes=" << r.class_count << '\n';
  }
  o.csv = csv.str();
  o.text = text.str();
  return o;
}

Output cmd_table(const JobConfig& c, std::ostream& err) {
  Output o;
  const auto ns = c.n_values();
  if (!ns.empty() && ns.back() > kTableWarnAbove) {
    err << "warning: N above " << kTableWarnAbove << " may take minutes per entry\n";
  }
  std::vector<MeanRow> all;
  std::ostringstream csv;
  csv << "N";
  for (const auto& p : c.patterns) csv << ',' << column_name(p);
  csv << '\n';
  o.result["columns"] = json::array();
  for (const auto& p : c.patterns) o.result["columns"].push_back(column_name(p));
  o.result["rows"] = json::array();
  for (int n : ns) {
    json values = json::object();
    json rounded = json::object();
    csv << n;
    for (const auto& p : c.patterns) {
      auto row = compute_row(c, n, p);
      values[column_name(p)] = row.mu;
      rounded[column_name(p)] = format_significant(row.mu, 6);
      csv << ',' << format_significant(row.mu, 6);
      all.push_back(std::move(row));
    }
    csv << '\n';
    o.result["rows"].push_back({{"n", n}, {"values", values}, {"rounded", rounded}});
  }
  o.diagnostics = diagnostics_of(all);
  o.csv = csv.str();
  o.text = o.csv;
  return o;
}

Output cmd_simulate(const JobConfig& c, std::ostream& err) {
  Output o;
  const int n = *c.n;
  const auto params = params_of<double>(c);
  const auto& pattern = c.patterns.front();

  std::optional<double> exact;
  std::optional<ProfitReport<double>> report;
  try {
    report = mean(n, params, pattern, group_choice(c.group));
    exact = report->mu;
  } catch (const UnsupportedBoundary& e) {
    err << "note: no exact mean (" << e.what() << ")\n";
  }
  const std::optional<double> reference = c.reference ? c.reference : exact;
  std::ostringstream csv;
  std::ostringstream text;
  bool flagged = false;

  if (c.replications == 1) {
    SimulationOptions opts;
    opts.turns = c.turns;
    opts.seed = c.seed;
    const auto run = simulate(n, params, pattern, opts);
    std::optional<double> z;
    if (reference) {
      const double diff = run.final_mean - *reference;
      z = diff == 0.0 ? 0.0 : diff / run.standard_error;
      flagged = !(std::fabs(*z) <= kFlagThreshold);
    }
    json traj = json::array();
    csv << "turn,running_mean\n";
    for (const auto& cp : run.trajectory) {
      traj.push_back({cp.turn, cp.running_mean});
      csv << cp.turn << ',' << format_shortest(cp.running_mean) << '\n';
    }
    o.result = {{"initial", run.initial.to_string()},
                {"final_state", run.final_state.to_string()},
                {"total_payoff", run.total_payoff},
                {"final_mean", run.final_mean},
                {"standard_error", nullable(run.standard_error)},
                {"exact_mu", exact ? json(*exact) : json(nullptr)},
                {"reference", reference ? json(*reference) : json(nullptr)},
                {"z", z ? nullable(*z) : json(nullptr)},
                {"flagged", flagged},
                {"trajectory", traj}};
    text << "turns=" << run.turns << " seed=" << run.seed << " S_T=" << run.total_payoff
         << " mean=" << format_shortest(run.final_mean)
         << " se=" << format_shortest(run.standard_error) << '\n';
    if (reference) text << "reference=" << format_shortest(*reference) << " z=" << format_shortest(*z) << '\n';
  } else {
    PARRONDO_REQUIRE(reference.has_value(), "replicated runs need an exact mean or --reference");
    const auto slln = slln_check(n, params, pattern, c.turns, c.replications, c.seed, reference,
                                 c.jobs, kFlagThreshold);
    flagged = slln.flagged;
    csv << "replication,final_mean,z\n";
    for (std::size_t k = 0; k < slln.final_means.size(); ++k) {
      csv << k << ',' << format_shortest(slln.final_means[k]) << ','
          << format_shortest(slln.z_scores[k]) << '\n';
    }
    o.result = {{"exact_mu", exact ? json(*exact) : json(nullptr)},
                {"reference", slln.reference},
                {"final_means", slln.final_means},
                {"z_scores", slln.z_scores},
                {"mean_of_means", slln.mean_of_means},
                {"standard_error", nullable(slln.standard_error)},
                {"z", nullable(slln.z)},
                {"threshold", slln.threshold},
                {"flagged", flagged}};
    text << "replications=" << c.replications << " turns=" << c.turns
         << " mean=" << format_shortest(slln.mean_of_means)
         << " se=" << format_shortest(slln.standard_error) << '\n'
         << "reference=" << format_shortest(slln.reference) << " z=" << format_shortest(slln.z) << '\n';
  }
  text << (flagged ? "FLAGGED: |z| exceeds " : "ok: |z| within ") << format_shortest(kFlagThreshold) << '\n';
  o.diagnostics = {{"residual", report ? json(report->residual) : json(nullptr)},
                   {"case_id", report ? json(report->case_id) : json(nullptr)},
                   {"class_count", report ? json(report->class_count) : json(nullptr)}};
  o.csv = csv.str();
  o.text = text.str();
  if (flagged && (c.check || c.reference)) o.exit_code = kExitCheckFailed;
  return o;
}

Output cmd_region(const JobConfig& c) {
  Output o;
  const int n = *c.n;
  const auto& pattern = c.patterns.front();
  std::ostringstream text;
  const auto classes = shared_classes(n, GroupKind::Dihedral)->class_count();
  o.diagnostics = {{"residual", nullptr}, {"case_id", 0}, {"class_count", classes}};

  if (c.samples > 0) {
    const auto s = sample_volumes(n, pattern, c.samples, c.seed, c.jobs);
    o.result = {{"samples", s.samples},
                {"parrondo_volume", s.parrondo.value},
                {"parrondo_se", s.parrondo.standard_error},
                {"anti_volume", s.anti.value},
                {"anti_se", s.anti.standard_error}};
    text << "samples=" << s.samples << " parrondo=" << format_shortest(s.parrondo.value) << " +- "
         << format_shortest(s.parrondo.standard_error) << " anti=" << format_shortest(s.anti.value)
         << " +- " << format_shortest(s.anti.standard_error) << '\n';
    o.csv = "samples,parrondo_volume,parrondo_se,anti_volume,anti_se\n" + std::to_string(s.samples) +
            ',' + format_shortest(s.parrondo.value) + ',' + format_shortest(s.parrondo.standard_error) +
            ',' + format_shortest(s.anti.value) + ',' + format_shortest(s.anti.standard_error) + '\n';
    o.text = text.str();
    return o;
  }

  ScanOptions opts;
  opts.resolution = c.resolution;
  opts.subcube = c.subcube;
  opts.jobs = c.jobs;
  opts.reflect = c.reflect;
  const auto scan_result = scan(n, pattern, opts);
  json points = json::array();
  std::ostringstream csv;
  csv << "p0,p3,p1,mu_b,mu_pattern,label\n";
  for (const auto& p : scan_result.points) {
    points.push_back({p.p0, p.p3, p.p1, p.mu_b, p.mu_pattern, to_string(p.label)});
    csv << format_shortest(p.p0) << ',' << format_shortest(p.p3) << ',' << format_shortest(p.p1) << ','
        << format_shortest(p.mu_b) << ',' << format_shortest(p.mu_pattern) << ',' << to_string(p.label)
        << '\n';
  }
  o.result = {{"resolution", scan_result.resolution},
              {"cell_volume", scan_result.cell_volume},
              {"parrondo_cells", scan_result.parrondo_cells},
              {"anti_cells", scan_result.anti_cells},
              {"parrondo_volume", scan_result.parrondo_volume},
              {"parrondo_error", scan_result.parrondo_error},
              {"anti_volume", scan_result.anti_volume},
              {"anti_error", scan_result.anti_error},
              {"columns", {"p0", "p3", "p1", "mu_b", "mu_pattern", "label"}},
              {"points", points}};
  text << "resolution=" << scan_result.resolution << " parrondo_cells=" << scan_result.parrondo_cells
       << " anti_cells=" << scan_result.anti_cells << '\n'
       << "parrondo_volume=" << format_shortest(scan_result.parrondo_volume) << " +- "
       << format_shortest(scan_result.parrondo_error) << '\n'
       << "anti_volume=" << format_shortest(scan_result.anti_volume) << " +- "
       << format_shortest(scan_result.anti_error) << '\n';
  o.csv = csv.str();
  o.text = text.str();
  return o;
}

Output cmd_ergodicity(const JobConfig& c) {
  Output o;
  static const char* const names[4] = {"cond_a", "cond_b", "cond_c", "cond_d"};
  std::ostringstream csv;
  std::ostringstream text;
  o.diagnostics = {{"residual", nullptr}, {"case_id", nullptr}, {"class_count", nullptr}};
  if (c.volumes) {
    const auto v = condition_volumes(c.samples, c.seed);
    csv << "region,volume,se\n";
    for (int k = 0; k < 4; ++k) {
      o.result[names[k]] = {{"volume", v.conditions[k].value}, {"se", v.conditions[k].standard_error}};
      csv << names[k] << ',' << format_shortest(v.conditions[k].value) << ','
          << format_shortest(v.conditions[k].standard_error) << '\n';
      text << names[k] << " volume=" << format_shortest(v.conditions[k].value) << " +- "
           << format_shortest(v.conditions[k].standard_error) << '\n';
    }
    o.result["union"] = {{"volume", v.any.value}, {"se", v.any.standard_error}};
    o.result["samples"] = v.samples;
    csv << "union," << format_shortest(v.any.value) << ',' << format_shortest(v.any.standard_error) << '\n';
    text << "union volume=" << format_shortest(v.any.value) << " +- "
         << format_shortest(v.any.standard_error) << '\n';
  } else {
    ConditionReport report;
    const bool mixed = !c.patterns.empty();
    if (c.mode == "rational") {
      std::optional<Rational> gamma;
      if (mixed) gamma = c.patterns.front().gamma;
      report = ergodicity_conditions(params_of<Rational>(c), gamma);
    } else {
      std::optional<double> gamma;
      if (mixed) gamma = to_double(c.patterns.front().gamma);
      report = ergodicity_conditions(params_of<double>(c), gamma);
    }
    csv << "cond_a,cond_b,cond_c,cond_d,in_union,p_bar\n";
    for (int k = 0; k < 4; ++k) {
      o.result[names[k]] = report.holds[k];
      csv << (report.holds[k] ? "true" : "false") << ',';
      text << names[k] << '=' << (report.holds[k] ? "true" : "false") << ' ';
    }
    o.result["in_union"] = report.in_union;
    o.result["p_bar"] = report.p_bar;
    csv << (report.in_union ? "true" : "false") << ',' << format_shortest(report.p_bar) << '\n';
    text << "in_union=" << (report.in_union ? "true" : "false")
         << " p_bar=" << format_shortest(report.p_bar) << '\n';
  }
  o.csv = csv.str();
  o.text = text.str();
  return o;
}

// Raw flag values before resolution into a JobConfig.
struct RawFlags {
  std::optional<int> n;
  std::string n_range;
  std::string params;
  std::string pattern;
  std::string game;
  std::string mixture;
  std::string group = "auto";
  std::string mode;
  std::string turns = "1000000";
  std::uint64_t seed = 1;
  int resolution = 64;
  std::size_t jobs = 1;
  std::string out;
  std::string format = "text";
  std::size_t replications = 1;
  std::optional<double> reference;
  bool check = false;
  bool reflect = false;
  std::string subcube;
  std::string samples;
  bool volumes = false;
};

JobConfig resolve(const std::string& command, const RawFlags& raw) {
  JobConfig c;
  c.command = command;
  c.n = raw.n;
  if (!raw.n_range.empty()) c.n_range = parse_n_range(raw.n_range);
  if (!raw.params.empty()) c.params = split_params(raw.params);
  const int given = !raw.pattern.empty() + !raw.game.empty() + !raw.mixture.empty();
  PARRONDO_REQUIRE(given <= 1, "--pattern, --game and --mixture are mutually exclusive");
  if (!raw.pattern.empty()) c.patterns.push_back(parse_pattern(raw.pattern));
  if (!raw.game.empty()) {
    PARRONDO_REQUIRE(raw.game == "b" || raw.game == "B", "--game accepts only b");
    c.patterns.push_back(PatternSpec::game_b());
  }
  if (!raw.mixture.empty()) {
    Rational gamma;
    try {
      gamma = parse_scalar<Rational>(raw.mixture);
    } catch (const std::exception&) {
      throw ContractViolation("--mixture: cannot parse '" + raw.mixture + "'");
    }
    PARRONDO_REQUIRE(gamma > 0 && gamma < 1, "--mixture gamma must lie in (0,1)");
    c.patterns.push_back(PatternSpec::mixture(gamma));
  }
  if (command == "table" && c.patterns.empty()) {
    for (auto [r, s] : {std::pair{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {3, 1}}) {
      c.patterns.push_back(PatternSpec::pattern(r, s));
    }
  }
  if (command == "table" && !c.n && !c.n_range) c.n_range = {3, 10};
  if (command == "region" && !c.n) c.n = 3;

  c.group = raw.group;
  if (!raw.mode.empty()) {
    c.mode = raw.mode;
  } else {
    // exact fractions on small rings are computed exactly
    const bool fractions = std::any_of(c.params.begin(), c.params.end(),
                                       [](const std::string& p) { return is_fraction_literal(p); }) ||
                           (!raw.mixture.empty() && is_fraction_literal(raw.mixture));
    const auto ns = c.n_values();
    const bool small = ns.empty() || ns.back() <= 6;
    const bool exact_command = command == "mean" || command == "table" || command == "ergodicity";
    c.mode = fractions && small && exact_command ? "rational" : "float";
  }
  c.turns = parse_count(raw.turns);
  c.seed = raw.seed;
  c.resolution = raw.resolution;
  c.jobs = raw.jobs;
  c.out = raw.out;
  c.format = raw.format;
  c.replications = raw.replications;
  c.reference = raw.reference;
  c.check = raw.check;
  c.reflect = raw.reflect;
  if (!raw.subcube.empty()) c.subcube = parse_subcube(raw.subcube);
  if (!raw.samples.empty()) c.samples = static_cast<std::size_t>(parse_count(raw.samples));
  if (command == "ergodicity" && raw.volumes && raw.samples.empty()) c.samples = 1'000'000;
  c.volumes = raw.volumes;
  return c;
}

void add_common(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--n", raw.n, "number of players on the ring (3..24)");
  sub->add_option("--params", raw.params, "p0,p1,p2,p3 or p0,p1,p3 (decimals or fractions)");
  sub->add_option("--pattern", raw.pattern, "periodic pattern r,s (A^r B^s)");
  sub->add_option("--game", raw.game, "b: game B alone");
  sub->add_option("--mixture", raw.mixture, "random mixture weight gamma of game A");
  sub->add_option("--group", raw.group, "cyclic|dihedral|auto");
  sub->add_option("--mode", raw.mode, "rational|float");
  sub->add_option("--jobs", raw.jobs, "worker threads");
  sub->add_option("--out", raw.out, "write output to FILE");
  sub->add_option("--format", raw.format, "csv|json (default: text)");
  sub->add_option("--seed", raw.seed, "RNG seed");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and simulated means of spatially dependent Parrondo games", "parrondo"};
  app.require_subcommand(1);
  RawFlags raw;

  auto* mean_cmd = app.add_subcommand("mean", "mean profit per turn");
  add_common(mean_cmd, raw);
  mean_cmd->add_option("--n-range", raw.n_range, "A:B");

  auto* table_cmd = app.add_subcommand("table", "means over a range of N, one column per pattern");
  add_common(table_cmd, raw);
  table_cmd->add_option("--n-range", raw.n_range, "A:B (default 3:10)");

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo play with running means");
  add_common(sim_cmd, raw);
  sim_cmd->add_option("--turns", raw.turns, "turns per run (1e7 accepted)");
  sim_cmd->add_option("--replications", raw.replications, "independent runs");
  sim_cmd->add_option("--reference", raw.reference, "compare against this mean instead of the exact one");
  sim_cmd->add_flag("--check", raw.check, "exit 4 when |z| exceeds 4");

  auto* region_cmd = app.add_subcommand("region", "classify the (p0, p3, p1) cube");
  add_common(region_cmd, raw);
  region_cmd->add_option("--resolution", raw.resolution, "grid points per axis");
  region_cmd->add_option("--subcube", raw.subcube, "a:b,c:d,e:f for p0, p3, p1");
  region_cmd->add_option("--samples", raw.samples, "Monte Carlo volumes instead of a grid");
  region_cmd->add_flag("--reflect", raw.reflect, "classify the reflected point at each grid node");

  auto* erg_cmd = app.add_subcommand("ergodicity", "sufficient ergodicity conditions");
  add_common(erg_cmd, raw);
  erg_cmd->add_flag("--volumes", raw.volumes, "Monte Carlo volumes of the condition regions");
  erg_cmd->add_option("--samples", raw.samples, "samples for --volumes (default 1e6)");

  std::vector<const char*> argv{"parrondo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  JobConfig config;
  Output result;
  const auto start = std::chrono::steady_clock::now();
  try {
    config = resolve(command, raw);
    validate(config);
    if (command == "mean") result = cmd_mean(config);
    if (command == "table") result = cmd_table(config, err);
    if (command == "simulate") result = cmd_simulate(config, err);
    if (command == "region") result = cmd_region(config);
    if (command == "ergodicity") result = cmd_ergodicity(config);
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UnsupportedBoundary& e) {
    err << "error: unsupported boundary parameters: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SolverFailure& e) {
    err << "error: solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const NonStochastic& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string body;
  if (config.format == "json") {
    json doc{{"config", to_json(config)}, {"result", result.result}, {"diagnostics", result.diagnostics}};
    doc["diagnostics"]["wall_time"] = wall;
    body = doc.dump(2) + "\n";
  } else if (config.format == "csv") {
    body = result.csv;
  } else {
    body = result.text;
  }
  if (config.out.empty()) {
    out << body;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << config.out << " for writing\n";
      return kExitValidation;
    }
    file << body;
    if (config.format != "text") out << result.text;
  }
  if (result.exit_code == kExitCheckFailed) err << "check failed: |z| exceeds the flag threshold\n";
  return result.exit_code;
}

}  // namespace parrondo::cli
