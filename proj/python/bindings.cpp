#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "parrondo/cli.hpp"
#include "parrondo/means.hpp"
#include "parrondo/montecarlo.hpp"
#include "parrondo/region.hpp"

namespace py = pybind11;
using namespace parrondo;

namespace {

// Probabilities arrive as floats, ints, strings or fractions.Fraction;
// str() of each is parsed, so "4/25" and Fraction(4, 25) stay exact.
std::vector<std::string> param_text(const py::sequence& params) {
  std::vector<std::string> out;
  for (const auto& item : params) out.push_back(py::str(item).cast<std::string>());
  if (out.size() == 3) out.insert(out.begin() + 2, out[1]);
  if (out.size() != 4) throw py::value_error("params needs four probabilities (or three, p0,p1,p3)");
  return out;
}

template <Scalar T>
ParamVector<T> to_params(const py::sequence& params) {
  const auto text = param_text(params);
  return {parse_scalar<T>(text[0]), parse_scalar<T>(text[1]), parse_scalar<T>(text[2]),
          parse_scalar<T>(text[3])};
}

PatternSpec to_spec(const py::object& pattern, const py::object& gamma) {
  if (!gamma.is_none()) {
    if (!pattern.is_none()) throw py::value_error("give either pattern or gamma, not both");
    return PatternSpec::mixture(parse_scalar<Rational>(py::str(gamma).cast<std::string>()));
  }
  if (pattern.is_none()) return PatternSpec::game_b();
  if (py::isinstance<py::str>(pattern)) {
    const auto s = pattern.cast<std::string>();
    if (s == "B" || s == "b") return PatternSpec::game_b();
    return cli::parse_pattern(s);
  }
  const auto rs = pattern.cast<std::pair<int, int>>();
  return PatternSpec::pattern(rs.first, rs.second);
}

GroupChoice to_group(const std::string& name) {
  if (name == "auto") return GroupChoice::Auto;
  if (name == "cyclic") return GroupChoice::Cyclic;
  if (name == "dihedral") return GroupChoice::Dihedral;
  throw py::value_error("group must be auto, cyclic or dihedral");
}

template <Scalar T>
py::dict report_dict(const ProfitReport<T>& r) {
  py::dict d;
  d["mu"] = to_double(r.mu);
  if constexpr (std::same_as<T, Rational>) {
    d["exact"] = r.mu.get_str();
  } else {
    d["exact"] = py::none();
  }
  d["n"] = r.n;
  d["group"] = to_string(r.group);
  d["case_id"] = r.case_id;
  d["class_count"] = r.class_count;
  d["residual"] = r.residual;
  d["method"] = to_string(r.method);
  d["forced"] = r.forced;
  return d;
}

py::dict py_mean(int n, const py::sequence& params, const py::object& pattern, const py::object& gamma,
                 const std::string& group, bool exact) {
  const auto spec = to_spec(pattern, gamma);
  if (exact) return report_dict(mean(n, to_params<Rational>(params), spec, to_group(group)));
  return report_dict(mean(n, to_params<double>(params), spec, to_group(group)));
}

py::object py_closed_form(const py::sequence& params, const py::object& pattern, bool exact) {
  const auto spec = to_spec(pattern, py::none());
  if (exact) return py::str(closed_form_n3(to_params<Rational>(params), spec).get_str());
  return py::float_(closed_form_n3(to_params<double>(params), spec));
}

py::dict py_simulate(int n, const py::sequence& params, const py::object& pattern, const py::object& gamma,
                     std::uint64_t turns, std::uint64_t seed, std::size_t checkpoints) {
  SimulationOptions opts;
  opts.turns = turns;
  opts.seed = seed;
  opts.max_checkpoints = checkpoints;
  const auto run = simulate(n, to_params<double>(params), to_spec(pattern, gamma), opts);
  py::dict d;
  d["initial"] = run.initial.to_string();
  d["final_state"] = run.final_state.to_string();
  d["total_payoff"] = run.total_payoff;
  d["final_mean"] = run.final_mean;
  d["standard_error"] = run.standard_error;
  py::list traj;
  for (const auto& cp : run.trajectory) traj.append(py::make_tuple(cp.turn, cp.running_mean));
  d["trajectory"] = traj;
  return d;
}

py::dict py_slln(int n, const py::sequence& params, const py::object& pattern, const py::object& gamma,
                 std::uint64_t turns, std::size_t replications, std::uint64_t seed,
                 std::optional<double> reference, std::size_t jobs) {
  const auto p = to_params<double>(params);
  const auto spec = to_spec(pattern, gamma);
  SllnReport r;
  {
    py::gil_scoped_release release;
    r = slln_check(n, p, spec, turns, replications, seed, reference, jobs);
  }
  py::dict d;
  d["exact_mu"] = r.exact_mu;
  d["reference"] = r.reference;
  d["final_means"] = r.final_means;
  d["z_scores"] = r.z_scores;
  d["mean_of_means"] = r.mean_of_means;
  d["standard_error"] = r.standard_error;
  d["z"] = r.z;
  d["flagged"] = r.flagged;
  return d;
}

py::dict py_scan(int n, const py::object& pattern, const py::object& gamma, int resolution,
                 std::size_t jobs, bool reflect, bool points) {
  ScanOptions opts;
  opts.resolution = resolution;
  opts.jobs = jobs;
  opts.reflect = reflect;
  opts.keep_points = points;
  const auto spec = to_spec(pattern, gamma);
  ScanResult r;
  {
    py::gil_scoped_release release;
    r = scan(n, spec, opts);
  }
  py::dict d;
  d["resolution"] = r.resolution;
  d["parrondo_cells"] = r.parrondo_cells;
  d["anti_cells"] = r.anti_cells;
  d["parrondo_volume"] = r.parrondo_volume;
  d["anti_volume"] = r.anti_volume;
  d["parrondo_error"] = r.parrondo_error;
  d["anti_error"] = r.anti_error;
  py::list pts;
  for (const auto& p : r.points) {
    pts.append(py::make_tuple(p.p0, p.p3, p.p1, p.mu_b, p.mu_pattern, to_string(p.label)));
  }
  d["points"] = pts;
  return d;
}

py::dict py_conditions(const py::sequence& params, const py::object& gamma) {
  std::optional<Rational> g;
  if (!gamma.is_none()) g = parse_scalar<Rational>(py::str(gamma).cast<std::string>());
  const auto r = ergodicity_conditions(to_params<Rational>(params), g);
  py::dict d;
  d["holds"] = std::vector<bool>(r.holds.begin(), r.holds.end());
  d["in_union"] = r.in_union;
  d["p_bar"] = r.p_bar;
  return d;
}

py::tuple py_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_parrondo, m) {
  m.doc() = "Exact means of spatially dependent Parrondo games on a ring of N players";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<UnsupportedBoundary>(m, "UnsupportedBoundary", PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

  m.def("mean", &py_mean, py::arg("n"), py::arg("params"), py::arg("pattern") = py::none(),
        py::arg("gamma") = py::none(), py::arg("group") = "auto", py::arg("exact") = false,
        "Mean profit per turn. pattern=(r, s) or 'B'; gamma selects the random mixture.");
  m.def("closed_form_n3", &py_closed_form, py::arg("params"), py::arg("pattern") = py::none(),
        py::arg("exact") = false);
  m.def(
      "full_state_mean",
      [](int n, const py::sequence& params, const py::object& pattern, const py::object& gamma) {
        return full_state_mean(n, to_params<double>(params), to_spec(pattern, gamma));
      },
      py::arg("n"), py::arg("params"), py::arg("pattern") = py::none(), py::arg("gamma") = py::none());
  m.def(
      "class_count",
      [](int n, const std::string& group) {
        const auto kind = group == "cyclic" ? GroupKind::Cyclic : GroupKind::Dihedral;
        return shared_classes(n, kind)->class_count();
      },
      py::arg("n"), py::arg("group") = "dihedral");
  m.def(
      "classify_point",
      [](double p0, double p1, double p3, const py::object& pattern, const py::object& gamma, int n) {
        const auto pt = classify_point(p0, p1, p3, to_spec(pattern, gamma), n);
        return py::make_tuple(pt.mu_b, pt.mu_pattern, to_string(pt.label));
      },
      py::arg("p0"), py::arg("p1"), py::arg("p3"), py::arg("pattern") = py::none(),
      py::arg("gamma") = py::none(), py::arg("n") = 3);
  m.def("symmetry_map", &symmetry_map, py::arg("p0"), py::arg("p1"), py::arg("p3"));
  m.def("scan", &py_scan, py::arg("n"), py::arg("pattern") = py::none(), py::arg("gamma") = py::none(),
        py::arg("resolution") = 64, py::arg("jobs") = 1, py::arg("reflect") = false,
        py::arg("points") = false);
  m.def("ergodicity_conditions", &py_conditions, py::arg("params"), py::arg("gamma") = py::none());
  m.def("simulate", &py_simulate, py::arg("n"), py::arg("params"), py::arg("pattern") = py::none(),
        py::arg("gamma") = py::none(), py::arg("turns") = 1'000'000, py::arg("seed") = 1,
        py::arg("checkpoints") = 1000);
  m.def("slln_check", &py_slln, py::arg("n"), py::arg("params"), py::arg("pattern") = py::none(),
        py::arg("gamma") = py::none(), py::arg("turns") = 1'000'000, py::arg("replications") = 8,
        py::arg("seed") = 1, py::arg("reference") = py::none(), py::arg("jobs") = 1);
  m.def("cli", &py_cli, py::arg("args"),
        "Runs the command-line front end; returns (exit_code, stdout, stderr).");
}
