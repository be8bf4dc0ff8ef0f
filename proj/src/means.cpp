#include "parrondo/means.hpp"

#include <numeric>

namespace parrondo {

GroupKind resolve_group(GroupChoice choice, bool left_right_symmetric) {
  switch (choice) {
    case GroupChoice::Cyclic:
      return GroupKind::Cyclic;
    case GroupChoice::Dihedral:
      PARRONDO_REQUIRE(left_right_symmetric, "dihedral reduction requires p1 == p2");
      return GroupKind::Dihedral;
    case GroupChoice::Auto:
      break;
  }
  return left_right_symmetric ? GroupKind::Dihedral : GroupKind::Cyclic;
}

template <Scalar T>
ReducedGames<T> reduce_games(int n, const ParamVector<T>& params, GroupKind group) {
  auto model = shared_classes(n, group);
  auto a = reduced_game_b(*model, ParamVector<T>::fair());
  auto b = reduced_game_b(*model, params);
  auto b_signed = n <= kFullQuotientLimit ? quotient(build_game_b_signed(n, params), *model)
                                          : reduced_game_b(*model, params, true);
  return {std::move(model), std::move(a), std::move(b), std::move(b_signed)};
}

namespace {

template <Scalar T>
T dot(const std::vector<T>& x, const std::vector<T>& y) {
  T acc(0);
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

template <Scalar T>
struct MeanValue {
  T mu;
  double residual = 0.0;
  SolverMethod method = SolverMethod::DenseLU;
  bool forced = false;
};

// mu = (r+s)^{-1} sum_{v<s} pi Pa^r Pb^v (dot Pb) 1, folding one factor at a time
template <Scalar T>
MeanValue<T> pattern_mean_from(const TransitionMatrix<T>& a, const TransitionMatrix<T>& b,
                               const TransitionMatrix<T>& b_signed, int r, int s,
                               std::span<const std::uint32_t> excluded) {
  auto st = pattern_stationary(a, b, r, s, excluded);
  std::vector<T> w = st.pi;
  for (int k = 0; k < r; ++k) w = a.left_multiply(w);
  const std::vector<T> payoff = b_signed.row_sums();
  T acc(0);
  for (int v = 0; v < s; ++v) {
    acc += dot(w, payoff);
    if (v + 1 < s) w = b.left_multiply(w);
  }
  return {T(acc / T(r + s)), st.residual, st.method, false};
}

template <Scalar T>
MeanValue<T> game_b_mean_from(int case_id, const TransitionMatrix<T>& b,
                              const TransitionMatrix<T>& b_signed,
                              std::span<const std::uint32_t> excluded) {
  if (case_id == 2) return {T(-1), 0.0, SolverMethod::Auto, true};
  if (case_id == 4) return {T(1), 0.0, SolverMethod::Auto, true};
  if (case_id == 6) {
    throw UnsupportedBoundary("game B alone absorbs at either constant state when p0 = 0, p3 = 1");
  }
  auto st = solve_stationary(b, excluded);
  return {dot(st.pi, b_signed.row_sums()), st.residual, st.method, false};
}

template <Scalar T>
TransitionMatrix<T> blend(const TransitionMatrix<T>& a, const TransitionMatrix<T>& b, const T& gamma) {
  TransitionMatrix<T> out(a.dim(), true);
  const T rest = T(1) - gamma;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (const auto& e : a.row(i)) out.add(i, e.col, gamma * e.value);
    for (const auto& e : b.row(i)) out.add(i, e.col, rest * e.value);
  }
  return out;
}

template <Scalar T>
MeanValue<T> mixture_mean_from(const TransitionMatrix<T>& a, const TransitionMatrix<T>& b,
                               const TransitionMatrix<T>& b_signed, const T& gamma) {
  // game A pays zero in expectation from every state
  auto st = solve_stationary(blend(a, b, gamma));
  T mu = (T(1) - gamma) * dot(st.pi, b_signed.row_sums());
  return {mu, st.residual, st.method, false};
}

template <Scalar T>
T require_gamma(const PatternSpec& pattern) {
  PARRONDO_REQUIRE(pattern.gamma > 0 && pattern.gamma < 1, "mixture weight gamma must lie in (0,1)");
  return from_rational<T>(pattern.gamma);
}

}  // namespace

template <Scalar T>
ProfitReport<T> mean_pattern(int n, const ParamVector<T>& params, int r, int s, GroupChoice group) {
  PARRONDO_REQUIRE(r >= 1 && s >= 1, "pattern [r,s] needs r >= 1 and s >= 1");
  const ReducibleCase rc = classify_boundary(params, n);
  const GroupKind kind = resolve_group(group, params.left_right_symmetric());
  const auto games = reduce_games(n, params, kind);
  const auto excluded = excluded_classes(rc, *games.model);
  auto value = pattern_mean_from(games.a, games.b, games.b_signed, r, s, excluded);
  return {value.mu, PatternSpec::pattern(r, s), n, params, kind, rc.case_id, value.residual,
          games.model->class_count(), value.method, value.forced};
}

template <Scalar T>
ProfitReport<T> mean_game_b(int n, const ParamVector<T>& params, GroupChoice group) {
  const ReducibleCase rc = classify_boundary(params, n);
  const GroupKind kind = resolve_group(group, params.left_right_symmetric());
  const auto games = reduce_games(n, params, kind);
  const auto excluded = excluded_classes(rc, *games.model);
  auto value = game_b_mean_from(rc.case_id, games.b, games.b_signed, excluded);
  return {value.mu, PatternSpec::game_b(), n, params, kind, rc.case_id, value.residual,
          games.model->class_count(), value.method, value.forced};
}

template <Scalar T>
ProfitReport<T> mean_mixture(int n, const ParamVector<T>& params, const T& gamma, GroupChoice group) {
  PARRONDO_REQUIRE(gamma > T(0) && gamma < T(1), "mixture weight gamma must lie in (0,1)");
  // the blended chain is game B with interior parameters p_hat
  const ReducibleCase rc = classify_boundary(params.mixed_with_fair(gamma), n);
  const GroupKind kind = resolve_group(group, params.left_right_symmetric());
  const auto games = reduce_games(n, params, kind);
  auto value = mixture_mean_from(games.a, games.b, games.b_signed, gamma);
  PatternSpec spec;
  spec.kind = PatternSpec::Kind::Mixture;
  if constexpr (std::same_as<T, double>) {
    spec.gamma = Rational(gamma);
  } else {
    spec.gamma = gamma;
  }
  return {value.mu, spec, n, params, kind, rc.case_id, value.residual,
          games.model->class_count(), value.method, value.forced};
}

template <Scalar T>
ProfitReport<T> mean(int n, const ParamVector<T>& params, const PatternSpec& pattern,
                     GroupChoice group) {
  switch (pattern.kind) {
    case PatternSpec::Kind::GameB:
      return mean_game_b(n, params, group);
    case PatternSpec::Kind::Pattern:
      return mean_pattern(n, params, pattern.r, pattern.s, group);
    case PatternSpec::Kind::Mixture: {
      auto report = mean_mixture(n, params, require_gamma<T>(pattern), group);
      report.pattern = pattern;
      return report;
    }
  }
  throw ContractViolation("unknown pattern kind");
}

template <Scalar T>
T closed_form_n3(const ParamVector<T>& params, const PatternSpec& pattern) {
  PARRONDO_REQUIRE(params.left_right_symmetric(), "the n = 3 closed forms assume p1 == p2");
  const T& p0 = params.p(0);
  const T& p1 = params.p(1);
  const T& p3 = params.p(3);
  const T q0 = params.q(0);
  const T q1 = params.q(1);
  const T q3 = params.q(3);
  auto ratio = [](const T& num, const T& den) {
    if (is_zero(den)) throw ContractViolation("closed form denominator vanishes");
    return T(num / den);
  };

  if (pattern.kind == PatternSpec::Kind::GameB) {
    return ratio(T(p1 * (p0 + q3) - q3), T(p0 * p1 + 2 * p0 * q3 + q1 * q3));
  }
  PARRONDO_REQUIRE(pattern.kind == PatternSpec::Kind::Pattern,
                   "closed forms exist for game B and patterns [1,1], [1,2], [2,1]");
  if (pattern.r == 1 && pattern.s == 1) {
    T num = 5 * (2 * p1 * (3 + p0 + q3) - 3 * q0 - 5 * q3);
    T den = 2 * (17 + 15 * p0 + 4 * p0 * p1 + 8 * p0 * q3 + 4 * p1 * p3 + 4 * q1 + 19 * q3);
    return ratio(num, den);
  }
  if (pattern.r == 2 && pattern.s == 1) {
    T num = 38 * (p1 * (12 + p0 + q3) - 6 * q0 - 7 * q3);
    T den = 3 * (367 + 111 * p0 + 8 * p0 * p1 + 16 * p0 * q3 + 8 * p1 * p3 + 8 * q1 + 119 * q3);
    return ratio(num, den);
  }
  if (pattern.r == 1 && pattern.s == 2) {
    const T p0sq = p0 * p0;
    const T p3sq = p3 * p3;
    const T gap = 1 - p0 - p3;
    T linear = 520 + 61 * p0 - 65 * p0sq - 113 * p3 + 130 * p0 * p3 - 28 * p0sq * p3 -
               65 * p3sq + 28 * p0 * p3sq;
    T num = -494 + 287 * p0 - 51 * p0sq + 181 * p3 - 13 * p0 * p3 - 12 * p0sq * p3 +
            142 * p3sq - 40 * p0 * p3sq;
    num += linear * p1;
    num -= 2 * gap * (13 + 7 * p0 - 7 * p3) * p1 * p1;
    num *= 2;
    T den = 494 + 335 * p0 - 154 * p0sq - 157 * p3 - 64 * p0 * p3 + 32 * p0sq * p3 -
            130 * p3sq - 64 * p0 * p3sq + 32 * p0sq * p3sq;
    den -= 2 * gap * (89 - 8 * p0 + 16 * p3 - 16 * p0 * p3) * p1;
    den += 8 * gap * gap * p1 * p1;
    den *= 3;
    return ratio(num, den);
  }
  throw ContractViolation("no closed form for pattern " + pattern.to_string());
}

template <Scalar T>
T full_state_mean(int n, const ParamVector<T>& params, const PatternSpec& pattern) {
  PARRONDO_REQUIRE(n >= kMinPlayers && n <= kFullStateLimit,
                   "full-state means are limited to n <= 10");
  const auto a = build_game_a<T>(n);
  const auto b = build_game_b(n, params);
  const auto b_signed = build_game_b_signed(n, params);
  switch (pattern.kind) {
    case PatternSpec::Kind::GameB: {
      const ReducibleCase rc = classify_boundary(params, n);
      return game_b_mean_from(rc.case_id, b, b_signed, excluded_states(rc)).mu;
    }
    case PatternSpec::Kind::Pattern: {
      const ReducibleCase rc = classify_boundary(params, n);
      return pattern_mean_from(a, b, b_signed, pattern.r, pattern.s, excluded_states(rc)).mu;
    }
    case PatternSpec::Kind::Mixture:
      return mixture_mean_from(a, b, b_signed, require_gamma<T>(pattern)).mu;
  }
  throw ContractViolation("unknown pattern kind");
}

#define PARRONDO_INSTANTIATE_MEANS(T)                                                         \
  template ReducedGames<T> reduce_games(int, const ParamVector<T>&, GroupKind);               \
  template ProfitReport<T> mean_pattern(int, const ParamVector<T>&, int, int, GroupChoice);   \
  template ProfitReport<T> mean_game_b(int, const ParamVector<T>&, GroupChoice);              \
  template ProfitReport<T> mean_mixture(int, const ParamVector<T>&, const T&, GroupChoice);   \
  template ProfitReport<T> mean(int, const ParamVector<T>&, const PatternSpec&, GroupChoice); \
  template T closed_form_n3(const ParamVector<T>&, const PatternSpec&);                       \
  template T full_state_mean(int, const ParamVector<T>&, const PatternSpec&);

PARRONDO_INSTANTIATE_MEANS(double)
PARRONDO_INSTANTIATE_MEANS(Rational)

}  // namespace parrondo
