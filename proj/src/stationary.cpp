#include "parrondo/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace parrondo {

const char* to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::Auto:
      return "auto";
    case SolverMethod::DenseLU:
      return "dense-lu";
    case SolverMethod::PowerIteration:
      return "power-iteration";
  }
  return "?";
}

template <Scalar T>
ReducibleCase classify_boundary(const ParamVector<T>& params, int n) {
  PARRONDO_REQUIRE(n >= kMinPlayers && n <= kMaxPlayers, "player count must be in [3, 24]");
  auto in_open = [](const T& v) { return v > T(0) && v < T(1); };
  if (!in_open(params.p(1)) || !in_open(params.p(2))) {
    throw UnsupportedBoundary("p1 and p2 must lie in (0,1); got " + params.to_string());
  }
  auto level = [&](const T& v) { return in_open(v) ? -1 : (v == T(0) ? 0 : 1); };
  const int l0 = level(params.p(0));
  const int l3 = level(params.p(3));
  const Configuration zeros = Configuration::all_zero(n);
  const Configuration ones = Configuration::all_one(n);

  ReducibleCase rc;
  if (l0 < 0 && l3 < 0) {
    rc.case_id = 0;
  } else if (l0 == 1 && l3 < 0) {
    rc.case_id = 1;
    rc.excluded = {zeros};
  } else if (l0 == 0 && l3 < 0) {
    rc.case_id = 2;
  } else if (l0 < 0 && l3 == 0) {
    rc.case_id = 3;
    rc.excluded = {ones};
  } else if (l0 < 0 && l3 == 1) {
    rc.case_id = 4;
  } else if (l0 == 1 && l3 == 0) {
    rc.case_id = 5;
    rc.excluded = {zeros, ones};
  } else if (l0 == 0 && l3 == 1) {
    rc.case_id = 6;
    if (n % 2 == 0) {
      std::uint32_t alternating = 0;
      for (int i = 1; i < n; i += 2) alternating |= 1u << i;  // 0101...01
      rc.excluded = {Configuration(n, alternating),
                     Configuration(n, alternating ^ ((1u << n) - 1u))};
    }
  } else {
    throw UnsupportedBoundary("no ergodicity guarantee for p0, p3 = " +
                              parrondo::to_string(params.p(0)) + ", " +
                              parrondo::to_string(params.p(3)));
  }
  return rc;
}

template ReducibleCase classify_boundary(const ParamVector<double>&, int);
template ReducibleCase classify_boundary(const ParamVector<Rational>&, int);

std::vector<std::uint32_t> excluded_classes(const ReducibleCase& rc, const QuotientModel& q) {
  std::vector<std::uint32_t> out;
  for (const auto& x : rc.excluded) out.push_back(q.class_of(x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint32_t> excluded_states(const ReducibleCase& rc) {
  std::vector<std::uint32_t> out;
  for (const auto& x : rc.excluded) out.push_back(x.code());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <Scalar T>
using RowOperator = std::function<std::vector<T>(const std::vector<T>&)>;

std::vector<std::uint32_t> support_of(std::size_t dim, std::span<const std::uint32_t> excluded) {
  std::vector<char> skip(dim, 0);
  for (auto e : excluded) {
    PARRONDO_REQUIRE(e < dim, "excluded index out of range");
    skip[e] = 1;
  }
  std::vector<std::uint32_t> support;
  for (std::size_t i = 0; i < dim; ++i) {
    if (!skip[i]) support.push_back(static_cast<std::uint32_t>(i));
  }
  PARRONDO_REQUIRE(!support.empty(), "every state is excluded");
  return support;
}

double residual_of(const std::vector<double>& pi, const std::vector<double>& image) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) worst = std::max(worst, std::fabs(image[i] - pi[i]));
  return worst;
}

double residual_of(const std::vector<Rational>& pi, const std::vector<Rational>& image) {
  Rational worst = 0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    Rational d = abs(image[i] - pi[i]);
    if (d > worst) worst = d;
  }
  return worst.get_d();
}

template <Scalar T>
void require_stochastic_on(const DenseMatrix<T>& p, const std::vector<std::uint32_t>& support) {
  for (auto i : support) {
    T sum(0);
    for (auto j : support) sum += p(i, j);
    const double defect = to_double(abs_value(T(sum - T(1))));
    if constexpr (std::same_as<T, double>) {
      if (defect > 1e-10) {
        throw NonStochastic("row " + std::to_string(i) + " of the restricted chain sums to " +
                            format_shortest(to_double(sum)));
      }
    } else if (defect != 0.0 || sum != T(1)) {
      throw NonStochastic("row " + std::to_string(i) + " of the restricted chain sums to " +
                          sum.get_str());
    }
  }
}

// Solves pi (P - I) = 0, sum(pi) = 1 over the support by Gaussian
// elimination on the transposed system with the last equation replaced by
// the normalization.
template <Scalar T>
std::vector<T> dense_solve(const DenseMatrix<T>& p, const std::vector<std::uint32_t>& support) {
  const std::size_t d = support.size();
  std::vector<T> a(d * d);
  std::vector<T> b(d, T(0));
  for (std::size_t row = 0; row + 1 < d; ++row) {
    for (std::size_t col = 0; col < d; ++col) {
      a[row * d + col] = p(support[col], support[row]);
    }
    a[row * d + row] -= T(1);
  }
  for (std::size_t col = 0; col < d; ++col) a[(d - 1) * d + col] = T(1);
  b[d - 1] = T(1);

  for (std::size_t k = 0; k < d; ++k) {
    std::size_t pivot = k;
    if constexpr (std::same_as<T, double>) {
      for (std::size_t i = k + 1; i < d; ++i) {
        if (std::fabs(a[i * d + k]) > std::fabs(a[pivot * d + k])) pivot = i;
      }
    } else {
      while (pivot < d && is_zero(a[pivot * d + k])) ++pivot;
    }
    if (pivot == d || is_zero(a[pivot * d + k])) {
      throw SolverFailure("singular stationary system; the chain is not irreducible on its support");
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a[k * d + j], a[pivot * d + j]);
      std::swap(b[k], b[pivot]);
    }
    const T diag = a[k * d + k];
    for (std::size_t i = k + 1; i < d; ++i) {
      if (is_zero(a[i * d + k])) continue;
      const T factor = a[i * d + k] / diag;
      for (std::size_t j = k; j < d; ++j) {
        if (!is_zero(a[k * d + j])) a[i * d + j] -= factor * a[k * d + j];
      }
      b[i] -= factor * b[k];
    }
  }
  std::vector<T> x(d);
  for (std::size_t k = d; k-- > 0;) {
    T acc = b[k];
    for (std::size_t j = k + 1; j < d; ++j) {
      if (!is_zero(a[k * d + j])) acc -= a[k * d + j] * x[j];
    }
    x[k] = acc / a[k * d + k];
  }
  return x;
}

template <Scalar T>
StationaryResult<T> finish(std::vector<T> pi, std::vector<std::uint32_t> support, SolverMethod method,
                           std::size_t iterations, const RowOperator<T>& apply) {
  StationaryResult<T> result;
  result.residual = residual_of(pi, apply(pi));
  if constexpr (std::same_as<T, double>) {
    if (!(result.residual <= kResidualTarget)) {
      throw SolverFailure("stationary residual " + format_shortest(result.residual) +
                          " exceeds target");
    }
  } else {
    if (result.residual != 0.0) throw SolverFailure("exact stationary solve left a residual");
  }
  result.pi = std::move(pi);
  result.support = std::move(support);
  result.method = method;
  result.iterations = iterations;
  return result;
}

template <Scalar T>
StationaryResult<T> solve_dense(const DenseMatrix<T>& p, std::vector<std::uint32_t> support,
                                const RowOperator<T>& apply) {
  require_stochastic_on(p, support);
  std::vector<T> reduced = dense_solve(p, support);
  std::vector<T> pi(p.dim(), T(0));
  for (std::size_t k = 0; k < support.size(); ++k) {
    if constexpr (std::same_as<T, double>) {
      // clip roundoff below zero
      pi[support[k]] = std::max(0.0, reduced[k]);
    } else {
      pi[support[k]] = reduced[k];
    }
  }
  if constexpr (std::same_as<T, double>) {
    double total = 0.0;
    for (double v : pi) total += v;
    for (double& v : pi) v /= total;
  }
  return finish<T>(std::move(pi), std::move(support), SolverMethod::DenseLU, 0, apply);
}

StationaryResult<double> solve_power(std::size_t dim, std::vector<std::uint32_t> support,
                                     const RowOperator<double>& apply) {
  std::vector<double> pi(dim, 0.0);
  for (auto i : support) pi[i] = 1.0 / static_cast<double>(support.size());
  std::size_t it = 0;
  double residual = 1.0;
  while (it < kPowerIterationLimit) {
    std::vector<double> next = apply(pi);
    ++it;
    double total = 0.0;
    for (double v : next) total += v;
    for (double& v : next) v /= total;
    residual = residual_of(pi, next);
    pi = std::move(next);
    if (residual < kPowerIterationTarget) break;
  }
  if (!(residual < kPowerIterationTarget)) {
    throw SolverFailure("power iteration did not converge in " + std::to_string(it) +
                        " iterations (residual " + format_shortest(residual) + ")");
  }
  return finish<double>(std::move(pi), std::move(support), SolverMethod::PowerIteration, it, apply);
}

template <Scalar T>
SolverMethod choose(SolverMethod requested, std::size_t dim) {
  if constexpr (std::same_as<T, Rational>) {
    if (requested == SolverMethod::PowerIteration) {
      throw ContractViolation("power iteration is only available in floating point");
    }
    return SolverMethod::DenseLU;
  } else {
    if (requested != SolverMethod::Auto) return requested;
    return dim <= kDenseSolverLimit ? SolverMethod::DenseLU : SolverMethod::PowerIteration;
  }
}

}  // namespace

template <Scalar T>
StationaryResult<T> solve_stationary(const TransitionMatrix<T>& p,
                                     std::span<const std::uint32_t> excluded, SolverMethod method) {
  if (!p.stochastic()) throw NonStochastic("stationary solve needs a stochastic matrix");
  auto support = support_of(p.dim(), excluded);
  RowOperator<T> apply = [&p](const std::vector<T>& x) { return p.left_multiply(x); };
  if (choose<T>(method, p.dim()) == SolverMethod::DenseLU) {
    return solve_dense(to_dense(p), std::move(support), apply);
  }
  if constexpr (std::same_as<T, double>) {
    return solve_power(p.dim(), std::move(support), apply);
  }
  throw ContractViolation("unreachable solver selection");
}

template <Scalar T>
StationaryResult<T> pattern_stationary(const TransitionMatrix<T>& pa, const TransitionMatrix<T>& pb,
                                       int r, int s, std::span<const std::uint32_t> excluded,
                                       SolverMethod method) {
  PARRONDO_REQUIRE(r >= 0 && s >= 0 && r + s >= 1, "pattern needs r + s >= 1");
  PARRONDO_REQUIRE(pa.dim() == pb.dim(), "matrix dimensions differ");
  if (!pa.stochastic() || !pb.stochastic()) {
    throw NonStochastic("stationary solve needs stochastic factors");
  }
  std::vector<const TransitionMatrix<T>*> factors;
  for (int k = 0; k < r; ++k) factors.push_back(&pa);
  for (int k = 0; k < s; ++k) factors.push_back(&pb);
  RowOperator<T> apply = [&factors](const std::vector<T>& x) {
    std::vector<T> y = x;
    for (const auto* f : factors) y = f->left_multiply(y);
    return y;
  };
  auto support = support_of(pa.dim(), excluded);
  if (choose<T>(method, pa.dim()) == SolverMethod::DenseLU) {
    return solve_dense(dense_product<T>(factors), std::move(support), apply);
  }
  if constexpr (std::same_as<T, double>) {
    return solve_power(pa.dim(), std::move(support), apply);
  }
  throw ContractViolation("unreachable solver selection");
}

template <Scalar T>
StationaryResult<T> pattern_stationary(int n, const ParamVector<T>& params, int r, int s,
                                       GroupKind group) {
  const ReducibleCase rc = classify_boundary(params, n);
  auto q = shared_classes(n, group);
  auto pa = reduced_game_b(*q, ParamVector<T>::fair());
  auto pb = reduced_game_b(*q, params);
  auto excluded = excluded_classes(rc, *q);
  return pattern_stationary(pa, pb, r, s, excluded);
}

template StationaryResult<double> solve_stationary(const TransitionMatrix<double>&,
                                                   std::span<const std::uint32_t>, SolverMethod);
template StationaryResult<Rational> solve_stationary(const TransitionMatrix<Rational>&,
                                                     std::span<const std::uint32_t>, SolverMethod);
template StationaryResult<double> pattern_stationary(const TransitionMatrix<double>&,
                                                     const TransitionMatrix<double>&, int, int,
                                                     std::span<const std::uint32_t>, SolverMethod);
template StationaryResult<Rational> pattern_stationary(const TransitionMatrix<Rational>&,
                                                       const TransitionMatrix<Rational>&, int, int,
                                                       std::span<const std::uint32_t>,
                                                       SolverMethod);
template StationaryResult<double> pattern_stationary(int, const ParamVector<double>&, int, int,
                                                     GroupKind);
template StationaryResult<Rational> pattern_stationary(int, const ParamVector<Rational>&, int, int,
                                                       GroupKind);

}  // namespace parrondo
