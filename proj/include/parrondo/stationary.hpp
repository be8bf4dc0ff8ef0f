#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "parrondo/game.hpp"
#include "parrondo/symmetry.hpp"

namespace parrondo {

/// Transient-state taxonomy for boundary parameters.
///
/// case 0: every p_m in (0,1)
/// case 1: p0 = 1            exclude all-zero
/// case 2: p0 = 0            all-zero absorbs game B; mixed chains irreducible
/// case 3: p3 = 0            exclude all-one
/// case 4: p3 = 1            all-one absorbs game B; mixed chains irreducible
/// case 5: p0 = 1, p3 = 0    exclude both constant states
/// case 6: p0 = 0, p3 = 1    both absorb game B; mixed chains exclude the two
///                           alternating states when n is even
/// In every case p1, p2 must lie in (0,1).
struct ReducibleCase {
  int case_id = 0;
  std::vector<Configuration> excluded;
};

template <Scalar T>
ReducibleCase classify_boundary(const ParamVector<T>& params, int n);

/// Class indices of the excluded configurations.
std::vector<std::uint32_t> excluded_classes(const ReducibleCase& rc, const QuotientModel& q);
std::vector<std::uint32_t> excluded_states(const ReducibleCase& rc);

enum class SolverMethod { Auto, DenseLU, PowerIteration };

const char* to_string(SolverMethod method);

inline constexpr std::size_t kDenseSolverLimit = 2000;
inline constexpr double kResidualTarget = 1e-12;
inline constexpr double kPowerIterationTarget = 1e-13;
inline constexpr std::size_t kPowerIterationLimit = 1'000'000;

template <Scalar T>
struct StationaryResult {
  std::vector<T> pi;
  std::vector<std::uint32_t> support;
  SolverMethod method = SolverMethod::DenseLU;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Stationary distribution of a stochastic matrix restricted to the
/// complement of `excluded`; excluded entries come back as zero.
template <Scalar T>
StationaryResult<T> solve_stationary(const TransitionMatrix<T>& p,
                                     std::span<const std::uint32_t> excluded = {},
                                     SolverMethod method = SolverMethod::Auto);

/// Stationary distribution of pa^r pb^s. The product is formed densely only
/// when the dense solver is used; power iteration applies the factors in turn.
template <Scalar T>
StationaryResult<T> pattern_stationary(const TransitionMatrix<T>& pa, const TransitionMatrix<T>& pb,
                                       int r, int s, std::span<const std::uint32_t> excluded = {},
                                       SolverMethod method = SolverMethod::Auto);

template <Scalar T>
StationaryResult<T> pattern_stationary(int n, const ParamVector<T>& params, int r, int s,
                                       GroupKind group);

}  // namespace parrondo
