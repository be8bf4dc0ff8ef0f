#pragma once

#include <cstddef>
#include <optional>

#include "parrondo/game.hpp"
#include "parrondo/stationary.hpp"
#include "parrondo/symmetry.hpp"

namespace parrondo {

/// Auto picks dihedral when p1 == p2 and cyclic otherwise.
enum class GroupChoice { Auto, Cyclic, Dihedral };

GroupKind resolve_group(GroupChoice choice, bool left_right_symmetric);

/// Largest n for which the reduced signed matrix is taken as the quotient of
/// the full 2^n matrix; above it the reduced matrix is assembled directly.
inline constexpr int kFullQuotientLimit = 10;

template <Scalar T>
struct ProfitReport {
  T mu;
  PatternSpec pattern;
  int n = 0;
  ParamVector<T> params;
  GroupKind group = GroupKind::Cyclic;
  int case_id = 0;
  double residual = 0.0;
  std::size_t class_count = 0;
  SolverMethod method = SolverMethod::DenseLU;
  /// True when the value is fixed by absorption and no solve took place.
  bool forced = false;
};

/// Reduced game-B matrices on one quotient model.
template <Scalar T>
struct ReducedGames {
  std::shared_ptr<const QuotientModel> model;
  TransitionMatrix<T> a;
  TransitionMatrix<T> b;
  TransitionMatrix<T> b_signed;
};

template <Scalar T>
ReducedGames<T> reduce_games(int n, const ParamVector<T>& params, GroupKind group);

/// Mean profit per turn of the periodic pattern A^r B^s.
template <Scalar T>
ProfitReport<T> mean_pattern(int n, const ParamVector<T>& params, int r, int s,
                             GroupChoice group = GroupChoice::Auto);

/// Mean profit per turn of game B played forever.
template <Scalar T>
ProfitReport<T> mean_game_b(int n, const ParamVector<T>& params,
                            GroupChoice group = GroupChoice::Auto);

/// Mean profit per turn of the random mixture gamma A + (1 - gamma) B, from
/// the stationary law of gamma Pbar_A + (1 - gamma) Pbar_B.
template <Scalar T>
ProfitReport<T> mean_mixture(int n, const ParamVector<T>& params, const T& gamma,
                             GroupChoice group = GroupChoice::Auto);

template <Scalar T>
ProfitReport<T> mean(int n, const ParamVector<T>& params, const PatternSpec& pattern,
                     GroupChoice group = GroupChoice::Auto);

/// Rational-function values for n = 3 and p1 == p2. Defined for GameB and
/// the patterns [1,1], [1,2], [2,1].
template <Scalar T>
T closed_form_n3(const ParamVector<T>& params, const PatternSpec& pattern);

/// Same means on the unreduced 2^n chain. Validation only; n <= 10.
template <Scalar T>
T full_state_mean(int n, const ParamVector<T>& params, const PatternSpec& pattern);

inline constexpr int kFullStateLimit = 10;

}  // namespace parrondo
