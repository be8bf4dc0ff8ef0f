#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parrondo/errors.hpp"
#include "parrondo/scalar.hpp"

namespace parrondo {

inline constexpr int kMinPlayers = 3;
inline constexpr int kMaxPlayers = 24;

/// Win/loss status of every player on the ring. Player i (1-based) is bit
/// i-1 of `code`; indices 0 and n+1 wrap around to n and 1.
class Configuration {
 public:
  Configuration(int n, std::uint32_t code);

  static Configuration from_bits(std::span<const int> bits);
  static Configuration all_zero(int n) { return {n, 0u}; }
  static Configuration all_one(int n) { return {n, (1u << n) - 1u}; }

  int n() const { return n_; }
  std::uint32_t code() const { return code_; }
  std::size_t state_count() const { return std::size_t{1} << n_; }

  /// Status of player i, for i in [0, n+1].
  int bit(int i) const;
  /// The configuration with player i's status flipped (x^i).
  Configuration flipped(int i) const;
  std::vector<int> bits() const;
  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  int n_;
  std::uint32_t code_;
};

/// 2 x_{i-1} + x_{i+1}: selects which of p0..p3 player i uses in game B.
int neighbor_index(const Configuration& x, int i);

/// Win probabilities p0..p3 indexed by neighbor status.
template <Scalar T>
class ParamVector {
 public:
  ParamVector(T p0, T p1, T p2, T p3);
  explicit ParamVector(const std::array<T, 4>& p) : ParamVector(p[0], p[1], p[2], p[3]) {}

  /// Fair coins everywhere (game A).
  static ParamVector fair();

  const T& p(int m) const { return p_[static_cast<std::size_t>(m)]; }
  T q(int m) const { return T(1) - p_[static_cast<std::size_t>(m)]; }
  const std::array<T, 4>& values() const { return p_; }

  bool left_right_symmetric() const { return p_[1] == p_[2]; }
  bool interior() const;

  /// (q3, q2, q1, q0): the parameter vector whose means are the negatives
  /// of this one's.
  ParamVector coupled() const;

  /// p_m -> gamma/2 + (1 - gamma) p_m; game B with these parameters is the
  /// random mixture gamma A + (1 - gamma) B.
  ParamVector mixed_with_fair(const T& gamma) const;

  ParamVector<double> as_double() const;
  std::string to_string() const;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::array<T, 4> p_;
};

/// Game schedule: always B, the periodic pattern A^r B^s, or the random
/// mixture gamma A + (1 - gamma) B.
struct PatternSpec {
  enum class Kind { GameB, Pattern, Mixture };

  Kind kind = Kind::GameB;
  int r = 0;
  int s = 0;
  Rational gamma = 0;

  static PatternSpec game_b() { return {}; }
  static PatternSpec pattern(int r, int s);
  static PatternSpec mixture(Rational gamma);

  std::string to_string() const;

  friend bool operator==(const PatternSpec&, const PatternSpec&) = default;
};

template <Scalar T>
struct Entry {
  std::uint32_t col;
  T value;
};

/// Row-major sparse matrix over states or classes.
template <Scalar T>
class TransitionMatrix {
 public:
  TransitionMatrix(std::size_t dim, bool stochastic);

  std::size_t dim() const { return rows_.size(); }
  bool stochastic() const { return stochastic_; }

  std::span<const Entry<T>> row(std::size_t i) const { return rows_[i]; }
  T at(std::size_t i, std::size_t j) const;
  /// Adds v to entry (i, j), creating it if absent.
  void add(std::size_t i, std::size_t j, const T& v);
  /// Appends (i, j) without looking for an existing entry.
  void append(std::size_t i, std::size_t j, const T& v) {
    rows_[i].push_back({static_cast<std::uint32_t>(j), v});
  }

  T row_sum(std::size_t i) const;
  /// Count of stored entries whose value is nonzero.
  std::size_t nonzeros() const;
  /// Largest |row sum - 1| over all rows.
  double stochastic_defect() const;

  /// x P for a row vector x.
  std::vector<T> left_multiply(std::span<const T> x) const;
  /// P 1.
  std::vector<T> row_sums() const;

  static TransitionMatrix identity(std::size_t dim);

 private:
  std::vector<std::vector<Entry<T>>> rows_;
  bool stochastic_;
};

/// Sparse product a * b.
template <Scalar T>
TransitionMatrix<T> multiply(const TransitionMatrix<T>& a, const TransitionMatrix<T>& b);

/// Dense square matrix, row-major.
template <Scalar T>
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, T(0)) {}

  std::size_t dim() const { return dim_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<T> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  std::size_t nonzeros() const;

 private:
  std::size_t dim_;
  std::vector<T> data_;
};

template <Scalar T>
DenseMatrix<T> to_dense(const TransitionMatrix<T>& m);

/// Dense product of a chain of sparse factors, applied left to right.
template <Scalar T>
DenseMatrix<T> dense_product(std::span<const TransitionMatrix<T>* const> factors);

/// Nonzero count of the product of `factors` (left to right), computed one
/// row at a time without storing the product.
template <Scalar T>
std::size_t product_nonzeros(std::span<const TransitionMatrix<T>* const> factors);

/// Visits the game-B transitions out of x: f(target_code, value) is called
/// with the diagonal first, then once per player flip. With `is_signed`
/// every q_m contribution is negated before it is summed.
template <Scalar T, typename Fn>
void for_each_game_b_transition(const Configuration& x, const ParamVector<T>& params,
                                bool is_signed, Fn&& f) {
  const int n = x.n();
  const T inv_n = from_int<T>(1, n);
  T diag(0);
  std::array<T, 4> off_win;
  std::array<T, 4> off_loss;
  for (int m = 0; m < 4; ++m) {
    off_win[m] = params.p(m) * inv_n;
    off_loss[m] = params.q(m) * inv_n;
    if (is_signed) off_loss[m] = -off_loss[m];
  }
  // diagonal is a sum of n signed terms, one per player
  for (int i = 1; i <= n; ++i) {
    const int m = neighbor_index(x, i);
    diag += x.bit(i) == 0 ? off_loss[m] : off_win[m];
  }
  f(x.code(), diag);
  for (int i = 1; i <= n; ++i) {
    const int m = neighbor_index(x, i);
    f(x.code() ^ (1u << (i - 1)), x.bit(i) == 0 ? off_win[m] : off_loss[m]);
  }
}

/// Full 2^n x 2^n transition matrix of game B.
template <Scalar T>
TransitionMatrix<T> build_game_b(int n, const ParamVector<T>& params);

/// Game B with fair coins.
template <Scalar T>
TransitionMatrix<T> build_game_a(int n);

/// Payoff-signed game B matrix: every q_m entry negated. Its row sums are
/// the expected one-turn payoffs.
template <Scalar T>
TransitionMatrix<T> build_game_b_signed(int n, const ParamVector<T>& params);

}  // namespace parrondo
