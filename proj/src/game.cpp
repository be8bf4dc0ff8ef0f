#include "parrondo/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace parrondo {

// --- Configuration ---------------------------------------------------------

Configuration::Configuration(int n, std::uint32_t code) : n_(n), code_(code) {
  PARRONDO_REQUIRE(n >= kMinPlayers && n <= kMaxPlayers,
                   "player count must be in [3, 24], got " + std::to_string(n));
  PARRONDO_REQUIRE(code < (std::uint32_t{1} << n), "configuration code out of range");
}

Configuration Configuration::from_bits(std::span<const int> bits) {
  const int n = static_cast<int>(bits.size());
  PARRONDO_REQUIRE(n >= kMinPlayers && n <= kMaxPlayers, "player count must be in [3, 24]");
  std::uint32_t code = 0;
  for (int i = 0; i < n; ++i) {
    PARRONDO_REQUIRE(bits[i] == 0 || bits[i] == 1, "configuration bits must be 0 or 1");
    code |= static_cast<std::uint32_t>(bits[i]) << i;
  }
  return {n, code};
}

int Configuration::bit(int i) const {
  PARRONDO_REQUIRE(i >= 0 && i <= n_ + 1, "player index out of range");
  if (i == 0) i = n_;
  if (i == n_ + 1) i = 1;
  return static_cast<int>((code_ >> (i - 1)) & 1u);
}

Configuration Configuration::flipped(int i) const {
  PARRONDO_REQUIRE(i >= 1 && i <= n_, "player index out of range");
  return {n_, code_ ^ (1u << (i - 1))};
}

std::vector<int> Configuration::bits() const {
  std::vector<int> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) out[i] = static_cast<int>((code_ >> i) & 1u);
  return out;
}

std::string Configuration::to_string() const {
  std::string s;
  for (int i = 1; i <= n_; ++i) s.push_back(bit(i) ? '1' : '0');
  return s;
}

int neighbor_index(const Configuration& x, int i) {
  PARRONDO_REQUIRE(i >= 1 && i <= x.n(), "player index out of range");
  return 2 * x.bit(i - 1) + x.bit(i + 1);
}

// --- ParamVector -----------------------------------------------------------

template <Scalar T>
ParamVector<T>::ParamVector(T p0, T p1, T p2, T p3) : p_{p0, p1, p2, p3} {
  for (int m = 0; m < 4; ++m) {
    PARRONDO_REQUIRE(p_[m] >= T(0) && p_[m] <= T(1),
                     "probability p" + std::to_string(m) + " outside [0,1]");
  }
}

template <Scalar T>
ParamVector<T> ParamVector<T>::fair() {
  const T half = from_int<T>(1, 2);
  return {half, half, half, half};
}

template <Scalar T>
bool ParamVector<T>::interior() const {
  return std::all_of(p_.begin(), p_.end(), [](const T& v) { return v > T(0) && v < T(1); });
}

template <Scalar T>
ParamVector<T> ParamVector<T>::coupled() const {
  return {q(3), q(2), q(1), q(0)};
}

template <Scalar T>
ParamVector<T> ParamVector<T>::mixed_with_fair(const T& gamma) const {
  PARRONDO_REQUIRE(gamma >= T(0) && gamma <= T(1), "mixture weight outside [0,1]");
  const T half_gamma = gamma * from_int<T>(1, 2);
  std::array<T, 4> out;
  for (int m = 0; m < 4; ++m) out[m] = half_gamma + (T(1) - gamma) * p_[m];
  return ParamVector(out);
}

template <Scalar T>
ParamVector<double> ParamVector<T>::as_double() const {
  return {to_double(p_[0]), to_double(p_[1]), to_double(p_[2]), to_double(p_[3])};
}

template <Scalar T>
std::string ParamVector<T>::to_string() const {
  std::ostringstream os;
  for (int m = 0; m < 4; ++m) os << (m ? "," : "") << parrondo::to_string(p_[m]);
  return os.str();
}

template class ParamVector<double>;
template class ParamVector<Rational>;

// --- PatternSpec -----------------------------------------------------------

PatternSpec PatternSpec::pattern(int r, int s) {
  PARRONDO_REQUIRE(r >= 1 && s >= 1, "pattern [r,s] needs r >= 1 and s >= 1");
  PatternSpec spec;
  spec.kind = Kind::Pattern;
  spec.r = r;
  spec.s = s;
  return spec;
}

PatternSpec PatternSpec::mixture(Rational gamma) {
  PARRONDO_REQUIRE(gamma > 0 && gamma < 1, "mixture weight gamma must lie in (0,1)");
  PatternSpec spec;
  spec.kind = Kind::Mixture;
  spec.gamma = std::move(gamma);
  return spec;
}

std::string PatternSpec::to_string() const {
  switch (kind) {
    case Kind::GameB:
      return "B";
    case Kind::Pattern:
      return "[" + std::to_string(r) + "," + std::to_string(s) + "]";
    case Kind::Mixture:
      return "(" + gamma.get_str() + ")";
  }
  return {};
}

// --- TransitionMatrix ------------------------------------------------------

template <Scalar T>
TransitionMatrix<T>::TransitionMatrix(std::size_t dim, bool stochastic)
    : rows_(dim), stochastic_(stochastic) {}

template <Scalar T>
T TransitionMatrix<T>::at(std::size_t i, std::size_t j) const {
  for (const auto& e : rows_[i]) {
    if (e.col == j) return e.value;
  }
  return T(0);
}

template <Scalar T>
void TransitionMatrix<T>::add(std::size_t i, std::size_t j, const T& v) {
  auto& row = rows_[i];
  for (auto& e : row) {
    if (e.col == j) {
      e.value += v;
      return;
    }
  }
  row.push_back({static_cast<std::uint32_t>(j), v});
}

template <Scalar T>
T TransitionMatrix<T>::row_sum(std::size_t i) const {
  T sum(0);
  for (const auto& e : rows_[i]) sum += e.value;
  return sum;
}

template <Scalar T>
std::size_t TransitionMatrix<T>::nonzeros() const {
  std::size_t count = 0;
  for (const auto& row : rows_) {
    for (const auto& e : row) count += is_zero(e.value) ? 0 : 1;
  }
  return count;
}

template <Scalar T>
double TransitionMatrix<T>::stochastic_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    worst = std::max(worst, to_double(abs_value(T(row_sum(i) - T(1)))));
  }
  return worst;
}

template <Scalar T>
std::vector<T> TransitionMatrix<T>::left_multiply(std::span<const T> x) const {
  PARRONDO_REQUIRE(x.size() == dim(), "vector length does not match matrix dimension");
  std::vector<T> out(dim(), T(0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (is_zero(x[i])) continue;
    for (const auto& e : rows_[i]) out[e.col] += x[i] * e.value;
  }
  return out;
}

template <Scalar T>
std::vector<T> TransitionMatrix<T>::row_sums() const {
  std::vector<T> out(dim());
  for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = row_sum(i);
  return out;
}

template <Scalar T>
TransitionMatrix<T> TransitionMatrix<T>::identity(std::size_t dim) {
  TransitionMatrix m(dim, true);
  for (std::size_t i = 0; i < dim; ++i) m.add(i, i, T(1));
  return m;
}

template class TransitionMatrix<double>;
template class TransitionMatrix<Rational>;

template <Scalar T>
TransitionMatrix<T> multiply(const TransitionMatrix<T>& a, const TransitionMatrix<T>& b) {
  PARRONDO_REQUIRE(a.dim() == b.dim(), "matrix dimensions differ");
  const std::size_t dim = a.dim();
  TransitionMatrix<T> out(dim, a.stochastic() && b.stochastic());
  std::vector<T> acc(dim, T(0));
  std::vector<char> touched(dim, 0);
  std::vector<std::uint32_t> cols;
  for (std::size_t i = 0; i < dim; ++i) {
    cols.clear();
    for (const auto& ea : a.row(i)) {
      for (const auto& eb : b.row(ea.col)) {
        if (!touched[eb.col]) {
          touched[eb.col] = 1;
          cols.push_back(eb.col);
        }
        acc[eb.col] += ea.value * eb.value;
      }
    }
    std::sort(cols.begin(), cols.end());
    for (auto c : cols) {
      out.append(i, c, acc[c]);
      acc[c] = T(0);
      touched[c] = 0;
    }
  }
  return out;
}

template TransitionMatrix<double> multiply(const TransitionMatrix<double>&,
                                           const TransitionMatrix<double>&);
template TransitionMatrix<Rational> multiply(const TransitionMatrix<Rational>&,
                                             const TransitionMatrix<Rational>&);

// --- DenseMatrix -----------------------------------------------------------

template <Scalar T>
std::size_t DenseMatrix<T>::nonzeros() const {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [](const T& v) { return !is_zero(v); }));
}

template class DenseMatrix<double>;
template class DenseMatrix<Rational>;

template <Scalar T>
DenseMatrix<T> to_dense(const TransitionMatrix<T>& m) {
  DenseMatrix<T> out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (const auto& e : m.row(i)) out(i, e.col) += e.value;
  }
  return out;
}

template <Scalar T>
DenseMatrix<T> dense_product(std::span<const TransitionMatrix<T>* const> factors) {
  PARRONDO_REQUIRE(!factors.empty(), "empty matrix product");
  const std::size_t dim = factors.front()->dim();
  for (const auto* f : factors) PARRONDO_REQUIRE(f->dim() == dim, "matrix dimensions differ");
  DenseMatrix<T> out(dim);
  std::vector<T> current(dim);
  std::vector<T> next(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    // propagate the unit row vector e_i through every factor
    std::fill(current.begin(), current.end(), T(0));
    current[i] = T(1);
    for (const auto* f : factors) {
      std::fill(next.begin(), next.end(), T(0));
      for (std::size_t k = 0; k < dim; ++k) {
        if (is_zero(current[k])) continue;
        for (const auto& e : f->row(k)) next[e.col] += current[k] * e.value;
      }
      std::swap(current, next);
    }
    std::copy(current.begin(), current.end(), out.row(i).begin());
  }
  return out;
}

template <Scalar T>
std::size_t product_nonzeros(std::span<const TransitionMatrix<T>* const> factors) {
  PARRONDO_REQUIRE(!factors.empty(), "empty matrix product");
  const std::size_t dim = factors.front()->dim();
  for (const auto* f : factors) PARRONDO_REQUIRE(f->dim() == dim, "matrix dimensions differ");
  std::vector<T> current(dim);
  std::vector<T> next(dim);
  std::size_t count = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    std::fill(current.begin(), current.end(), T(0));
    current[i] = T(1);
    for (const auto* f : factors) {
      std::fill(next.begin(), next.end(), T(0));
      for (std::size_t k = 0; k < dim; ++k) {
        if (is_zero(current[k])) continue;
        for (const auto& e : f->row(k)) next[e.col] += current[k] * e.value;
      }
      std::swap(current, next);
    }
    count += static_cast<std::size_t>(
        std::count_if(current.begin(), current.end(), [](const T& v) { return !is_zero(v); }));
  }
  return count;
}

template std::size_t product_nonzeros(std::span<const TransitionMatrix<double>* const>);
template std::size_t product_nonzeros(std::span<const TransitionMatrix<Rational>* const>);
template DenseMatrix<double> to_dense(const TransitionMatrix<double>&);
template DenseMatrix<Rational> to_dense(const TransitionMatrix<Rational>&);
template DenseMatrix<double> dense_product(std::span<const TransitionMatrix<double>* const>);
template DenseMatrix<Rational> dense_product(std::span<const TransitionMatrix<Rational>* const>);

// --- builders --------------------------------------------------------------

namespace {

template <Scalar T>
TransitionMatrix<T> build_full(int n, const ParamVector<T>& params, bool is_signed) {
  PARRONDO_REQUIRE(n >= kMinPlayers && n <= kMaxPlayers, "player count must be in [3, 24]");
  const std::size_t dim = std::size_t{1} << n;
  TransitionMatrix<T> m(dim, !is_signed);
  for (std::size_t code = 0; code < dim; ++code) {
    Configuration x(n, static_cast<std::uint32_t>(code));
    for_each_game_b_transition(x, params, is_signed,
                               [&](std::uint32_t target, const T& v) { m.add(code, target, v); });
  }
  return m;
}

}  // namespace

template <Scalar T>
TransitionMatrix<T> build_game_b(int n, const ParamVector<T>& params) {
  return build_full(n, params, false);
}

template <Scalar T>
TransitionMatrix<T> build_game_a(int n) {
  return build_full(n, ParamVector<T>::fair(), false);
}

template <Scalar T>
TransitionMatrix<T> build_game_b_signed(int n, const ParamVector<T>& params) {
  return build_full(n, params, true);
}

template TransitionMatrix<double> build_game_b(int, const ParamVector<double>&);
template TransitionMatrix<Rational> build_game_b(int, const ParamVector<Rational>&);
template TransitionMatrix<double> build_game_a(int);
template TransitionMatrix<Rational> build_game_a(int);
template TransitionMatrix<double> build_game_b_signed(int, const ParamVector<double>&);
template TransitionMatrix<Rational> build_game_b_signed(int, const ParamVector<Rational>&);

}  // namespace parrondo
