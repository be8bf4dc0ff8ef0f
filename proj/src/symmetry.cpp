#include "parrondo/symmetry.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <utility>

namespace parrondo {

const char* to_string(GroupKind kind) {
  return kind == GroupKind::Cyclic ? "cyclic" : "dihedral";
}

SymmetryGroup::SymmetryGroup(GroupKind kind, int n) : kind_(kind), n_(n) {
  PARRONDO_REQUIRE(n >= kMinPlayers && n <= kMaxPlayers, "player count must be in [3, 24]");
}

namespace {

std::uint32_t rotate(std::uint32_t code, int k, int n) {
  if (k == 0) return code;
  const std::uint32_t mask = (std::uint32_t{1} << n) - 1u;
  return ((code >> k) | (code << (n - k))) & mask;
}

std::uint32_t reverse(std::uint32_t code, int n) {
  std::uint32_t out = 0;
  for (int i = 0; i < n; ++i) out |= ((code >> i) & 1u) << (n - 1 - i);
  return out;
}

// Float diagonals are sums taken in player order, so a permuted row may
// differ in the last bits.
bool same_entry(double a, double b) { return std::fabs(a - b) <= 1e-14; }
bool same_entry(const Rational& a, const Rational& b) { return a == b; }

}  // namespace

std::uint32_t SymmetryGroup::act(std::size_t element, std::uint32_t code) const {
  PARRONDO_REQUIRE(element < order(), "group element out of range");
  const int k = static_cast<int>(element % static_cast<std::size_t>(n_));
  const std::uint32_t rotated = rotate(code, k, n_);
  return element < static_cast<std::size_t>(n_) ? rotated : reverse(rotated, n_);
}

Configuration act(const SymmetryGroup& group, std::size_t element, const Configuration& x) {
  PARRONDO_REQUIRE(x.n() == group.n(), "configuration size does not match group");
  return {x.n(), group.act(element, x.code())};
}

std::uint32_t canonical_code(const SymmetryGroup& group, std::uint32_t code) {
  const int n = group.n();
  std::uint32_t best = code;
  const std::uint32_t mirrored = reverse(code, n);
  for (int k = 0; k < n; ++k) {
    best = std::min(best, rotate(code, k, n));
    if (group.kind() == GroupKind::Dihedral) best = std::min(best, rotate(mirrored, k, n));
  }
  return best;
}

QuotientModel::QuotientModel(SymmetryGroup group, std::vector<EquivalenceClass> classes,
                             std::vector<std::uint32_t> class_of)
    : group_(group), classes_(std::move(classes)), class_of_(std::move(class_of)) {}

QuotientModel build_classes(const SymmetryGroup& group) {
  const std::size_t states = std::size_t{1} << group.n();
  std::vector<EquivalenceClass> classes;
  std::vector<std::uint32_t> class_of(states);
  // the canonical code is the orbit minimum, so it is visited before any
  // other member of its orbit
  for (std::size_t code = 0; code < states; ++code) {
    const auto c = static_cast<std::uint32_t>(code);
    const std::uint32_t canon = canonical_code(group, c);
    if (canon == c) {
      class_of[code] = static_cast<std::uint32_t>(classes.size());
      classes.push_back({c, 0});
    } else {
      class_of[code] = class_of[canon];
    }
    ++classes[class_of[code]].size;
  }
  return {group, std::move(classes), std::move(class_of)};
}

std::shared_ptr<const QuotientModel> shared_classes(int n, GroupKind kind) {
  static std::mutex mutex;
  static std::map<std::pair<int, GroupKind>, std::shared_ptr<const QuotientModel>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, kind}];
  if (!slot) slot = std::make_shared<const QuotientModel>(build_classes(SymmetryGroup(kind, n)));
  return slot;
}

template <Scalar T>
TransitionMatrix<T> quotient(const TransitionMatrix<T>& p, const QuotientModel& q) {
  PARRONDO_REQUIRE(p.dim() == (std::size_t{1} << q.n()), "matrix dimension does not match 2^n");
  TransitionMatrix<T> out(q.class_count(), p.stochastic());
  for (std::size_t c = 0; c < q.class_count(); ++c) {
    for (const auto& e : p.row(q.classes()[c].representative)) {
      out.add(c, q.class_of(e.col), e.value);
    }
  }
  return out;
}

template <Scalar T>
TransitionMatrix<T> reduced_game_b(const QuotientModel& q, const ParamVector<T>& params,
                                   bool is_signed) {
  if (q.group().kind() == GroupKind::Dihedral) {
    PARRONDO_REQUIRE(params.left_right_symmetric(), "dihedral reduction requires p1 == p2");
  }
  TransitionMatrix<T> out(q.class_count(), !is_signed);
  for (std::size_t c = 0; c < q.class_count(); ++c) {
    Configuration x(q.n(), q.classes()[c].representative);
    for_each_game_b_transition(x, params, is_signed, [&](std::uint32_t target, const T& v) {
      out.add(c, q.class_of(target), v);
    });
  }
  return out;
}

template <Scalar T>
bool check_invariance(const TransitionMatrix<T>& p, const SymmetryGroup& group,
                      std::size_t samples, std::uint64_t seed) {
  const std::size_t states = std::size_t{1} << group.n();
  PARRONDO_REQUIRE(p.dim() == states, "matrix dimension does not match 2^n");
  // row x mapped through sigma must equal row x_sigma entry by entry
  auto row_matches = [&](std::size_t element, std::uint32_t x) {
    const std::uint32_t xs = group.act(element, x);
    auto src = p.row(x);
    if (src.size() != p.row(xs).size()) return false;
    for (const auto& e : src) {
      if (!same_entry(p.at(xs, group.act(element, e.col)), e.value)) return false;
    }
    return true;
  };
  if (states * group.order() <= samples) {
    for (std::size_t g = 0; g < group.order(); ++g) {
      for (std::size_t x = 0; x < states; ++x) {
        if (!row_matches(g, static_cast<std::uint32_t>(x))) return false;
      }
    }
    return true;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_g(0, group.order() - 1);
  std::uniform_int_distribution<std::uint32_t> pick_x(0, static_cast<std::uint32_t>(states - 1));
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t g = pick_g(rng);
    if (!row_matches(g, pick_x(rng))) return false;
  }
  return true;
}

template <Scalar T>
std::vector<T> lift(std::span<const T> pibar, const QuotientModel& q) {
  PARRONDO_REQUIRE(pibar.size() == q.class_count(), "vector length does not match class count");
  const std::size_t states = std::size_t{1} << q.n();
  std::vector<T> pi(states);
  for (std::size_t x = 0; x < states; ++x) {
    const auto c = q.class_of(static_cast<std::uint32_t>(x));
    pi[x] = pibar[c] / T(static_cast<long>(q.classes()[c].size));
  }
  return pi;
}

template TransitionMatrix<double> quotient(const TransitionMatrix<double>&, const QuotientModel&);
template TransitionMatrix<Rational> quotient(const TransitionMatrix<Rational>&,
                                             const QuotientModel&);
template TransitionMatrix<double> reduced_game_b(const QuotientModel&, const ParamVector<double>&,
                                                 bool);
template TransitionMatrix<Rational> reduced_game_b(const QuotientModel&,
                                                   const ParamVector<Rational>&, bool);
template bool check_invariance(const TransitionMatrix<double>&, const SymmetryGroup&, std::size_t,
                               std::uint64_t);
template bool check_invariance(const TransitionMatrix<Rational>&, const SymmetryGroup&,
                               std::size_t, std::uint64_t);
template std::vector<double> lift(std::span<const double>, const QuotientModel&);
template std::vector<Rational> lift(std::span<const Rational>, const QuotientModel&);

}  // namespace parrondo
