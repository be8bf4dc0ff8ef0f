#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "parrondo/game.hpp"

namespace parrondo {

enum class GroupKind { Cyclic, Dihedral };

const char* to_string(GroupKind kind);

/// Rotations of the ring, optionally with reflections. Element k < n is the
/// rotation x_sigma(i) = x_{i+k}; element n + k is that rotation followed by
/// the reversal x_sigma(i) = x_{n+1-i}.
class SymmetryGroup {
 public:
  SymmetryGroup(GroupKind kind, int n);

  GroupKind kind() const { return kind_; }
  int n() const { return n_; }
  std::size_t order() const { return kind_ == GroupKind::Cyclic ? n_ : 2 * static_cast<std::size_t>(n_); }

  std::uint32_t act(std::size_t element, std::uint32_t code) const;

 private:
  GroupKind kind_;
  int n_;
};

Configuration act(const SymmetryGroup& group, std::size_t element, const Configuration& x);

/// Smallest code in the orbit of x.
std::uint32_t canonical_code(const SymmetryGroup& group, std::uint32_t code);

struct EquivalenceClass {
  std::uint32_t representative;  // minimum code in the orbit
  std::uint32_t size;
};

/// Partition of {0,1}^n into group orbits. Classes are ordered by
/// representative.
class QuotientModel {
 public:
  QuotientModel(SymmetryGroup group, std::vector<EquivalenceClass> classes,
                std::vector<std::uint32_t> class_of);

  const SymmetryGroup& group() const { return group_; }
  int n() const { return group_.n(); }
  std::size_t class_count() const { return classes_.size(); }
  const std::vector<EquivalenceClass>& classes() const { return classes_; }
  std::uint32_t class_of(std::uint32_t code) const { return class_of_[code]; }
  std::uint32_t class_of(const Configuration& x) const { return class_of_[x.code()]; }

 private:
  SymmetryGroup group_;
  std::vector<EquivalenceClass> classes_;
  std::vector<std::uint32_t> class_of_;
};

QuotientModel build_classes(const SymmetryGroup& group);

/// Process-wide cache; models are immutable once built.
std::shared_ptr<const QuotientModel> shared_classes(int n, GroupKind kind);

/// Reduced matrix Pbar([x],[y]) = sum over y' ~ y of P(rep(x), y').
template <Scalar T>
TransitionMatrix<T> quotient(const TransitionMatrix<T>& p, const QuotientModel& q);

/// Game B (or its signed variant) assembled directly on classes, without
/// the full 2^n matrix.
template <Scalar T>
TransitionMatrix<T> reduced_game_b(const QuotientModel& q, const ParamVector<T>& params,
                                   bool is_signed = false);

/// Checks P(x_sigma, y_sigma) = P(x, y). Exhaustive when 2^n |G| <= samples,
/// otherwise `samples` random (sigma, x) rows are compared.
template <Scalar T>
bool check_invariance(const TransitionMatrix<T>& p, const SymmetryGroup& group,
                      std::size_t samples, std::uint64_t seed = 1);

/// pi(x) = pibar([x]) / |[x]|.
template <Scalar T>
std::vector<T> lift(std::span<const T> pibar, const QuotientModel& q);

}  // namespace parrondo
