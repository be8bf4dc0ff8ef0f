#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

namespace parrondo {

/// Exact arithmetic mode. Values are canonicalized after every operation.
using Rational = mpq_class;

template <typename T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

inline double to_double(double x) { return x; }
/// Nearest double (get_d alone truncates).
double to_double(const Rational& x);

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return Rational(abs(x)); }

template <Scalar T>
T from_int(long num, long den = 1) {
  if constexpr (std::same_as<T, double>) {
    return static_cast<double>(num) / static_cast<double>(den);
  } else {
    Rational r{mpz_class(num), mpz_class(den)};
    r.canonicalize();
    return r;
  }
}

template <Scalar T>
T from_rational(const Rational& x) {
  if constexpr (std::same_as<T, double>) {
    return x.get_d();
  } else {
    return x;
  }
}

inline std::string to_string(double x);
inline std::string to_string(const Rational& x) { return x.get_str(); }

/// Parses "0.16", "4/25", "1e-3". Fractions stay exact when T is Rational;
/// decimals are converted exactly too ("0.16" -> 4/25).
template <Scalar T>
T parse_scalar(std::string_view text);
template <>
double parse_scalar<double>(std::string_view text);
template <>
Rational parse_scalar<Rational>(std::string_view text);

/// Whether `text` is written as an explicit fraction ("a/b").
bool is_fraction_literal(std::string_view text);

/// Shortest decimal that round-trips to the same double.
std::string format_shortest(double x);

/// Rounds to `digits` significant digits, fixed notation ("0.00466232").
std::string format_significant(double x, int digits = 6);

inline std::string to_string(double x) { return format_shortest(x); }

}  // namespace parrondo
