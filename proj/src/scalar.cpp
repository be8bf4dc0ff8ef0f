#include "parrondo/scalar.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

#include "parrondo/errors.hpp"

namespace parrondo {

double to_double(const Rational& x) {
  const double toward_zero = x.get_d();
  if (!std::isfinite(toward_zero)) return toward_zero;
  const double away = std::nextafter(toward_zero, sgn(x) < 0 ? -HUGE_VAL : HUGE_VAL);
  if (!std::isfinite(away)) return toward_zero;
  const Rational gap_low = abs(x - Rational(toward_zero));
  const Rational gap_high = abs(Rational(away) - x);
  if (gap_low < gap_high) return toward_zero;
  if (gap_high < gap_low) return away;
  // tie: even mantissa
  std::uint64_t bits;
  std::memcpy(&bits, &toward_zero, sizeof bits);
  return (bits & 1u) == 0 ? toward_zero : away;
}


namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Exact value of a decimal literal such as "-1.25e-3".
Rational parse_decimal_exact(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    auto [ptr, ec] = std::from_chars(exp_text.data() + (exp_text.starts_with('+') ? 1 : 0),
                                     exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size()) {
      throw ContractViolation("malformed number: " + std::string(text));
    }
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw ContractViolation("malformed number: " + std::string(text));
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw ContractViolation("malformed number: " + std::string(text));
    digits = std::string(s);
  }
  mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational value = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal_exact(trim(text.substr(0, slash)));
    Rational den = parse_decimal_exact(trim(text.substr(slash + 1)));
    if (sgn(den) == 0) throw ContractViolation("zero denominator: " + std::string(text));
    Rational r = num / den;
    r.canonicalize();
    return r;
  }
  return parse_decimal_exact(text);
}

}  // namespace

bool is_fraction_literal(std::string_view text) {
  return text.find('/') != std::string_view::npos;
}

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}

template <>
double parse_scalar<double>(std::string_view text) {
  text = trim(text);
  if (is_fraction_literal(text)) return parse_rational(text).get_d();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ContractViolation("malformed number: " + std::string(text));
  }
  return value;
}

std::string format_shortest(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string format_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) {
    return x == 0.0 ? std::string("0") : format_shortest(x);
  }
  int exponent = static_cast<int>(std::floor(std::log10(std::fabs(x))));
  auto render = [&](int exp) {
    int decimals = std::max(0, digits - 1 - exp);
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, x);
    return std::string(buf.data());
  };
  std::string out = render(exponent);
  // rounding up across a power of ten (0.00999999 -> 0.0100000) adds a digit
  double rounded = std::stod(out);
  if (rounded != 0.0 && static_cast<int>(std::floor(std::log10(std::fabs(rounded)))) > exponent) {
    out = render(exponent + 1);
  }
  return out;
}

}  // namespace parrondo
