#include "lipfree/rational.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "lipfree/error.hpp"

namespace lipfree {
namespace {

Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) {
    throw Error(ErrorCode::kStructural, "not a number: '" + std::string(text) + "'");
  }
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    if (pos < text.size() && text[pos] == '+') ++pos;
    long e = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), e);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::kStructural, "bad exponent in '" + std::string(text) + "'");
    }
    exponent += e;
    pos = text.size();
  }
  if (pos != text.size()) {
    throw Error(ErrorCode::kStructural, "not a number: '" + std::string(text) + "'");
  }
  mpz_class numerator(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational result = exponent >= 0 ? Rational(numerator * scale) : Rational(numerator, scale);
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

}  // namespace

Rational decimal_rational(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kStructural, "non-finite value has no rational form");
  }
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kStructural, "cannot render double");
  }
  return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) {
    throw Error(ErrorCode::kStructural, "zero denominator in '" + std::string(text) + "'");
  }
  Rational result = num / den;
  result.canonicalize();
  return result;
}

Rational make_rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

// mpq_get_d truncates; pick whichever neighbouring double is nearer.
double to_double(const Rational& value) {
  const double d = value.get_d();
  if (!std::isfinite(d)) return d;
  const double away = std::nextafter(d, value < 0 ? -HUGE_VAL : HUGE_VAL);
  if (!std::isfinite(away)) return d;
  const Rational err_d = abs(value - Rational(d));
  const Rational err_away = abs(value - Rational(away));
  return err_away < err_d ? away : d;
}

bool is_integer(const Rational& value) { return value.get_den() == 1; }

Rational ceil(const Rational& value) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return Rational(q);
}

}  // namespace lipfree
