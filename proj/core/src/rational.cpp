#include "pathmarket/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "pathmarket/error.hpp"

namespace pm {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();
constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();

}  // namespace

Rat Rat::reduce128(i128 n, i128 d) {
  if (d == 0) fail(ErrorKind::numerical, "rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n < kMin64 || n > kMax64 || d > kMax64) {
    fail(ErrorKind::numerical, "rational overflow");
  }
  Rat r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rat::Rat(std::int64_t n, std::int64_t d) { *this = reduce128(n, d); }

Rat Rat::from_double(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::numerical, "non-finite double");
  if (x == 0.0) return Rat();
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  i128 n = mant;
  i128 d = 1;
  if (exp >= 0) {
    if (exp > 62) fail(ErrorKind::numerical, "double too large for rational");
    n <<= exp;
  } else {
    if (-exp > 126) fail(ErrorKind::numerical, "double too small for rational");
    d <<= -exp;
  }
  return reduce128(n, d);
}

Rat Rat::from_decimal(const std::string& text) {
  const char* p = text.c_str();
  bool neg = false;
  if (*p == '+' || *p == '-') {
    neg = (*p == '-');
    ++p;
  }
  i128 mant = 0;
  int digits = 0;
  int frac_digits = 0;
  bool any = false;
  for (; std::isdigit(static_cast<unsigned char>(*p)); ++p) {
    mant = mant * 10 + (*p - '0');
    if (++digits > 37) fail(ErrorKind::numerical, "decimal literal too long: " + text);
    any = true;
  }
  if (*p == '.') {
    ++p;
    for (; std::isdigit(static_cast<unsigned char>(*p)); ++p) {
      mant = mant * 10 + (*p - '0');
      ++frac_digits;
      if (++digits > 37) fail(ErrorKind::numerical, "decimal literal too long: " + text);
      any = true;
    }
  }
  long expo = 0;
  if (*p == 'e' || *p == 'E') {
    char* end = nullptr;
    expo = std::strtol(p + 1, &end, 10);
    p = end;
  }
  if (!any || *p != '\0') fail(ErrorKind::invalid_input, "bad decimal literal: " + text);
  if (neg) mant = -mant;
  long pow10 = expo - frac_digits;
  i128 n = mant;
  i128 d = 1;
  for (; pow10 > 0; --pow10) n *= 10;
  for (; pow10 < 0; ++pow10) {
    d *= 10;
    if (d > (i128(1) << 120)) fail(ErrorKind::numerical, "decimal exponent out of range: " + text);
  }
  return reduce128(n, d);
}

std::string Rat::to_string() const {
  std::string s = std::to_string(num_);
  if (den_ != 1) s += "/" + std::to_string(den_);
  return s;
}

Rat operator+(const Rat& a, const Rat& b) {
  return Rat::reduce128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rat operator-(const Rat& a, const Rat& b) {
  return Rat::reduce128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rat operator*(const Rat& a, const Rat& b) {
  return Rat::reduce128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

Rat operator/(const Rat& a, const Rat& b) {
  if (b.num_ == 0) fail(ErrorKind::numerical, "rational division by zero");
  return Rat::reduce128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

Rat Rat::operator-() const {
  Rat r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

bool operator<(const Rat& a, const Rat& b) {
  return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

}  // namespace pm
