#include "herz/ext_rat.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>

namespace herz {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::invalid_argument("not a rational: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

ExtRat::ExtRat(std::int64_t num) : num_(num), den_(1) {}

ExtRat::ExtRat(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ArithmeticError("ExtRat: zero denominator");
  *this = from_wide(num, den);
}

ExtRat ExtRat::infinity() {
  ExtRat x;
  x.infinite_ = true;
  x.num_ = 1;
  x.den_ = 0;
  return x;
}

ExtRat ExtRat::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw ArithmeticError("ExtRat: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) {
    throw ArithmeticError("ExtRat: int64 overflow");
  }
  ExtRat x;
  x.num_ = static_cast<std::int64_t>(num);
  x.den_ = static_cast<std::int64_t>(den);
  return x;
}

ExtRat ExtRat::parse(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text == "inf" || text == "+inf" || text == "infinity" || text == "∞") return infinity();
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return ExtRat(parse_int(text));
  return ExtRat(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

int ExtRat::sign() const {
  if (infinite_) return 1;
  return (num_ > 0) - (num_ < 0);
}

ExtRat ExtRat::reciprocal() const {
  if (infinite_) return ExtRat(0);
  if (num_ == 0) throw ArithmeticError("ExtRat: reciprocal of zero");
  return from_wide(den_, num_);
}

double ExtRat::to_double() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string ExtRat::str() const {
  if (infinite_) return "inf";
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

ExtRat operator+(const ExtRat& a, const ExtRat& b) {
  if (a.infinite_ || b.infinite_) return ExtRat::infinity();
  return ExtRat::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                           static_cast<__int128>(a.den_) * b.den_);
}

ExtRat operator-(const ExtRat& a) {
  if (a.infinite_) throw ArithmeticError("ExtRat: -inf is not representable");
  return ExtRat::from_wide(-static_cast<__int128>(a.num_), a.den_);
}

ExtRat operator-(const ExtRat& a, const ExtRat& b) {
  if (b.infinite_) throw ArithmeticError("ExtRat: subtracting inf");
  if (a.infinite_) return a;
  return a + (-b);
}

ExtRat operator*(const ExtRat& a, const ExtRat& b) {
  if (a.infinite_ || b.infinite_) {
    const ExtRat& other = a.infinite_ ? b : a;
    if (other.sign() == 0) throw ArithmeticError("ExtRat: 0 * inf");
    if (other.sign() < 0) throw ArithmeticError("ExtRat: negative * inf");
    return ExtRat::infinity();
  }
  return ExtRat::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

ExtRat operator/(const ExtRat& a, const ExtRat& b) {
  if (b.is_zero()) throw ArithmeticError("ExtRat: division by zero");
  if (a.infinite_ && b.infinite_) throw ArithmeticError("ExtRat: inf / inf");
  return a * b.reciprocal();
}

std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const ExtRat& x) { return os << x.str(); }

ExtRat min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }
ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

}  // namespace herz
