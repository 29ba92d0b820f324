#pragma once

#include <cstdint>
#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace herz {

/// Thrown for undefined extended-real arithmetic (0 * inf, inf - inf, 1/0)
/// and for int64 overflow in exact rational operations.
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact rational number extended with +infinity.
///
/// Values are kept gcd-reduced with a positive denominator, so equality is
/// structural. Every exponent in the library (s, q, r, alpha, gamma, n) is an
/// ExtRat; the case analysis depends on exact equalities like s/n + 1/q = 1/q_c.
class ExtRat {
 public:
  constexpr ExtRat() = default;
  ExtRat(std::int64_t num);  // NOLINT(google-explicit-constructor)
  ExtRat(std::int64_t num, std::int64_t den);

  static ExtRat infinity();

  /// Parses "3", "-3/2", "inf" (also "infinity", "∞").
  static ExtRat parse(std::string_view text);

  [[nodiscard]] bool is_infinite() const { return infinite_; }
  [[nodiscard]] bool is_finite() const { return !infinite_; }
  [[nodiscard]] bool is_zero() const { return !infinite_ && num_ == 0; }
  [[nodiscard]] bool is_integer() const { return !infinite_ && den_ == 1; }
  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] int sign() const;

  /// 1/x with 1/inf = 0 exactly; 1/0 throws.
  [[nodiscard]] ExtRat reciprocal() const;
  [[nodiscard]] double to_double() const;
  [[nodiscard]] std::string str() const;

  friend ExtRat operator+(const ExtRat& a, const ExtRat& b);
  friend ExtRat operator-(const ExtRat& a, const ExtRat& b);
  friend ExtRat operator*(const ExtRat& a, const ExtRat& b);
  friend ExtRat operator/(const ExtRat& a, const ExtRat& b);
  friend ExtRat operator-(const ExtRat& a);

  ExtRat& operator+=(const ExtRat& o) { return *this = *this + o; }
  ExtRat& operator-=(const ExtRat& o) { return *this = *this - o; }
  ExtRat& operator*=(const ExtRat& o) { return *this = *this * o; }
  ExtRat& operator/=(const ExtRat& o) { return *this = *this / o; }

  friend bool operator==(const ExtRat& a, const ExtRat& b) = default;
  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  bool infinite_ = false;

  static ExtRat from_wide(__int128 num, __int128 den);
};

std::ostream& operator<<(std::ostream& os, const ExtRat& x);

ExtRat min(const ExtRat& a, const ExtRat& b);
ExtRat max(const ExtRat& a, const ExtRat& b);

}  // namespace herz
