#pragma once

// Exact scalars: big rationals, valuations at the primes of a composite base
// n, the ring Z[1/n], and n-adic integers truncated to a finite precision.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bsl/error.hpp"

namespace bsl {

namespace mp = boost::multiprecision;

using BigInt = mp::number<mp::cpp_int_backend<>, mp::et_off>;
using Rational =
    mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;

inline BigInt num(const Rational& q) { return mp::numerator(q); }
inline BigInt den(const Rational& q) { return mp::denominator(q); }

inline std::string to_string(const BigInt& x) { return x.str(); }

/// "p/q", or "p" when q = 1; the sign lives on the numerator.
inline std::string to_string(const Rational& q) {
  if (den(q) == 1) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline BigInt parse_bigint(std::string_view text) {
  auto s = detail::trim(text);
  if (!detail::is_integer_literal(s)) {
    fail(ErrorKind::ParseError, "not an integer: '" + std::string(text) + "'");
  }
  if (s.front() == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

inline Rational parse_rational(std::string_view text) {
  auto s = detail::trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(s));
  BigInt p = parse_bigint(s.substr(0, slash));
  std::string_view qs = detail::trim(s.substr(slash + 1));
  if (!qs.empty() && qs.front() == '-') {
    fail(ErrorKind::ParseError, "denominator must be positive: '" + std::string(text) + "'");
  }
  BigInt q = parse_bigint(qs);
  if (q == 0) fail(ErrorKind::ParseError, "zero denominator: '" + std::string(text) + "'");
  return Rational(p, q);
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

/// Representative of a modulo m in [0, m) for m > 0.
inline BigInt floor_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline BigInt ipow(long base, long exponent) {
  if (exponent < 0) fail(ErrorKind::InvalidParams, "negative exponent in ipow");
  return mp::pow(BigInt(base), static_cast<unsigned>(exponent));
}

/// n^e as an exact rational; e may be negative.
inline Rational rpow(long n, long e) {
  if (e >= 0) return Rational(ipow(n, e));
  return Rational(BigInt(1), ipow(n, -e));
}

inline BigInt gcd(const BigInt& a, const BigInt& b) { return mp::gcd(a, b); }

/// Inverse of x modulo m, or nullopt when gcd(x, m) != 1.
inline std::optional<BigInt> mod_inverse(const BigInt& x, const BigInt& m) {
  BigInt a = floor_mod(x, m), b = m;
  BigInt s0 = 1, s1 = 0;
  while (b != 0) {
    BigInt q = a / b;
    BigInt t = a - q * b;
    a = b;
    b = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (a != 1) {
    if (m == 1) return BigInt(0);
    return std::nullopt;
  }
  return floor_mod(s0, m);
}

struct PrimePower {
  long p;
  long e;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Factorization n = prod p^e, primes increasing. Z_n splits as the product of
/// Z_p over these primes, so every membership test below is per-prime.
struct PrimeSignature {
  long n = 0;
  std::vector<PrimePower> factors;

  static PrimeSignature of(long n) {
    if (n < 2) fail(ErrorKind::InvalidParams, "base must be >= 2, got " + std::to_string(n));
    PrimeSignature sig{n, {}};
    long rest = n;
    for (long p = 2; p * p <= rest; ++p) {
      if (rest % p != 0) continue;
      long e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      sig.factors.push_back({p, e});
    }
    if (rest > 1) sig.factors.push_back({rest, 1});
    return sig;
  }

  [[nodiscard]] bool is_prime_power() const { return factors.size() == 1; }

  [[nodiscard]] bool divides_some_power(const BigInt& x) const {
    BigInt rest = mp::abs(x);
    if (rest == 0) return false;
    for (const auto& [p, e] : factors) {
      while (rest % p == 0) rest /= p;
    }
    return rest == 1;
  }
};

/// A valuation, where zero gets the distinguished value +infinity.
class Valuation {
 public:
  enum class Kind { Finite, PlusInfinity };

  static Valuation finite(long v) { return Valuation(Kind::Finite, v); }
  static Valuation infinity() { return Valuation(Kind::PlusInfinity, 0); }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_infinite() const { return kind_ == Kind::PlusInfinity; }

  [[nodiscard]] long value() const {
    if (is_infinite()) fail(ErrorKind::InvalidParams, "valuation of zero is +infinity");
    return value_;
  }

  friend bool operator==(const Valuation&, const Valuation&) = default;

  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    return a.value_ <=> b.value_;
  }

  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return finite(a.value_ + b.value_);
  }

  [[nodiscard]] std::string str() const {
    return is_infinite() ? std::string("+inf") : std::to_string(value_);
  }

 private:
  Valuation(Kind k, long v) : kind_(k), value_(v) {}
  Kind kind_;
  long value_;
};

/// v_p of a nonzero integer.
inline long padic_valuation(const BigInt& x, long p) {
  BigInt rest = mp::abs(x);
  long v = 0;
  while (rest % p == 0) {
    rest /= p;
    ++v;
  }
  return v;
}

inline Valuation p_valuation(const Rational& x, long p) {
  if (x == 0) return Valuation::infinity();
  return Valuation::finite(padic_valuation(num(x), p) - padic_valuation(den(x), p));
}

/// max{h : x in n^h Z_n} = min over p | n of floor(v_p(x) / e_p).
inline Valuation n_valuation(const Rational& x, const PrimeSignature& sig) {
  if (x == 0) return Valuation::infinity();
  std::optional<long> best;
  for (const auto& [p, e] : sig.factors) {
    long v = floor_div(p_valuation(x, p).value(), e);
    if (!best || v < *best) best = v;
  }
  return Valuation::finite(*best);
}

inline Valuation n_valuation(const Rational& x, long n) {
  return n_valuation(x, PrimeSignature::of(n));
}

/// x in n^h Z_n, tested prime by prime (v_p(x) >= h e_p).
inline bool in_ball(const Rational& x, long h, const PrimeSignature& sig) {
  if (x == 0) return true;
  for (const auto& [p, e] : sig.factors) {
    if (p_valuation(x, p).value() < h * e) return false;
  }
  return true;
}

inline bool in_ball(const Rational& x, long h, long n) {
  return in_ball(x, h, PrimeSignature::of(n));
}

inline bool is_unit_in_Zn(const Rational& x, const PrimeSignature& sig) {
  if (x == 0) return false;
  for (const auto& [p, e] : sig.factors) {
    if (p_valuation(x, p).value() != 0) return false;
  }
  return true;
}

inline bool is_unit_in_Zn(const Rational& x, long n) {
  return is_unit_in_Zn(x, PrimeSignature::of(n));
}

/// x in Z[1/n]: every prime of the denominator divides n.
inline bool in_Z_inv_n(const Rational& x, const PrimeSignature& sig) {
  return sig.divides_some_power(den(x));
}

/// prod over p | n of p^{v_p(x)} for nonzero x: the part of x visible to Z_n.
inline Rational n_part(const Rational& x, const PrimeSignature& sig) {
  Rational out(1);
  for (const auto& [p, e] : sig.factors) {
    long v = p_valuation(x, p).value();
    out *= rpow(p, v);
  }
  return out;
}

/// An element of Z[1/n].
class NInvertible {
 public:
  NInvertible(Rational value, long base) : value_(std::move(value)), base_(base) {
    auto sig = PrimeSignature::of(base_);
    if (!in_Z_inv_n(value_, sig)) {
      fail(ErrorKind::InvalidParams,
           to_string(value_) + " is not in Z[1/" + std::to_string(base_) + "]");
    }
  }

  [[nodiscard]] const Rational& value() const { return value_; }
  [[nodiscard]] long base() const { return base_; }

  friend bool operator==(const NInvertible&, const NInvertible&) = default;

  friend NInvertible operator+(const NInvertible& a, const NInvertible& b) {
    check_base(a, b);
    return {a.value_ + b.value_, a.base_};
  }
  friend NInvertible operator-(const NInvertible& a, const NInvertible& b) {
    check_base(a, b);
    return {a.value_ - b.value_, a.base_};
  }
  friend NInvertible operator*(const NInvertible& a, const NInvertible& b) {
    check_base(a, b);
    return {a.value_ * b.value_, a.base_};
  }

 private:
  static void check_base(const NInvertible& a, const NInvertible& b) {
    if (a.base_ != b.base_) fail(ErrorKind::BaseMismatch, "Z[1/n] elements over different bases");
  }

  Rational value_;
  long base_;
};

inline Valuation n_valuation(const NInvertible& x) { return n_valuation(x.value(), x.base()); }
inline bool is_unit_in_Zn(const NInvertible& x) { return is_unit_in_Zn(x.value(), x.base()); }

/// An n-adic integer known modulo n^D.
struct TruncatedNAdic {
  long n = 2;
  long precision = 1;
  BigInt residue = 0;

  static TruncatedNAdic make(long n, long precision, const BigInt& value) {
    PrimeSignature::of(n);
    if (precision < 1) fail(ErrorKind::InvalidParams, "precision must be positive");
    return {n, precision, floor_mod(value, ipow(n, precision))};
  }

  [[nodiscard]] BigInt modulus() const { return ipow(n, precision); }

  /// Residue modulo n^i for i <= precision.
  [[nodiscard]] BigInt truncate(long i) const { return floor_mod(residue, ipow(n, i)); }

  friend bool operator==(const TruncatedNAdic&, const TruncatedNAdic&) = default;
};

inline TruncatedNAdic truncated_inverse(const BigInt& x, long precision, long n) {
  if (gcd(mp::abs(x), BigInt(n)) != 1) {
    fail(ErrorKind::NotInvertible,
         to_string(x) + " is not invertible modulo powers of " + std::to_string(n));
  }
  auto inv = mod_inverse(x, ipow(n, precision));
  return TruncatedNAdic::make(n, precision, *inv);
}

/// The unique eta in Z_n with j * eta = n^k.
inline BigInt solve_j_eta(const BigInt& j, long k, long n) {
  if (j <= 0) fail(ErrorKind::InvalidParams, "j must be positive");
  BigInt target = ipow(n, k);
  if (target % j != 0) {
    fail(ErrorKind::NotDivisible,
         to_string(j) + " does not divide " + std::to_string(n) + "^" + std::to_string(k));
  }
  return target / j;
}

/// Residue in [0, n^D) of an n-adic integer given as a rational.
inline BigInt reduce_mod_power(const Rational& x, long n, long precision) {
  auto sig = PrimeSignature::of(n);
  if (!in_ball(x, 0, sig)) {
    fail(ErrorKind::InvalidParams, to_string(x) + " is not in Z_" + std::to_string(n));
  }
  BigInt m = ipow(n, precision);
  auto inv = mod_inverse(den(x), m);
  return floor_mod(num(x) * *inv, m);
}

/// Representative in [0, n^h) of the class of c modulo n^h Z_n. The result lies
/// in Z[1/n] even when c has a denominator prime to n.
inline Rational canonical_mod(const Rational& c, long h, const PrimeSignature& sig) {
  // Scale by n^K until the denominator is prime to n and K + h >= 0.
  BigInt d = den(c);
  long K = 0;
  for (const auto& [p, e] : sig.factors) {
    long v = padic_valuation(d, p);
    K = std::max(K, (v + e - 1) / e);
  }
  K = std::max(K, -h);
  Rational scaled = c * Rational(ipow(sig.n, K));
  BigInt r = reduce_mod_power(scaled, sig.n, K + h);
  return Rational(r) / Rational(ipow(sig.n, K));
}

inline Rational canonical_mod(const Rational& c, long h, long n) {
  return canonical_mod(c, h, PrimeSignature::of(n));
}

}  // namespace bsl
