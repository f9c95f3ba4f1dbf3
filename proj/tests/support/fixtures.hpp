#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bsl/bsl.hpp"

namespace bsl::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

/// A nonzero integer prime to n with absolute value at most bound.
inline std::int64_t coprime_integer(Rng& rng, long n, std::int64_t bound) {
  while (true) {
    std::int64_t x = rng.uniform(-bound, bound);
    if (x != 0 && std::gcd(x, static_cast<std::int64_t>(n)) == 1) return x;
  }
}

/// A unit of Z_n: a quotient of integers prime to n.
inline Rational random_unit(Rng& rng, long n, std::int64_t bound = 7) {
  return Rational(BigInt(coprime_integer(rng, n, bound)), BigInt(std::abs(coprime_integer(rng, n, bound))));
}

/// An element of Z[1/n] with numerator at most bound and denominator n^e, e <= 3.
inline Rational random_z_inv_n(Rng& rng, long n, std::int64_t bound = 1000) {
  return Rational(BigInt(rng.uniform(-bound, bound)), ipow(n, rng.uniform(0, 3)));
}

/// An orientation-preserving arithmetic isometry with |h| <= max_h.
inline ArithmeticIsometry random_isometry(Rng& rng, long n, long max_h, std::int64_t bound = 1000) {
  long h = rng.uniform(-max_h, max_h);
  Rational u = random_unit(rng, n) * rpow(n, h);
  Rational beta = random_z_inv_n(rng, n, bound);
  if (rng.uniform(0, 3) == 0) beta /= Rational(std::abs(coprime_integer(rng, n, 5)));
  Rational alpha(BigInt(rng.uniform(-bound, bound)), BigInt(rng.uniform(1, 12)));
  return ArithmeticIsometry::make(1, alpha, BallAffineMap::make(n, h, u, beta));
}

/// Smallest positive td among b^-x a^y b^x fixing w with 0 < y <= max_y and
/// 0 <= x <= max_x, composed as isometries.
inline std::optional<Rational> brute_min_td(const EmbeddingSpec& e, const TreeVertex& w, long max_y, long max_x) {
  std::optional<Rational> best;
  auto binv = inverse(e.b);
  ArithmeticIsometry bx = ArithmeticIsometry::identity(e.n), bix = bx;
  for (long x = 0; x <= max_x; ++x) {
    ArithmeticIsometry ay = ArithmeticIsometry::identity(e.n);
    for (long y = 1; y <= max_y; ++y) {
      ay = compose(ay, e.a);
      auto g = compose(compose(bix, ay), bx);
      if (!fixes(g.tree, w)) continue;
      Rational t = mp::abs(td(g));
      if (t != 0 && (!best || t < *best)) best = t;
    }
    bx = compose(bx, e.b);
    bix = compose(bix, binv);
  }
  return best;
}

struct GridCase {
  long n;
  long l;
  Rational s;
  BigInt m;
};

/// n in {2,3,4,6}, l in {1,2,3}, s in {+-1/2, +-1, +-3/2, +-7/3} and m <= 12
/// satisfying (*).
inline std::vector<GridCase> round_trip_grid() {
  std::vector<Rational> slopes{Rational(1, 2), Rational(-1, 2), Rational(1), Rational(-1),
                               Rational(3, 2), Rational(-3, 2), Rational(7, 3), Rational(-7, 3)};
  std::vector<GridCase> out;
  for (long n : {2, 3, 4, 6}) {
    for (long l = 1; l <= 3; ++l) {
      for (const auto& s : slopes) {
        for (long m = 1; m <= 12; ++m) {
          if (satisfies_star(n, BigInt(m))) out.push_back({n, l, s, BigInt(m)});
        }
      }
    }
  }
  return out;
}

}  // namespace bsl::testing
