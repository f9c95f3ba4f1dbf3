#pragma once

// Arithmetic isometries of X_n: a real affine map t -> eps n^h t + alpha paired
// with a ball map of T_{1,n} that changes heights by the same h.

#include <string>
#include <utility>

#include "bsl/error.hpp"
#include "bsl/exactnum.hpp"
#include "bsl/tree.hpp"

namespace bsl {

enum class IsometryType { Elliptic, Hyperbolic };

inline std::string to_string(IsometryType t) {
  return t == IsometryType::Elliptic ? "elliptic" : "hyperbolic";
}

struct ArithmeticIsometry {
  long n = 2;
  int eps = 1;
  long h = 0;
  Rational alpha = 0;
  BallAffineMap tree = BallAffineMap::identity(2);

  static ArithmeticIsometry make(int eps, const Rational& alpha, const BallAffineMap& tree) {
    if (eps != 1 && eps != -1) fail(ErrorKind::InvalidParams, "eps must be +1 or -1");
    tree.check();
    return {tree.n, eps, tree.h, alpha, tree};
  }

  static ArithmeticIsometry identity(long n) { return {n, 1, 0, Rational(0), BallAffineMap::identity(n)}; }

  /// Pure translation of the real factor.
  static ArithmeticIsometry translation(long n, const Rational& alpha) {
    return {n, 1, 0, alpha, BallAffineMap::identity(n)};
  }

  /// a_s: t -> t + s on the real line, x -> x + 1 on the tree.
  static ArithmeticIsometry standard_a(long n, const Rational& s = 1) {
    return make(1, s, BallAffineMap::standard_a(n));
  }

  /// b^l: t -> n^l t, x -> n^l x.
  static ArithmeticIsometry standard_b(long n, long l = 1) {
    return make(1, 0, BallAffineMap::standard_b(n, l));
  }

  /// A pure tree action: real part t -> n^h t.
  static ArithmeticIsometry pure_tree(const BallAffineMap& tree) { return make(1, 0, tree); }

  void check() const {
    if (eps != 1 && eps != -1) fail(ErrorKind::InvalidParams, "eps must be +1 or -1");
    if (tree.n != n || tree.h != h) fail(ErrorKind::InvalidParams, "tree part has a different base or height");
    tree.check();
  }

  [[nodiscard]] Rational real_apply(const Rational& t) const { return Rational(eps) * rpow(n, h) * t + alpha; }

  [[nodiscard]] bool is_identity() const {
    return eps == 1 && h == 0 && alpha == 0 && tree == BallAffineMap::identity(n);
  }

  friend bool operator==(const ArithmeticIsometry&, const ArithmeticIsometry&) = default;
};

inline std::string to_string(const ArithmeticIsometry& f) {
  return "(eps=" + std::to_string(f.eps) + ", h=" + std::to_string(f.h) + ", alpha=" + to_string(f.alpha) +
         ", tree: " + to_string(f.tree) + ")";
}

/// f o g.
inline ArithmeticIsometry compose(const ArithmeticIsometry& f, const ArithmeticIsometry& g) {
  if (f.n != g.n) fail(ErrorKind::BaseMismatch, "isometries over different bases");
  return {f.n, f.eps * g.eps, f.h + g.h, Rational(f.eps) * rpow(f.n, f.h) * g.alpha + f.alpha,
          compose(f.tree, g.tree)};
}

inline ArithmeticIsometry inverse(const ArithmeticIsometry& f) {
  return {f.n, f.eps, -f.h, -Rational(f.eps) * rpow(f.n, -f.h) * f.alpha, inverse(f.tree)};
}

inline ArithmeticIsometry power(const ArithmeticIsometry& f, long k) {
  ArithmeticIsometry base = k < 0 ? inverse(f) : f;
  ArithmeticIsometry out = ArithmeticIsometry::identity(f.n);
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  while (e) {
    if (e & 1) out = compose(out, base);
    base = compose(base, base);
    e >>= 1;
  }
  return out;
}

/// g f g^-1.
inline ArithmeticIsometry conjugate(const ArithmeticIsometry& g, const ArithmeticIsometry& f) {
  return compose(compose(g, f), inverse(g));
}

/// Every height-preserving arithmetic ball map fixes all sufficiently small
/// balls around beta / (1 - u) (or every ball, for the identity), so the type
/// is read off the height change.
inline IsometryType classify_type(const ArithmeticIsometry& f) {
  return f.h == 0 ? IsometryType::Elliptic : IsometryType::Hyperbolic;
}

inline Rational td(const ArithmeticIsometry& f) {
  if (f.h != 0) fail(ErrorKind::NotElliptic, "translation distance of a hyperbolic element");
  if (f.eps != 1) fail(ErrorKind::NotElliptic, "translation distance of an orientation-reversing element");
  return f.alpha;
}

struct Decomposition {
  Rational translation;
  ArithmeticIsometry pure_tree;
};

/// f = translation(alpha) o pure_tree.
inline Decomposition decompose(const ArithmeticIsometry& f) {
  if (f.eps != 1) fail(ErrorKind::InvalidParams, "decompose needs eps = +1");
  ArithmeticIsometry k = f;
  k.alpha = 0;
  return {f.alpha, k};
}

/// (r, g) in R* x Aut(T), with g restricted to arithmetic pure tree actions.
struct AutGn {
  Rational r = 1;
  ArithmeticIsometry g = ArithmeticIsometry::identity(2);

  static AutGn make(const Rational& r, const ArithmeticIsometry& g) {
    if (r == 0) fail(ErrorKind::InvalidParams, "r must be nonzero");
    if (g.eps != 1 || g.alpha != 0) fail(ErrorKind::InvalidParams, "conjugator must be a pure tree action");
    g.check();
    return {r, g};
  }
};

/// Acting by (r1, g1) and then by (r2, g2) equals acting by this product.
inline AutGn then(const AutGn& first, const AutGn& second) {
  return AutGn::make(first.r * second.r, compose(second.g, first.g));
}

/// Scales the translation component by r, then conjugates by g.
inline ArithmeticIsometry apply_autgn(const AutGn& phi, const ArithmeticIsometry& f) {
  auto [alpha, k] = decompose(f);
  ArithmeticIsometry scaled = compose(ArithmeticIsometry::translation(f.n, phi.r * alpha), k);
  return conjugate(phi.g, scaled);
}

}  // namespace bsl
