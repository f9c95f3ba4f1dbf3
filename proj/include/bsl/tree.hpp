#pragma once

// The tree T_{1,n}: a vertex of height h is a ball c + n^h Z_n in Q_n, so the
// whole tree is available lazily and exactly. Each vertex has one downward
// neighbour (the ball of height h - 1 containing it) and n upward ones.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bsl/error.hpp"
#include "bsl/exactnum.hpp"

namespace bsl {

struct TreeVertex {
  long n = 2;
  long h = 0;
  Rational c = 0;

  /// The ball of height h around x, with its center moved into [0, n^h).
  static TreeVertex containing(long n, const Rational& x, long h) {
    return {n, h, canonical_mod(x, h, n)};
  }

  static TreeVertex root(long n) { return {n, 0, Rational(0)}; }

  [[nodiscard]] bool valid() const {
    auto sig = PrimeSignature::of(n);
    return in_Z_inv_n(c, sig) && c >= 0 && c < rpow(n, h);
  }

  [[nodiscard]] TreeVertex parent() const { return containing(n, c, h - 1); }

  /// Upward neighbours in increasing order of their centers.
  [[nodiscard]] std::vector<TreeVertex> children() const {
    std::vector<TreeVertex> out;
    Rational step = rpow(n, h);
    for (long t = 0; t < n; ++t) out.push_back({n, h + 1, c + Rational(t) * step});
    return out;
  }

  [[nodiscard]] bool contains(const Rational& x) const {
    return in_ball(x - c, h, n);
  }

  /// Whether w lies in up(*this), i.e. w is a sub-ball.
  [[nodiscard]] bool below(const TreeVertex& w) const {
    return w.h >= h && contains(w.c);
  }

  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
  friend bool operator<(const TreeVertex& a, const TreeVertex& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.h != b.h) return a.h < b.h;
    return a.c < b.c;
  }
};

inline std::string to_string(const TreeVertex& v) {
  return "(" + std::to_string(v.h) + "," + to_string(v.c) + ")";
}

/// The ball map x -> u x + beta changing heights by h; u / n^h must be a unit
/// of Z_n. Coefficients are kept as general rationals so that inverses such as
/// x -> x / 3 stay representable.
struct BallAffineMap {
  long n = 2;
  long h = 0;
  Rational u = 1;
  Rational beta = 0;

  static BallAffineMap make(long n, long h, const Rational& u, const Rational& beta) {
    BallAffineMap m{n, h, u, beta};
    m.check();
    return m;
  }

  static BallAffineMap identity(long n) { return {n, 0, Rational(1), Rational(0)}; }
  static BallAffineMap translation(long n, const Rational& beta) { return make(n, 0, 1, beta); }
  static BallAffineMap standard_a(long n) { return make(n, 0, 1, 1); }
  static BallAffineMap standard_b(long n, long l = 1) { return make(n, l, rpow(n, l), 0); }

  void check() const {
    auto sig = PrimeSignature::of(n);
    if (u == 0 || !is_unit_in_Zn(u / rpow(n, h), sig)) {
      fail(ErrorKind::InvalidParams, "ball map x -> " + to_string(u) + " x + " + to_string(beta) +
                                         " does not change heights by " + std::to_string(h));
    }
  }

  [[nodiscard]] Rational apply(const Rational& x) const { return u * x + beta; }

  friend bool operator==(const BallAffineMap&, const BallAffineMap&) = default;
};

inline std::string to_string(const BallAffineMap& m) {
  std::string out = "x -> ";
  if (m.u == 1) {
    out += "x";
  } else if (m.u == -1) {
    out += "-x";
  } else {
    out += den(m.u) == 1 ? to_string(m.u) + "x" : "(" + to_string(m.u) + ")x";
  }
  if (m.beta > 0) out += " + " + to_string(m.beta);
  if (m.beta < 0) out += " - " + to_string(Rational(-m.beta));
  return out + " [h=" + std::to_string(m.h) + "]";
}

/// f o g.
inline BallAffineMap compose(const BallAffineMap& f, const BallAffineMap& g) {
  if (f.n != g.n) fail(ErrorKind::BaseMismatch, "ball maps over different bases");
  return {f.n, f.h + g.h, f.u * g.u, f.u * g.beta + f.beta};
}

inline BallAffineMap inverse(const BallAffineMap& f) {
  return {f.n, -f.h, Rational(1) / f.u, -f.beta / f.u};
}

inline BallAffineMap power(const BallAffineMap& f, long k) {
  BallAffineMap base = k < 0 ? inverse(f) : f;
  BallAffineMap out = BallAffineMap::identity(f.n);
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  while (e) {
    if (e & 1) out = compose(out, base);
    base = compose(base, base);
    e >>= 1;
  }
  return out;
}

/// g o f o g^-1.
inline BallAffineMap conjugate(const BallAffineMap& g, const BallAffineMap& f) {
  return compose(compose(g, f), inverse(g));
}

inline TreeVertex act(const BallAffineMap& m, const TreeVertex& v) {
  if (m.n != v.n) fail(ErrorKind::BaseMismatch, "map and vertex over different bases");
  return TreeVertex::containing(m.n, m.apply(v.c), v.h + m.h);
}

inline bool fixes(const BallAffineMap& m, const TreeVertex& v) {
  if (m.h != 0) fail(ErrorKind::NotElliptic, "fixes() needs a height-preserving map");
  if (m.n != v.n) fail(ErrorKind::BaseMismatch, "map and vertex over different bases");
  return in_ball((m.u - 1) * v.c + m.beta, v.h, m.n);
}

/// The point x* = beta / (1 - u) of Q_n fixed by a hyperbolic map; its axis is
/// the line of balls containing x*.
inline Rational axis_fixed_point(const BallAffineMap& m) {
  if (m.h == 0) fail(ErrorKind::InvalidParams, "axis of a height-preserving map");
  return m.beta / (Rational(1) - m.u);
}

inline TreeVertex axis_vertex(const BallAffineMap& m, long j, long precision) {
  if (m.h == 0) fail(ErrorKind::InvalidParams, "axis of a height-preserving map");
  if (precision < j + std::abs(m.h)) {
    fail(ErrorKind::InvalidParams, "precision " + std::to_string(precision) +
                                       " too small for height " + std::to_string(j));
  }
  return TreeVertex::containing(m.n, axis_fixed_point(m), j);
}

inline TreeVertex axis_vertex(const BallAffineMap& m, long j) {
  return axis_vertex(m, j, std::abs(j) + std::abs(m.h));
}

/// Iterates an elliptic map on v until it returns; the orbit in visiting order.
inline std::vector<TreeVertex> orbit(const BallAffineMap& m, const TreeVertex& v,
                                     std::size_t limit = 1u << 20) {
  if (m.h != 0) fail(ErrorKind::NotElliptic, "orbit of a hyperbolic map is infinite");
  std::vector<TreeVertex> out{v};
  TreeVertex w = act(m, v);
  while (!(w == v)) {
    if (out.size() >= limit) fail(ErrorKind::TooLarge, "orbit longer than " + std::to_string(limit));
    out.push_back(w);
    w = act(m, w);
  }
  return out;
}

/// Whether the orbit of one (hence every) vertex i levels above w has n^i
/// elements.
inline bool is_transitive_on_up(const BallAffineMap& m, const TreeVertex& w, long i) {
  if (!fixes(m, w)) fail(ErrorKind::DoesNotFix, "map does not fix " + to_string(w));
  if (i < 0) fail(ErrorKind::InvalidParams, "negative level");
  BigInt size = ipow(m.n, i);
  if (size > (1 << 22)) fail(ErrorKind::TooLarge, "level too large for explicit orbit");
  auto o = orbit(m, TreeVertex{w.n, w.h + i, w.c}, static_cast<std::size_t>(size) + 1);
  return BigInt(o.size()) == size;
}

/// Translation by beta acts transitively on every level above w iff
/// beta / n^{h(w)} is a unit of Z_n.
inline bool transitive_forever(const Rational& beta, const TreeVertex& w) {
  return is_unit_in_Zn(beta / rpow(w.n, w.h), w.n);
}

using Label = std::uint32_t;

/// A depth-truncated automorphism of up(v_0): sigma[i-1] permutes Z/n^i and the
/// levels are compatible under reduction.
struct LevelPerm {
  long n = 2;
  std::vector<std::vector<Label>> sigma;

  [[nodiscard]] long depth() const { return static_cast<long>(sigma.size()); }

  [[nodiscard]] Label at(long level, Label y) const { return sigma[level - 1][y]; }

  static std::size_t level_size(long n, long i) {
    BigInt s = ipow(n, i);
    if (s > BigInt(1) << 30) fail(ErrorKind::TooLarge, "level too large to tabulate");
    return static_cast<std::size_t>(s);
  }

  static LevelPerm identity(long n, long depth) {
    LevelPerm f{n, {}};
    for (long i = 1; i <= depth; ++i) {
      std::vector<Label> s(level_size(n, i));
      for (std::size_t y = 0; y < s.size(); ++y) s[y] = static_cast<Label>(y);
      f.sigma.push_back(std::move(s));
    }
    return f;
  }

  /// Checks bijectivity and compatibility; returns a reason on failure.
  [[nodiscard]] std::optional<std::string> defect() const {
    for (long i = 1; i <= depth(); ++i) {
      const auto& s = sigma[i - 1];
      if (s.size() != level_size(n, i)) return "level " + std::to_string(i) + " has wrong size";
      std::vector<char> seen(s.size(), 0);
      for (Label x : s) {
        if (x >= s.size() || seen[x]) return "level " + std::to_string(i) + " is not a permutation";
        seen[x] = 1;
      }
      if (i == 1) continue;
      const auto& lower = sigma[i - 2];
      Label m = static_cast<Label>(lower.size());
      for (std::size_t y = 0; y < s.size(); ++y) {
        if (s[y] % m != lower[y % m]) {
          return "levels " + std::to_string(i - 1) + " and " + std::to_string(i) + " are incompatible";
        }
      }
    }
    return std::nullopt;
  }

  void check() const {
    if (auto d = defect()) fail(ErrorKind::InvalidParams, *d);
  }

  [[nodiscard]] LevelPerm truncate(long d) const {
    LevelPerm f{n, {}};
    f.sigma.assign(sigma.begin(), sigma.begin() + std::min(d, depth()));
    return f;
  }

  friend bool operator==(const LevelPerm&, const LevelPerm&) = default;
  friend bool operator<(const LevelPerm& a, const LevelPerm& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.sigma < b.sigma;
  }
};

/// f o g levelwise.
inline LevelPerm compose(const LevelPerm& f, const LevelPerm& g) {
  if (f.n != g.n || f.depth() != g.depth()) fail(ErrorKind::BaseMismatch, "level perms of different shape");
  LevelPerm out{f.n, {}};
  out.sigma.reserve(f.sigma.size());
  for (std::size_t i = 0; i < f.sigma.size(); ++i) {
    const auto& fs = f.sigma[i];
    const auto& gs = g.sigma[i];
    std::vector<Label> s(fs.size());
    for (std::size_t y = 0; y < s.size(); ++y) s[y] = fs[gs[y]];
    out.sigma.push_back(std::move(s));
  }
  return out;
}

inline LevelPerm inverse(const LevelPerm& f) {
  LevelPerm out{f.n, {}};
  for (const auto& s : f.sigma) {
    std::vector<Label> t(s.size());
    for (std::size_t y = 0; y < s.size(); ++y) t[s[y]] = static_cast<Label>(y);
    out.sigma.push_back(std::move(t));
  }
  return out;
}

inline LevelPerm power(const LevelPerm& f, long k) {
  LevelPerm base = k < 0 ? inverse(f) : f;
  LevelPerm out = LevelPerm::identity(f.n, f.depth());
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  while (e) {
    if (e & 1) out = compose(out, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return out;
}

inline bool commutes(const LevelPerm& f, const LevelPerm& g) { return compose(f, g) == compose(g, f); }

/// Restriction to up(v_0) of a height-preserving ball map fixing v_0.
inline LevelPerm level_perm_of(const BallAffineMap& m, long depth) {
  if (m.h != 0) fail(ErrorKind::NotElliptic, "only height-preserving maps restrict to up(v_0)");
  if (!fixes(m, TreeVertex::root(m.n))) fail(ErrorKind::DoesNotFix, "map does not fix v_0");
  LevelPerm f{m.n, {}};
  for (long i = 1; i <= depth; ++i) {
    std::size_t size = LevelPerm::level_size(m.n, i);
    BigInt mod = ipow(m.n, i);
    BigInt u = reduce_mod_power(m.u, m.n, i);
    BigInt b = reduce_mod_power(m.beta, m.n, i);
    std::vector<Label> s(size);
    for (std::size_t y = 0; y < size; ++y) {
      s[y] = static_cast<Label>(floor_mod(u * y + b, mod));
    }
    f.sigma.push_back(std::move(s));
  }
  return f;
}

/// A^eta: adds eta mod n^i on level i.
inline LevelPerm build_Aeta(const TruncatedNAdic& eta) {
  LevelPerm f{eta.n, {}};
  for (long i = 1; i <= eta.precision; ++i) {
    std::size_t size = LevelPerm::level_size(eta.n, i);
    std::size_t shift = static_cast<std::size_t>(eta.truncate(i));
    std::vector<Label> s(size);
    for (std::size_t y = 0; y < size; ++y) s[y] = static_cast<Label>((y + shift) % size);
    f.sigma.push_back(std::move(s));
  }
  return f;
}

inline TruncatedNAdic extract_eta(const LevelPerm& f) {
  if (f.depth() < 1) fail(ErrorKind::InvalidParams, "extract_eta needs depth >= 1");
  f.check();
  for (long i = 1; i <= f.depth(); ++i) {
    const auto& s = f.sigma[i - 1];
    std::size_t size = s.size();
    for (std::size_t y = 0; y < size; ++y) {
      if (s[(y + 1) % size] != (s[y] + 1) % size) {
        fail(ErrorKind::NotCommuting, "level " + std::to_string(i) + " does not commute with x -> x+1");
      }
    }
  }
  return TruncatedNAdic::make(f.n, f.depth(), BigInt(f.sigma.back()[0]));
}

/// A finite piece of a tree automorphism.
struct PartialTreeMap {
  long n = 2;
  std::map<TreeVertex, TreeVertex> pairs;

  [[nodiscard]] std::optional<TreeVertex> find(const TreeVertex& v) const {
    auto it = pairs.find(v);
    if (it == pairs.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] std::optional<std::string> defect() const {
    std::set<TreeVertex> image;
    std::optional<long> shift;
    for (const auto& [v, w] : pairs) {
      if (!image.insert(w).second) return "not injective at " + to_string(w);
      long s = w.h - v.h;
      if (shift && *shift != s) return "height change is not constant";
      shift = s;
      auto pv = find(v.parent());
      if (pv && !(*pv == w.parent())) return "parent relation broken at " + to_string(v);
    }
    return std::nullopt;
  }

  [[nodiscard]] bool is_identity() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.first == p.second; });
  }
};

namespace detail {

/// Label of w relative to base: (c_w - c_base) mod n^{h_w - h_base}.
inline Label relative_label(const TreeVertex& base, const TreeVertex& w) {
  return static_cast<Label>(reduce_mod_power(w.c - base.c, base.n, w.h - base.h));
}

inline TreeVertex from_relative_label(const TreeVertex& base, long level, Label y) {
  return TreeVertex::containing(base.n, base.c + Rational(y), base.h + level);
}

}  // namespace detail

/// Vertices within distance depth of the axis through x*, whose heights lie in
/// [lo, hi]. A vertex branching off the axis at height H0 and sitting at height
/// H has distance H - H0.
inline std::vector<TreeVertex> axis_neighbourhood(long n, const Rational& x_star, long lo, long hi,
                                                  long depth) {
  std::vector<TreeVertex> out;
  for (long h0 = lo - depth; h0 <= hi; ++h0) {
    TreeVertex base = TreeVertex::containing(n, x_star, h0);
    if (h0 >= lo) out.push_back(base);
    TreeVertex next = TreeVertex::containing(n, x_star, h0 + 1);
    std::vector<TreeVertex> frontier;
    for (const auto& ch : base.children()) {
      if (!(ch == next)) frontier.push_back(ch);
    }
    for (long d = 1; d <= depth && h0 + d <= hi; ++d) {
      if (h0 + d >= lo) out.insert(out.end(), frontier.begin(), frontier.end());
      if (d == depth) break;
      std::vector<TreeVertex> up;
      for (const auto& v : frontier) {
        auto ch = v.children();
        up.insert(up.end(), ch.begin(), ch.end());
      }
      frontier = std::move(up);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Extends g0, given on up(v_0) minus up(v_l) for the common axis, to a
/// conjugator g with g b' g^-1 = b: on the k-th translate of that block g is
/// b^k g0 b'^-k. The result covers heights [-M l, M l] and distance depth from
/// the axis. g0 is labelled relative to the axis vertex of height 0 and must fix
/// the axis up to height l.
inline PartialTreeMap build_conjugator(const BallAffineMap& b, const BallAffineMap& b_prime,
                                       const LevelPerm& g0, long window, long depth) {
  if (b.n != b_prime.n || b.n != g0.n) fail(ErrorKind::BaseMismatch, "inputs over different bases");
  if (b.h != b_prime.h) {
    fail(ErrorKind::HeightMismatch, "height changes " + std::to_string(b.h) + " and " +
                                        std::to_string(b_prime.h) + " differ");
  }
  const long n = b.n;
  const long l = b.h;
  if (l < 1) fail(ErrorKind::InvalidParams, "conjugator needs height change >= 1");
  if (window < 0 || depth < 0) fail(ErrorKind::InvalidParams, "window and depth must be nonnegative");
  Rational xs = axis_fixed_point(b);
  Rational xs_prime = axis_fixed_point(b_prime);
  if (xs != xs_prime) {
    long first = n_valuation(xs - xs_prime, n).value() + 1;
    fail(ErrorKind::AxisMismatch, "axes separate at height " + std::to_string(first));
  }
  if (g0.depth() < l - 1 + depth) {
    fail(ErrorKind::InvalidParams, "g0 depth " + std::to_string(g0.depth()) + " < " +
                                       std::to_string(l - 1 + depth));
  }
  g0.check();
  TreeVertex base = TreeVertex::containing(n, xs, 0);
  for (long i = 1; i <= std::min(l, g0.depth()); ++i) {
    Label y = detail::relative_label(base, TreeVertex::containing(n, xs, i));
    if (g0.at(i, y) != y) {
      fail(ErrorKind::InvalidParams, "g0 moves the axis at level " + std::to_string(i));
    }
  }

  auto g0_act = [&](const TreeVertex& w) {
    long i = w.h - base.h;
    if (i == 0) return w;
    return detail::from_relative_label(base, i, g0.at(i, detail::relative_label(base, w)));
  };

  PartialTreeMap g{n, {}};
  for (const auto& w : axis_neighbourhood(n, xs, -window * l, window * l, depth)) {
    long h0 = std::min(w.h, n_valuation(w.c - xs, n).is_infinite()
                                 ? w.h
                                 : n_valuation(w.c - xs, n).value());
    long k = floor_div(h0, l);
    TreeVertex w0 = act(power(b_prime, -k), w);
    g.pairs.emplace(w, act(power(b, k), g0_act(w0)));
  }
  return g;
}

/// Pairs (v, f v) in the domain where g f' g^-1 = f fails.
inline std::vector<TreeVertex> conjugation_failures(const PartialTreeMap& g, const BallAffineMap& f,
                                                    const BallAffineMap& f_prime) {
  std::vector<TreeVertex> bad;
  for (const auto& [v, gv] : g.pairs) {
    auto lhs = g.find(act(f_prime, v));
    if (!lhs) continue;
    if (!(*lhs == act(f, gv))) bad.push_back(v);
  }
  return bad;
}

}  // namespace bsl
