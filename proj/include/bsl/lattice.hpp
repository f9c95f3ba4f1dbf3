#pragma once

// Lattice embeddings of BS(1, n^l) into G_n: validation, the (s, m)
// classifier, conjugacy and automorphism equivalence, straightening into the
// standard position, covolumes, and the presentations of lattices containing
// a BS(1, n^l) lattice with index two.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsl/bsgroup.hpp"
#include "bsl/error.hpp"
#include "bsl/exactnum.hpp"
#include "bsl/isometry.hpp"
#include "bsl/tree.hpp"

namespace bsl {

struct EmbeddingSpec {
  long n = 2;
  long l = 1;
  ArithmeticIsometry a;
  ArithmeticIsometry b;
  friend bool operator==(const EmbeddingSpec&, const EmbeddingSpec&) = default;
};

/// Condition (*): every prime factor of m divides n, and n does not divide m.
inline bool satisfies_star(long n, const BigInt& m) {
  if (m < 1) return false;
  return PrimeSignature::of(n).divides_some_power(m) && m % n != 0;
}

/// phi_{s,m}: a -> (a_s)^m, b^l -> b^l.
inline EmbeddingSpec make_phi(long n, long l, const Rational& s, const BigInt& m) {
  if (s == 0) fail(ErrorKind::InvalidParams, "s must be nonzero");
  if (m < 1) fail(ErrorKind::InvalidParams, "m must be positive");
  if (l < 1) fail(ErrorKind::InvalidParams, "l must be positive");
  return {n, l, ArithmeticIsometry::make(1, s * Rational(m), BallAffineMap::translation(n, Rational(m))),
          ArithmeticIsometry::standard_b(n, l)};
}

/// The first violated condition, or nothing for a valid discrete embedding.
inline std::optional<std::string> validate(const EmbeddingSpec& e) {
  if (e.l < 1) return "l must be >= 1";
  if (e.a.n != e.n || e.b.n != e.n) return "generator images over a different base";
  try {
    e.a.check();
    e.b.check();
  } catch (const Error& err) {
    return std::string("malformed isometry: ") + err.what();
  }
  if (e.a.eps != 1 || e.b.eps != 1) return "images must preserve orientation (eps = +1)";
  if (e.a.h != 0) return "image of a must be elliptic (h = 0)";
  if (e.b.h != e.l) return "image of b must have height change l = " + std::to_string(e.l);
  if (e.a.alpha == 0) return "td(image of a) must be nonzero";
  if (e.a.tree.u != 1) return "tree part of the image of a must be a translation (u = 1) for discreteness";
  if (e.a.tree.beta == 0) return "tree part of the image of a must be nontrivial (beta != 0)";
  auto lhs = conjugate(e.b, e.a);
  auto rhs = power(e.a, static_cast<long>(ipow(e.n, e.l)));
  if (!(lhs == rhs)) return "relation b a b^-1 = a^(n^l) fails";
  return std::nullopt;
}

inline void require_valid(const EmbeddingSpec& e) {
  if (auto why = validate(e)) fail(ErrorKind::ValidationFailed, *why);
}

struct ClassifyResult {
  Rational s;
  BigInt m;
  TreeVertex w0;
  long h0 = 0;
  BigInt j;
  long k = 0;
  friend bool operator==(const ClassifyResult&, const ClassifyResult&) = default;
};

namespace detail {

/// Closed form of the invariants from the per-prime valuations of beta.
inline ClassifyResult classify_closed_form(const EmbeddingSpec& e) {
  auto sig = PrimeSignature::of(e.n);
  const Rational& beta = e.a.tree.beta;
  long h0 = n_valuation(beta, sig).value();
  long k = 0;
  std::vector<long> excess;
  for (const auto& [p, ep] : sig.factors) {
    long r = p_valuation(beta, p).value() - h0 * ep;
    excess.push_back(r);
    long step = e.l * ep;
    k = std::max(k, (r + step - 1) / step);
  }
  BigInt j = 1, m = 1;
  for (std::size_t i = 0; i < sig.factors.size(); ++i) {
    const auto& [p, ep] = sig.factors[i];
    j *= ipow(p, e.l * k * ep - excess[i]);
    m *= ipow(p, excess[i]);
  }
  Rational s = td(e.a) / (Rational(m) * rpow(e.n, h0));
  return {s, m, axis_vertex(e.b.tree, h0), h0, j, k};
}

/// The construction read literally: find the top of Axis(b) in Fix(c), move it
/// to v_0 by a conjugation, then look for the first axis vertex w_k = b^k v_0
/// above which a power of c acts transitively forever.
inline ClassifyResult classify_by_search(const EmbeddingSpec& e) {
  const long n = e.n;
  const auto& c = e.a;
  auto on_axis = [&](long h) { return axis_vertex(e.b.tree, h); };
  constexpr long kLimit = 4096;
  long h0 = 0;
  if (fixes(c.tree, on_axis(0))) {
    while (fixes(c.tree, on_axis(h0 + 1))) {
      if (++h0 > kLimit) fail(ErrorKind::Internal, "c fixes the axis beyond the search limit");
    }
  } else {
    while (!fixes(c.tree, on_axis(h0))) {
      if (--h0 < -kLimit) fail(ErrorKind::Internal, "no fixed axis vertex within the search limit");
    }
  }
  TreeVertex w0 = on_axis(h0);

  Rational xs = axis_fixed_point(e.b.tree);
  auto shift = ArithmeticIsometry::pure_tree(BallAffineMap::translation(n, -xs));
  auto lower = ArithmeticIsometry::standard_b(n, -h0);
  auto g = compose(lower, shift);
  auto c2 = conjugate(g, c);
  auto b2 = conjugate(g, e.b);
  if (axis_fixed_point(b2.tree) != 0 || !fixes(c2.tree, TreeVertex::root(n)) ||
      fixes(c2.tree, axis_vertex(b2.tree, 1))) {
    fail(ErrorKind::Internal, "normalizing conjugation did not move w_0 to v_0");
  }

  for (long k = 0; k <= kLimit; ++k) {
    TreeVertex wk = axis_vertex(b2.tree, e.l * k);
    BigInt j = 1;
    auto ck = c2.tree;
    while (!fixes(ck, wk)) {
      ck = compose(ck, c2.tree);
      if (++j > (BigInt(1) << 24)) fail(ErrorKind::TooLarge, "orbit of w_k too long");
    }
    if (transitive_forever(ck.beta, wk)) {
      BigInt m = solve_j_eta(j, e.l * k, n);
      Rational s = td(c2) * Rational(j) / rpow(n, e.l * k);
      return {s, m, w0, h0, j, k};
    }
  }
  fail(ErrorKind::Internal, "no transitive-forever level found");
}

}  // namespace detail

inline ClassifyResult classify(const EmbeddingSpec& e) {
  require_valid(e);
  auto fast = detail::classify_closed_form(e);
  auto slow = detail::classify_by_search(e);
  if (!(fast == slow)) {
    fail(ErrorKind::Internal, "closed form (s=" + to_string(fast.s) + ", m=" + to_string(fast.m) +
                                  ") disagrees with search (s=" + to_string(slow.s) +
                                  ", m=" + to_string(slow.m) + ")");
  }
  return fast;
}

inline EmbeddingSpec conjugate(const ArithmeticIsometry& g, const EmbeddingSpec& e) {
  return {e.n, e.l, conjugate(g, e.a), conjugate(g, e.b)};
}

inline EmbeddingSpec apply_autgn(const AutGn& phi, const EmbeddingSpec& e) {
  return {e.n, e.l, apply_autgn(phi, e.a), apply_autgn(phi, e.b)};
}

inline bool are_conjugate(const EmbeddingSpec& x, const EmbeddingSpec& y) {
  if (x.n != y.n) fail(ErrorKind::BaseMismatch, "embeddings into different G_n");
  if (x.l != y.l) {
    require_valid(x);
    require_valid(y);
    return false;
  }
  auto cx = classify(x), cy = classify(y);
  return cx.s == cy.s && cx.m == cy.m;
}

inline bool are_automorphism_equivalent(const EmbeddingSpec& x, const EmbeddingSpec& y) {
  if (x.n != y.n) fail(ErrorKind::BaseMismatch, "embeddings into different G_n");
  auto cx = classify(x), cy = classify(y);
  return x.l == y.l && cx.m == cy.m;
}

/// Conjugator into the standard position on a window, for embeddings already
/// acting transitively forever above the axis vertex of height 0 (m = 1,
/// h0 = 0). The map is defined within distance depth of the axis and at
/// heights [-window l, window l] after aligning the axis with that of b.
inline PartialTreeMap straighten(const EmbeddingSpec& e, long depth, long window = 1) {
  auto inv = classify(e);
  if (inv.m != 1 || inv.h0 != 0) {
    fail(ErrorKind::NotStraightenable, "needs m = 1 and h0 = 0, got m = " + to_string(inv.m) +
                                           ", h0 = " + std::to_string(inv.h0));
  }
  if (depth < 1) fail(ErrorKind::InvalidParams, "depth must be >= 1");
  const long n = e.n;
  const long l = e.l;
  Rational xs = axis_fixed_point(e.b.tree);
  auto align = BallAffineMap::translation(n, -xs);
  auto b1 = conjugate(align, e.b.tree);
  auto c1 = conjugate(align, e.a.tree);

  // f_i sends c^r v_i to a^r v_i, where v_i is the axis vertex of height i.
  LevelPerm f{n, {}};
  TreeVertex root = TreeVertex::root(n);
  for (long i = 1; i <= l - 1 + depth; ++i) {
    std::vector<Label> s(LevelPerm::level_size(n, i));
    TreeVertex vi{n, i, Rational(0)};
    auto o = orbit(c1, vi, s.size());
    if (o.size() != s.size()) fail(ErrorKind::Internal, "c is not transitive on level " + std::to_string(i));
    for (std::size_t r = 0; r < o.size(); ++r) s[detail::relative_label(root, o[r])] = static_cast<Label>(r);
    f.sigma.push_back(std::move(s));
  }
  auto g = build_conjugator(BallAffineMap::standard_b(n, l), b1, f, window, depth);

  PartialTreeMap out{n, {}};
  auto unalign = inverse(align);
  for (const auto& [v, gv] : g.pairs) out.pairs.emplace(act(unalign, v), gv);

  auto bad_a = conjugation_failures(out, BallAffineMap::standard_a(n), e.a.tree);
  auto bad_b = conjugation_failures(out, BallAffineMap::standard_b(n, l), e.b.tree);
  if (!bad_a.empty() || !bad_b.empty()) fail(ErrorKind::Internal, "straightening map fails to conjugate");
  return out;
}

struct QuotientEntry {
  TreeVertex rep;
  Rational a_v;
  long h_v = 0;
  BigInt stab0 = 1;
  friend bool operator==(const QuotientEntry&, const QuotientEntry&) = default;
};

struct QuotientData {
  long n = 2;
  std::vector<QuotientEntry> entries;
};

inline void check_quotient(const QuotientData& q) {
  for (std::size_t i = 0; i < q.entries.size(); ++i) {
    const auto& e = q.entries[i];
    if (e.a_v <= 0) fail(ErrorKind::ValidationFailed, "a_v must be positive");
    if (e.stab0 < 1) fail(ErrorKind::ValidationFailed, "stabilizer order must be >= 1");
    for (std::size_t k = 0; k < i; ++k) {
      if (q.entries[k].rep == e.rep) fail(ErrorKind::ValidationFailed, "repeated representative " + to_string(e.rep));
    }
  }
}

/// sum of a_v n^{-h(v)} / |Gamma_{v,0}|.
inline Rational covolume_from_quotient(const QuotientData& q) {
  check_quotient(q);
  Rational total = 0;
  for (const auto& e : q.entries) total += e.a_v * rpow(q.n, -e.h_v) / Rational(e.stab0);
  return total;
}

/// One orbit of vertices per axis vertex w_0, ..., w_{l-1}. The stabilizer of
/// w_i consists of b^-x a^y b^x whose translation y beta n^{-lx} lies in
/// n^{h0+i} Z_n; the smallest positive td among them is |alpha| n^{h0+i} divided
/// by the n-part of beta.
inline QuotientData enumerate_quotient(const EmbeddingSpec& e) {
  auto inv = classify(e);
  auto sig = PrimeSignature::of(e.n);
  Rational visible = n_part(e.a.tree.beta, sig);
  QuotientData q{e.n, {}};
  for (long i = 0; i < e.l; ++i) {
    long h = inv.h0 + i;
    q.entries.push_back({axis_vertex(e.b.tree, h), mp::abs(e.a.alpha) * rpow(e.n, h) / visible, h, 1});
  }
  return q;
}

struct PresentationCase {
  int which = 1;
  long n = 2;
  long l = 1;
  long m_ref = 0;
};

struct Relator {
  std::string name;
  Word word;
};

struct FullLattice {
  PresentationCase params;
  std::map<char, ArithmeticIsometry> generators;
  std::vector<Relator> relators;
  std::optional<BigInt> y;
  std::optional<BigInt> y_as_printed;
};

inline ArithmeticIsometry evaluate(const std::map<char, ArithmeticIsometry>& gens, const Word& w, long n) {
  ArithmeticIsometry out = ArithmeticIsometry::identity(n);
  for (const auto& [g, e] : w.letters()) {
    auto it = gens.find(g);
    if (it == gens.end()) fail(ErrorKind::InvalidGenerator, std::string("no generator named ") + g);
    out = compose(out, power(it->second, e));
  }
  return out;
}

inline bool verify_presentation(const std::map<char, ArithmeticIsometry>& gens, const std::vector<Word>& relators) {
  if (gens.empty()) fail(ErrorKind::InvalidParams, "no generators");
  long n = gens.begin()->second.n;
  return std::all_of(relators.begin(), relators.end(),
                     [&](const Word& r) { return evaluate(gens, r, n).is_identity(); });
}

/// Generators a, b (and c for cases 2 and 3) with their defining relators. In
/// case 3 the exponent y in c b c^-1 = a^y b is computed from the isometries.
inline FullLattice build_full_lattice(const PresentationCase& pc) {
  if (pc.which < 1 || pc.which > 3) fail(ErrorKind::CaseInvalid, "case must be 1, 2 or 3");
  if (pc.l < 1) fail(ErrorKind::CaseInvalid, "l must be >= 1");
  PrimeSignature::of(pc.n);
  if (pc.which == 2 && pc.l % 2 != 0) fail(ErrorKind::CaseInvalid, "case 2 needs even l");
  const long n = pc.n;
  const long N = static_cast<long>(ipow(n, pc.l));
  FullLattice out{pc, {}, {}, std::nullopt, std::nullopt};
  out.generators['a'] = ArithmeticIsometry::standard_a(n);
  out.generators['b'] = ArithmeticIsometry::standard_b(n, pc.l);
  Word a = Word::gen('a'), b = Word::gen('b'), c = Word::gen('c');
  out.relators.push_back({"b a b^-1 = a^(n^l)", b * a * b.inverse() * a.power(-N)});
  if (pc.which == 2) {
    long half = pc.l / 2;
    Rational root(ipow(n, half));
    out.generators['c'] = ArithmeticIsometry::make(-1, 0, BallAffineMap::make(n, half, -root, 0));
    out.relators.push_back({"c a c^-1 = a^-(n^(l/2))", c * a * c.inverse() * a.power(static_cast<long>(ipow(n, half)))});
    out.relators.push_back({"c^2 = b", c.power(2) * b.inverse()});
  } else if (pc.which == 3) {
    Rational m(pc.m_ref);
    out.generators['c'] = ArithmeticIsometry::make(-1, m, BallAffineMap::make(n, 0, -1, m));
    auto comm = evaluate(out.generators, c * b * c.inverse() * b.inverse(), n);
    if (comm.h != 0 || comm.eps != 1 || den(comm.alpha) != 1 ||
        !(comm.tree == BallAffineMap::translation(n, comm.alpha))) {
      fail(ErrorKind::Internal, "c b c^-1 b^-1 is not a power of a");
    }
    BigInt y = num(comm.alpha);
    out.y = y;
    out.y_as_printed = BigInt(pc.m_ref) * (1 - n);
    out.relators.push_back({"c^2 = 1", c.power(2)});
    out.relators.push_back({"c a c^-1 = a^-1", c * a * c.inverse() * a});
    out.relators.push_back({"c b c^-1 = a^y b", c * b * c.inverse() * b.inverse() * a.power(-y.convert_to<long>())});
  }
  return out;
}

}  // namespace bsl
