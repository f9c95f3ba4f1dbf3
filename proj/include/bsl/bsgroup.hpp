#pragma once

// The solvable Baumslag-Solitar group BS(1,N) = <a, b | b a b^-1 = a^N>,
// represented faithfully by affine maps t -> N^h t + c of the real line.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "bsl/error.hpp"
#include "bsl/exactnum.hpp"

namespace bsl {

struct Letter {
  char gen;
  long exp;
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A free word kept in merged form: adjacent letters have distinct generators
/// and no exponent is zero.
class Word {
 public:
  Word() = default;
  explicit Word(const std::vector<Letter>& letters) {
    for (const auto& l : letters) append(l);
  }

  static Word gen(char g, long e = 1) {
    Word w;
    w.append({g, e});
    return w;
  }

  void append(Letter l) {
    if (l.exp == 0) return;
    if (!letters_.empty() && letters_.back().gen == l.gen) {
      letters_.back().exp += l.exp;
      if (letters_.back().exp == 0) letters_.pop_back();
      return;
    }
    letters_.push_back(l);
  }

  void append(const Word& w) {
    for (const auto& l : w.letters_) append(l);
  }

  [[nodiscard]] Word inverse() const {
    Word w;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.append({it->gen, -it->exp});
    return w;
  }

  [[nodiscard]] Word power(long k) const {
    Word base = k < 0 ? inverse() : *this;
    Word w;
    for (long i = 0; i < (k < 0 ? -k : k); ++i) w.append(base);
    return w;
  }

  [[nodiscard]] const std::vector<Letter>& letters() const { return letters_; }
  [[nodiscard]] bool empty() const { return letters_.empty(); }

  friend Word operator*(Word u, const Word& v) {
    u.append(v);
    return u;
  }
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// "a b^-1 a^3"; the empty word prints as "1".
inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& [g, e] : w.letters()) {
    if (!out.empty()) out += ' ';
    out += g;
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

/// Parses "B^-1 A B", "a b a b^-1", "aba" or "1". Letters are case-insensitive
/// and must belong to alphabet.
inline Word parse_word(std::string_view text, std::string_view alphabet = "ab") {
  Word w;
  std::size_t i = 0;
  auto bad = [&](const std::string& why) {
    fail(ErrorKind::ParseError, "word '" + std::string(text) + "': " + why);
  };
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_space();
  if (i < text.size() && text.substr(i) == "1") return w;
  while (true) {
    skip_space();
    if (i >= text.size()) break;
    if (text[i] == '*' || text[i] == '.') {
      ++i;
      continue;
    }
    char g = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
    if (alphabet.find(g) == std::string_view::npos) bad(std::string("unexpected '") + text[i] + "'");
    ++i;
    long e = 1;
    skip_space();
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip_space();
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      std::string_view digits = text.substr(start, i - start);
      if (!detail::is_integer_literal(digits)) bad("missing exponent");
      try {
        e = std::stol(std::string(digits));
      } catch (const std::exception&) {
        bad("exponent out of range");
      }
    }
    w.append({g, e});
  }
  return w;
}

struct BSWord {
  long N = 2;
  Word word;

  static BSWord parse(long N, std::string_view text) {
    if (N < 2) fail(ErrorKind::InvalidParams, "N must be >= 2");
    return {N, parse_word(text, "ab")};
  }
};

/// The affine map t -> N^h t + c; a complete invariant of the group element.
struct AffineInvariant {
  long N = 2;
  long h = 0;
  Rational c = 0;
  friend bool operator==(const AffineInvariant&, const AffineInvariant&) = default;
};

/// f o g.
inline AffineInvariant compose(const AffineInvariant& f, const AffineInvariant& g) {
  if (f.N != g.N) fail(ErrorKind::BaseMismatch, "BS(1,N) elements with different N");
  return {f.N, f.h + g.h, rpow(f.N, f.h) * g.c + f.c};
}

inline AffineInvariant inverse(const AffineInvariant& f) {
  return {f.N, -f.h, -f.c * rpow(f.N, -f.h)};
}

inline AffineInvariant generator_invariant(long N, char g) {
  if (g == 'a') return {N, 0, Rational(1)};
  if (g == 'b') return {N, 1, Rational(0)};
  fail(ErrorKind::InvalidGenerator, std::string("not a BS(1,N) generator: ") + g);
}

inline AffineInvariant power(const AffineInvariant& f, long k) {
  AffineInvariant base = k < 0 ? inverse(f) : f;
  AffineInvariant out{f.N, 0, Rational(0)};
  // Square and multiply.
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  while (e) {
    if (e & 1) out = compose(out, base);
    base = compose(base, base);
    e >>= 1;
  }
  return out;
}

inline AffineInvariant evaluate(const BSWord& w) {
  AffineInvariant out{w.N, 0, Rational(0)};
  for (const auto& [g, e] : w.word.letters()) {
    out = compose(out, power(generator_invariant(w.N, g), e));
  }
  return out;
}

/// b^-x a^y b^z with x, z >= 0 and N not dividing y when x, z > 0.
struct BSNormalForm {
  long N = 2;
  long x = 0;
  BigInt y = 0;
  long z = 0;
  friend bool operator==(const BSNormalForm&, const BSNormalForm&) = default;

  [[nodiscard]] AffineInvariant invariant() const {
    return {N, z - x, Rational(y) / Rational(ipow(N, x))};
  }

  [[nodiscard]] BSWord word() const {
    Word w;
    w.append({'b', -x});
    if (y != 0) w.append({'a', y.convert_to<long>()});
    w.append({'b', z});
    return {N, w};
  }
};

inline BSNormalForm normalize(const AffineInvariant& f) {
  auto sig = PrimeSignature::of(f.N);
  if (!in_Z_inv_n(f.c, sig)) {
    fail(ErrorKind::InvalidParams, "translation part not in Z[1/" + std::to_string(f.N) + "]");
  }
  long x = std::max(0L, -f.h);
  BigInt Nx = ipow(f.N, x);
  while (den(f.c * Rational(Nx)) != 1) {
    ++x;
    Nx *= f.N;
  }
  return {f.N, x, num(f.c * Rational(Nx)), x + f.h};
}

inline BSNormalForm normalize(const BSWord& w) { return normalize(evaluate(w)); }

inline BSNormalForm multiply(const BSNormalForm& u, const BSNormalForm& v) {
  if (u.N != v.N) fail(ErrorKind::BaseMismatch, "normal forms with different N");
  return normalize(compose(u.invariant(), v.invariant()));
}

inline BSNormalForm invert(const BSNormalForm& u) { return normalize(inverse(u.invariant())); }

inline std::string to_string(const BSNormalForm& f) { return to_string(f.word().word); }

/// Generators of Aut(BS(1,N)) following Collins, plus the endomorphisms
/// theta_m : a -> a^m, b -> b. Q_i is theta of the i-th prime of N (1-based).
struct CollinsGen {
  enum class Kind { A, B, C, D, Q, Theta };
  Kind kind;
  long param = 0;

  static CollinsGen parse(std::string_view text) {
    std::string s;
    for (char ch : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    auto tail = [&](std::size_t from) -> long {
      std::string_view rest = std::string_view(s).substr(from);
      if (!rest.empty() && rest.front() == '_') rest.remove_prefix(1);
      if (!detail::is_integer_literal(rest)) {
        fail(ErrorKind::InvalidGenerator, "bad Collins generator '" + std::string(text) + "'");
      }
      return std::stol(std::string(rest));
    };
    if (s == "a") return {Kind::A};
    if (s == "b") return {Kind::B};
    if (s == "c") return {Kind::C};
    if (s == "d") return {Kind::D};
    if (s.rfind("theta", 0) == 0) return {Kind::Theta, tail(5)};
    if (s.rfind("q", 0) == 0) return {Kind::Q, tail(1)};
    fail(ErrorKind::InvalidGenerator, "unknown Collins generator '" + std::string(text) + "'");
  }
};

inline std::string to_string(const CollinsGen& g) {
  switch (g.kind) {
    case CollinsGen::Kind::A: return "A";
    case CollinsGen::Kind::B: return "B";
    case CollinsGen::Kind::C: return "C";
    case CollinsGen::Kind::D: return "D";
    case CollinsGen::Kind::Q: return "Q_" + std::to_string(g.param);
    case CollinsGen::Kind::Theta: return "theta_" + std::to_string(g.param);
  }
  return "?";
}

/// Images of a and b under the generator, as words.
inline std::pair<Word, Word> collins_images(const CollinsGen& g, long N) {
  Word a = Word::gen('a'), b = Word::gen('b');
  switch (g.kind) {
    case CollinsGen::Kind::A: return {a, a * b * a.inverse()};
    case CollinsGen::Kind::B: return {b * a * b.inverse(), b};
    case CollinsGen::Kind::C: return {a, a * b};
    case CollinsGen::Kind::D: return {a.inverse(), b};
    case CollinsGen::Kind::Q: {
      auto sig = PrimeSignature::of(N);
      if (g.param < 1 || g.param > static_cast<long>(sig.factors.size())) {
        fail(ErrorKind::InvalidGenerator, "Q_" + std::to_string(g.param) + " out of range for N=" +
                                              std::to_string(N));
      }
      return {Word::gen('a', sig.factors[g.param - 1].p), b};
    }
    case CollinsGen::Kind::Theta:
      if (g.param < 1) fail(ErrorKind::InvalidGenerator, "theta_m needs m >= 1");
      return {Word::gen('a', g.param), b};
  }
  fail(ErrorKind::InvalidGenerator, "unknown generator");
}

inline BSWord apply_collins(const CollinsGen& g, const BSWord& w) {
  auto [ia, ib] = collins_images(g, w.N);
  Word out;
  for (const auto& [gen, e] : w.word.letters()) out.append((gen == 'a' ? ia : ib).power(e));
  return {w.N, out};
}

inline bool is_automorphism(const CollinsGen& g, long N) {
  if (g.kind != CollinsGen::Kind::Theta) {
    collins_images(g, N);
    return true;
  }
  if (g.param < 1) fail(ErrorKind::InvalidGenerator, "theta_m needs m >= 1");
  return PrimeSignature::of(N).divides_some_power(BigInt(g.param));
}

/// Whether the element lies in theta_m(BS(1,N)), i.e. c in m Z[1/N].
inline bool in_image_theta_m(const BSWord& w, long m) {
  if (m < 1) fail(ErrorKind::InvalidParams, "m must be >= 1");
  return in_Z_inv_n(evaluate(w).c / Rational(m), PrimeSignature::of(w.N));
}

}  // namespace bsl
