#pragma once

// Exhaustive checks at desk scale: the groups H_k = Aut(up_{<=k}(v_0)),
// centralizers of powers of the standard a, transitivity of translations on
// the levels above axis vertices, and the level sums behind the covolume
// formula. Enumeration is the ground truth; closed forms are shown next to it.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bsl/error.hpp"
#include "bsl/exactnum.hpp"
#include "bsl/tree.hpp"

namespace bsl {

struct Comparison {
  std::string name;
  Rational value;
  std::string relation;  // "=", "<=", ">=": brute <relation> value
  bool holds = false;
};

struct LemmaReport {
  std::string lemma;
  std::vector<std::pair<std::string, std::string>> params;
  Rational brute = 0;
  std::optional<Rational> formula;
  bool match = false;
  std::vector<Comparison> comparisons;
  std::vector<std::pair<std::string, std::string>> details;
  std::vector<std::string> notes;

  void set_formula(const Rational& f) {
    formula = f;
    match = brute == f;
  }

  void compare(const std::string& name, const Rational& value, const std::string& relation) {
    bool ok = relation == "=" ? brute == value : relation == "<=" ? brute <= value : brute >= value;
    comparisons.push_back({name, value, relation, ok});
  }
};

namespace detail {

/// Runs body(i) for i in [0, count) on up to threads workers. Each index owns
/// its output slot, so the result does not depend on scheduling.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline BigInt factorial(long n) {
  BigInt f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

inline std::vector<std::vector<Label>> all_permutations(long n) {
  std::vector<Label> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<Label>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace detail

/// (n!)^{(n^k - 1)/(n - 1)}: one local permutation per vertex below level k.
inline BigInt exact_order_Hk(long n, long k) {
  BigInt internal = (ipow(n, k) - 1) / (n - 1);
  return mp::pow(detail::factorial(n), static_cast<unsigned>(internal));
}

/// The closed form (n!)^k n^{k-1} as printed for |H_k|.
inline BigInt count_formula_Hk(long n, long k) {
  if (n < 2 || k < 1) fail(ErrorKind::InvalidParams, "need n >= 2 and k >= 1");
  return mp::pow(detail::factorial(n), static_cast<unsigned>(k)) * ipow(n, k - 1);
}

struct HkGroup {
  long n = 2;
  long k = 1;
  std::vector<LevelPerm> elements;

  [[nodiscard]] bool contains(const LevelPerm& f) const {
    return std::binary_search(elements.begin(), elements.end(), f);
  }
};

inline constexpr long kMaxLeaves = 64;
inline constexpr long kMaxGroupOrder = 1000000;
inline constexpr std::size_t kFullClosureLimit = 2048;

inline void check_Hk_feasible(long n, long k) {
  if (n < 2 || k < 1) fail(ErrorKind::InvalidParams, "need n >= 2 and k >= 1");
  if (ipow(n, k) > kMaxLeaves) fail(ErrorKind::TooLarge, "n^k exceeds " + std::to_string(kMaxLeaves));
  if (exact_order_Hk(n, k) > kMaxGroupOrder) {
    fail(ErrorKind::TooLarge, "|H_k| = " + to_string(exact_order_Hk(n, k)) + " exceeds " +
                                  std::to_string(kMaxGroupOrder));
  }
}

/// Verifies identity, inverses and closure; pairwise when the group is small,
/// otherwise for products of a fixed spread of elements with everything.
inline std::optional<std::string> closure_defect(const HkGroup& H, unsigned threads = 1) {
  const auto& el = H.elements;
  if (!std::is_sorted(el.begin(), el.end())) return "elements are not sorted";
  if (std::adjacent_find(el.begin(), el.end()) != el.end()) return "duplicate elements";
  if (!H.contains(LevelPerm::identity(H.n, H.k))) return "identity missing";
  std::vector<std::size_t> left;
  if (el.size() <= kFullClosureLimit) {
    left.resize(el.size());
    std::iota(left.begin(), left.end(), 0);
  } else {
    std::size_t step = el.size() / 64;
    for (std::size_t i = 0; i < el.size(); i += step) left.push_back(i);
  }
  std::vector<char> ok(left.size(), 1);
  detail::parallel_for(left.size(), threads, [&](std::size_t t) {
    const auto& f = el[left[t]];
    if (!H.contains(inverse(f))) ok[t] = 0;
    for (const auto& g : el) {
      if (!H.contains(compose(f, g))) {
        ok[t] = 0;
        return;
      }
    }
  });
  if (std::find(ok.begin(), ok.end(), 0) != ok.end()) return "not closed under composition or inverse";
  return std::nullopt;
}

/// All automorphisms of the depth-k truncation of up(v_0), in canonical order.
/// An element is a choice of permutation of the n children at every vertex
/// below level k.
inline HkGroup enumerate_Hk(long n, long k, unsigned threads = 1) {
  check_Hk_feasible(n, k);
  auto local = detail::all_permutations(n);
  const std::size_t nl = local.size();
  const std::size_t internal = static_cast<std::size_t>((ipow(n, k) - 1) / (n - 1));
  const std::size_t total = static_cast<std::size_t>(exact_order_Hk(n, k));

  // Vertex y of level i - 1 has index (n^{i-1} - 1)/(n - 1) + y.
  auto build = [&](std::size_t code) {
    std::vector<std::size_t> choice(internal);
    for (std::size_t v = 0; v < internal; ++v) {
      choice[v] = code % nl;
      code /= nl;
    }
    LevelPerm f{n, {}};
    std::vector<Label> prev{0};
    std::size_t offset = 0;
    for (long i = 1; i <= k; ++i) {
      std::size_t below = prev.size();
      std::vector<Label> s(below * static_cast<std::size_t>(n));
      for (std::size_t y = 0; y < below; ++y) {
        const auto& pi = local[choice[offset + y]];
        for (long t = 0; t < n; ++t) {
          s[y + below * t] = static_cast<Label>(prev[y] + below * pi[t]);
        }
      }
      offset += below;
      f.sigma.push_back(s);
      prev = std::move(s);
    }
    return f;
  };

  HkGroup H{n, k, std::vector<LevelPerm>(total)};
  detail::parallel_for(total, threads, [&](std::size_t code) { H.elements[code] = build(code); });
  std::sort(H.elements.begin(), H.elements.end());
  if (auto d = closure_defect(H, threads)) fail(ErrorKind::Internal, "enumerated H_k: " + *d);
  return H;
}

inline std::string param_str(long v) { return std::to_string(v); }

inline LemmaReport count_Hk_report(long n, long k, unsigned threads = 1) {
  auto H = enumerate_Hk(n, k, threads);
  LemmaReport r;
  r.lemma = "count-hk";
  r.params = {{"n", param_str(n)}, {"k", param_str(k)}};
  r.brute = Rational(BigInt(H.elements.size()));
  r.set_formula(Rational(count_formula_Hk(n, k)));
  r.compare("formula (n!)^k n^(k-1)", *r.formula, "=");
  BigInt previous = k == 1 ? BigInt(1) : exact_order_Hk(n, k - 1);
  r.compare("orbit-stabilizer n! |H_(k-1)|^n", Rational(detail::factorial(n) * mp::pow(previous, n)), "=");
  r.compare("recurrence n! n |H_(k-1)|", Rational(detail::factorial(n) * n * previous), "=");
  r.details.push_back({"closure", H.elements.size() <= kFullClosureLimit ? "pairwise" : "sampled"});
  return r;
}

inline HkGroup centralizer_in_Hk(const LevelPerm& g, const HkGroup& H, unsigned threads = 1) {
  if (!H.contains(g)) fail(ErrorKind::NotMember, "element is not in H_k");
  std::vector<char> keep(H.elements.size(), 0);
  detail::parallel_for(H.elements.size(), threads,
                       [&](std::size_t i) { keep[i] = commutes(H.elements[i], g) ? 1 : 0; });
  HkGroup C{H.n, H.k, {}};
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) C.elements.push_back(H.elements[i]);
  }
  return C;
}

/// a^m restricted to depth k.
inline LevelPerm standard_a_power(long n, long k, const BigInt& m) {
  return build_Aeta(TruncatedNAdic::make(n, k, m));
}

/// Minimal l with m = t m1, gcd(t, n) = 1 and m1 | n^l.
inline long smooth_level(long n, const BigInt& m) {
  if (m < 1) fail(ErrorKind::InvalidParams, "m must be positive");
  auto sig = PrimeSignature::of(n);
  long l = 0;
  for (const auto& [p, e] : sig.factors) {
    long v = padic_valuation(m, p);
    l = std::max(l, (v + e - 1) / e);
  }
  return l;
}

inline LemmaReport centralizer_bound_report(long n, long k, const BigInt& m, unsigned threads = 1) {
  long l = smooth_level(n, m);
  if (l >= k) {
    fail(ErrorKind::InvalidParams, "needs l < k; m = " + to_string(m) + " gives l = " + std::to_string(l));
  }
  auto H = enumerate_Hk(n, k, threads);
  auto C = centralizer_in_Hk(standard_a_power(n, k, m), H, threads);
  BigInt Hl = l == 0 ? BigInt(1) : exact_order_Hk(n, l);
  LemmaReport r;
  r.lemma = "centralizer-bound";
  r.params = {{"n", param_str(n)}, {"k", param_str(k)}, {"m", to_string(m)}, {"l", param_str(l)}};
  r.brute = Rational(BigInt(C.elements.size()));
  r.set_formula(Rational(ipow(n, k) * Hl));
  r.compare("bound n^k |H_l|", *r.formula, "<=");
  r.compare("bound n^(k+l-1) (n!)^l", Rational(ipow(n, k + l - 1) * mp::pow(detail::factorial(n), l)), "<=");
  r.compare("split sequence n^((k-l) n^l) |H_l|",
            Rational(mp::pow(BigInt(n), static_cast<unsigned>((k - l) * ipow(n, l))) * Hl), "=");
  r.details.push_back({"|H_k|", std::to_string(H.elements.size())});
  return r;
}

struct TransSearch {
  long k = 0;
  BigInt j = 1;
};

struct TransSearchResult {
  TransSearch raw;
  long h0 = 0;
  TransSearch normalized;
  long certified_depth = 0;
  bool certified = false;
  std::vector<std::string> notes;
};

namespace detail {

/// Minimal k and j with j beta in n^{lk} Z_n and j beta / n^{lk} a unit.
inline TransSearch trans_search(const Rational& beta, long n, long l) {
  auto sig = PrimeSignature::of(n);
  for (long k = 0; k <= 4096; ++k) {
    Rational scale = rpow(n, l * k);
    BigInt j = 1;
    while (!in_ball(Rational(j) * beta, l * k, sig)) {
      if (++j > (BigInt(1) << 26)) fail(ErrorKind::TooLarge, "orbit of w_k too long");
    }
    if (is_unit_in_Zn(Rational(j) * beta / scale, sig)) return {k, j};
  }
  fail(ErrorKind::Internal, "no transitive level found");
}

/// Size of the orbit of 0 under y -> y + delta on Z/n^i, by walking it.
inline std::uint64_t orbit_size(std::uint64_t delta, std::uint64_t modulus) {
  delta %= modulus;
  std::uint64_t y = delta, steps = 1;
  while (y != 0) {
    y += delta;
    if (y >= modulus) y -= modulus;
    ++steps;
  }
  return steps;
}

}  // namespace detail

/// The first axis vertex w_k above which a power of translation by beta acts
/// transitively forever, for the raw beta and after moving the top fixed axis
/// vertex to v_0. The normalized answer is certified by walking orbits on the
/// levels above w_k up to depth.
inline TransSearchResult eventually_transitive_search(const Rational& beta, long n, long l, long depth) {
  if (beta == 0) fail(ErrorKind::ZeroTranslation, "beta = 0 fixes the whole tree");
  if (l < 1) fail(ErrorKind::InvalidParams, "l must be >= 1");
  if (depth < 1) fail(ErrorKind::InvalidParams, "depth must be >= 1");
  if (ipow(n, depth) > BigInt(1) << 26) fail(ErrorKind::TooLarge, "n^depth too large to walk");
  TransSearchResult out;
  out.raw = detail::trans_search(beta, n, l);
  out.h0 = n_valuation(beta, n).value();
  Rational b0 = beta / rpow(n, out.h0);
  out.normalized = detail::trans_search(b0, n, l);

  // Above w_k labels are y with ball n^{lk} y + n^{lk+i} Z_n, and c^j shifts
  // them by delta = j b0 / n^{lk}. The orbit of w_k itself is walked on the
  // labels of level lk of up(v_0).
  auto walk_j = [&](long k) -> std::optional<BigInt> {
    BigInt mod = ipow(n, l * k);
    if (mod > BigInt(1) << 62) return std::nullopt;
    auto delta = static_cast<std::uint64_t>(reduce_mod_power(b0, n, l * k));
    return BigInt(detail::orbit_size(delta, static_cast<std::uint64_t>(mod)));
  };
  auto transitive_at = [&](long k, const BigInt& j, long level) {
    auto delta = static_cast<std::uint64_t>(reduce_mod_power(Rational(j) * b0 / rpow(n, l * k), n, level));
    auto mod = static_cast<std::uint64_t>(ipow(n, level));
    return detail::orbit_size(delta, mod) == mod;
  };
  bool ok = true;
  for (long k = 0; k <= out.normalized.k && ok; ++k) {
    auto j = walk_j(k);
    if (!j) {
      out.notes.push_back("orbit of w_" + std::to_string(k) + " too long to walk");
      BigInt jj = 1;
      while (!in_ball(Rational(jj) * b0, l * k, n)) ++jj;
      j = jj;
    }
    bool last = k == out.normalized.k;
    if (last && *j != out.normalized.j) ok = false;
    // Failure to be transitive already shows on level 1.
    if (transitive_at(k, *j, last ? depth : 1) != last) ok = false;
  }
  out.certified = ok;
  out.certified_depth = depth;
  return out;
}

/// Orbits of y -> y + gamma on Z/n^i for i = 1..depth, weighting each orbit by
/// a_v |orbit| n^{-i}. Every level must sum back to a_v.
inline LemmaReport level_sum_check(long n, const Rational& gamma, const Rational& a_v, long depth) {
  auto sig = PrimeSignature::of(n);
  if (!in_ball(gamma, 0, sig)) fail(ErrorKind::InvalidParams, "gamma must lie in Z_n");
  if (depth < 1) fail(ErrorKind::InvalidParams, "depth must be >= 1");
  if (ipow(n, depth) > BigInt(1) << 24) fail(ErrorKind::TooLarge, "n^depth too large");
  LemmaReport r;
  r.lemma = "level-sum";
  r.params = {{"n", param_str(n)}, {"gamma", to_string(gamma)}, {"a_v", to_string(a_v)}, {"depth", param_str(depth)}};
  r.brute = a_v;
  bool all_equal = true;
  for (long i = 1; i <= depth; ++i) {
    const auto size = static_cast<std::size_t>(ipow(n, i));
    const auto g = static_cast<std::size_t>(reduce_mod_power(gamma, n, i));
    std::vector<char> seen(size, 0);
    Rational total = 0;
    std::size_t orbits = 0;
    for (std::size_t start = 0; start < size; ++start) {
      if (seen[start]) continue;
      std::size_t len = 0, y = start;
      do {
        seen[y] = 1;
        y = (y + g) % size;
        ++len;
      } while (y != start);
      ++orbits;
      total += a_v * Rational(BigInt(len)) / Rational(BigInt(size));
    }
    r.details.push_back({"level " + std::to_string(i), to_string(total) + " over " + std::to_string(orbits) + " orbits"});
    if (total != a_v) all_equal = false;
    r.brute = total;
  }
  r.set_formula(a_v);
  r.match = all_equal;
  return r;
}

namespace detail {

/// Largest set of pairwise commuting elements (Bron-Kerbosch with pivoting).
inline std::size_t max_commuting_set(const std::vector<LevelPerm>& el) {
  const std::size_t N = el.size();
  std::vector<std::vector<char>> adj(N, std::vector<char>(N, 0));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) adj[i][j] = adj[j][i] = commutes(el[i], el[j]) ? 1 : 0;
  }
  std::size_t best = 0;
  std::function<void(std::size_t, std::vector<std::size_t>, std::vector<std::size_t>)> rec =
      [&](std::size_t size, std::vector<std::size_t> P, std::vector<std::size_t> X) {
        if (P.empty()) {
          best = std::max(best, size);
          return;
        }
        if (size + P.size() <= best) return;
        std::size_t pivot = P.front(), pivot_deg = 0;
        for (auto* set : {&P, &X}) {
          for (auto u : *set) {
            std::size_t d = 0;
            for (auto v : P) d += adj[u][v];
            if (d >= pivot_deg) {
              pivot_deg = d;
              pivot = u;
            }
          }
        }
        std::vector<std::size_t> candidates;
        for (auto v : P) {
          if (!adj[pivot][v]) candidates.push_back(v);
        }
        for (auto v : candidates) {
          std::vector<std::size_t> P2, X2;
          for (auto u : P) {
            if (adj[v][u]) P2.push_back(u);
          }
          for (auto u : X) {
            if (adj[v][u]) X2.push_back(u);
          }
          rec(size + 1, std::move(P2), std::move(X2));
          P.erase(std::find(P.begin(), P.end(), v));
          X.push_back(v);
        }
      };
  std::vector<std::size_t> all(N);
  std::iota(all.begin(), all.end(), 0);
  rec(0, all, {});
  return best;
}

}  // namespace detail

inline constexpr std::size_t kAbelianSearchLimit = 200;

/// Index of C_{H_k}(a^m) in H_k for each m, next to the index |H_k| / (n^k |H_l|)
/// forced by the centralizer bound. Small groups also get the index of a
/// largest abelian subgroup.
inline std::vector<LemmaReport> jordan_index_report(long n, long k, long m_from, long m_to, unsigned threads = 1) {
  if (m_from < 1 || m_to < m_from) fail(ErrorKind::InvalidParams, "need 1 <= m_from <= m_to");
  auto H = enumerate_Hk(n, k, threads);
  const BigInt order(H.elements.size());
  std::optional<std::size_t> abelian;
  if (H.elements.size() <= kAbelianSearchLimit) abelian = detail::max_commuting_set(H.elements);
  std::vector<LemmaReport> out;
  for (long m = m_from; m <= m_to; ++m) {
    auto C = centralizer_in_Hk(standard_a_power(n, k, m), H, threads);
    LemmaReport r;
    r.lemma = "jordan-index";
    long l = smooth_level(n, m);
    r.params = {{"n", param_str(n)}, {"k", param_str(k)}, {"m", param_str(m)}, {"l", param_str(l)}};
    r.brute = Rational(order, BigInt(C.elements.size()));
    if (l < k) {
      BigInt Hl = l == 0 ? BigInt(1) : exact_order_Hk(n, l);
      r.set_formula(Rational(order) / Rational(ipow(n, k) * Hl));
      r.compare("index lower bound |H_k| / (n^k |H_l|)", *r.formula, ">=");
    } else {
      r.notes.push_back("l >= k: no bound applies");
    }
    r.details.push_back({"|H_k|", to_string(order)});
    r.details.push_back({"|C(a^m)|", std::to_string(C.elements.size())});
    if (abelian) {
      Rational idx(order, BigInt(*abelian));
      r.details.push_back({"max abelian order", std::to_string(*abelian)});
      r.details.push_back({"max abelian index", to_string(idx)});
      r.comparisons.push_back({"max abelian index", idx, "<=", r.brute <= idx});
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bsl
