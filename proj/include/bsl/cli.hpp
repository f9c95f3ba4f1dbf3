#pragma once

// Batch front end. run() parses argv-style arguments, writes the result to out
// and a single "error kind=... msg=..." line to err on failure.
//
// Exit codes: 0 ok, 1 validation error, 2 parse error, 3 infeasible.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bsl/bsgroup.hpp"
#include "bsl/error.hpp"
#include "bsl/exactnum.hpp"
#include "bsl/io.hpp"
#include "bsl/isometry.hpp"
#include "bsl/lab.hpp"
#include "bsl/lattice.hpp"
#include "bsl/tree.hpp"

namespace bsl::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kParse = 2, kInfeasible = 3 };

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return kParse;
    case ErrorKind::TooLarge: return kInfeasible;
    default: return kValidation;
  }
}

namespace detail {

using io::Json;

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
  out << text;
}

/// Two-column text output.
class Table {
 public:
  void row(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }

  void print(std::ostream& out) const {
    std::size_t width = 0;
    for (const auto& [k, v] : rows_) width = std::max(width, k.size());
    for (const auto& [k, v] : rows_) out << std::left << std::setw(static_cast<int>(width + 2)) << k << v << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline void print_report(std::ostream& out, const LemmaReport& r) {
  Table t;
  t.row("lemma", r.lemma);
  std::string params;
  for (const auto& [k, v] : r.params) params += (params.empty() ? "" : " ") + k + "=" + v;
  t.row("params", params);
  t.row("brute", to_string(r.brute));
  t.row("formula", r.formula ? to_string(*r.formula) : "-");
  t.row("match", yes_no(r.match));
  for (const auto& c : r.comparisons) {
    t.row("  " + c.name, "brute " + c.relation + " " + to_string(c.value) + "  " + (c.holds ? "holds" : "fails"));
  }
  for (const auto& [k, v] : r.details) t.row("  " + k, v);
  for (const auto& n : r.notes) t.row("  note", n);
  t.print(out);
}

/// x -> u x + beta given as "h,u,beta".
inline BallAffineMap parse_map(long n, const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() != 3) fail(ErrorKind::ParseError, "map must be \"h,u,beta\", got '" + text + "'");
  long h = parse_bigint(parts[0]).convert_to<long>();
  Rational u = parse_rational(parts[1]);
  Rational beta = parse_rational(parts[2]);
  try {
    return BallAffineMap::make(n, h, u, beta);
  } catch (const Error& e) {
    fail(ErrorKind::ValidationFailed, e.what());
  }
}

/// A vertex given as "h,c".
inline TreeVertex parse_vertex(long n, const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() != 2) fail(ErrorKind::ParseError, "vertex must be \"h,c\", got '" + text + "'");
  long h = parse_bigint(parts[0]).convert_to<long>();
  Rational c = parse_rational(parts[1]);
  if (!in_Z_inv_n(c, PrimeSignature::of(n))) {
    fail(ErrorKind::ValidationFailed, "center " + to_string(c) + " is not in Z[1/" + std::to_string(n) + "]");
  }
  return TreeVertex::containing(n, c, h);
}

/// Fixed engine and plain modular reduction, so sequences match on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

struct Context {
  bool json = false;
  bool verbose = false;
  std::uint64_t seed = 20240101;
  unsigned threads = 1;
  std::string dot;
  std::ostream* out = nullptr;
};

struct EmbeddingArgs {
  std::string file;
  std::string phi;
  long n = 0;
  long l = 0;
};

inline EmbeddingSpec load_embedding(const EmbeddingArgs& a) {
  if (!a.file.empty() && !a.phi.empty()) fail(ErrorKind::ParseError, "give either --file or --phi, not both");
  if (!a.file.empty()) {
    auto spec = io::embedding_from(io::parse_json(read_file(a.file), a.file));
    if (a.n != 0 && a.n != spec.n) fail(ErrorKind::BaseMismatch, "--n disagrees with " + a.file);
    if (a.l != 0 && a.l != spec.l) fail(ErrorKind::ValidationFailed, "--l disagrees with " + a.file);
    return spec;
  }
  if (!a.phi.empty()) {
    if (a.n == 0 || a.l == 0) fail(ErrorKind::ParseError, "--phi needs --n and --l");
    auto parts = split(a.phi, ',');
    if (parts.size() != 2) fail(ErrorKind::ParseError, "--phi must be \"s,m\"");
    return make_phi(a.n, a.l, parse_rational(parts[0]), parse_bigint(parts[1]));
  }
  fail(ErrorKind::ParseError, "an embedding is needed: --file FILE or --phi s,m");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Json;
  CLI::App app{"Exact computations in Baumslag-Solitar groups and their lattice embeddings", "bsl"};
  app.fallthrough();
  app.require_subcommand(1);
  detail::Context ctx;
  ctx.out = &out;
  long depth = 0, window = 1;
  app.add_flag("--json", ctx.json, "Emit JSON on stdout");
  app.add_flag("--verbose", ctx.verbose, "Extra diagnostics");
  app.add_option("--seed", ctx.seed, "Seed for randomized runs");
  app.add_option("--threads", ctx.threads, "Worker threads for enumeration")->check(CLI::Range(1u, 256u));
  app.add_option("--depth", depth, "Depth or precision");
  app.add_option("--window", window, "Window half-width in blocks of l heights");
  app.add_option("--dot", ctx.dot, "Write a DOT picture to this file");

  std::map<CLI::App*, std::function<void()>> handlers;
  auto emit = [&](const Json& j, const std::function<void()>& human) {
    if (ctx.json) {
      out << j.dump() << "\n";
    } else {
      human();
    }
  };

  // bs
  auto* bs = app.add_subcommand("bs", "Words in BS(1,N)");
  bs->require_subcommand(1);
  long N = 0;
  std::string word1, word2, gen;
  auto need_N = [&] {
    if (N < 2) fail(ErrorKind::ParseError, "--N must be >= 2");
  };
  auto nf_json = [&](const BSNormalForm& f) {
    auto inv = f.invariant();
    return Json{{"normal_form", to_string(f)}, {"x", f.x}, {"y", io::integer_json(f.y)}, {"z", f.z},
                {"h", inv.h}, {"c", io::rational_json(inv.c)}};
  };
  auto nf_rows = [&](detail::Table& t, const BSNormalForm& f) {
    auto inv = f.invariant();
    t.row("normal", to_string(f));
    t.row("(x,y,z)", "(" + std::to_string(f.x) + "," + to_string(f.y) + "," + std::to_string(f.z) + ")");
    t.row("(h,c)", "(" + std::to_string(inv.h) + "," + to_string(inv.c) + ")");
  };
  {
    auto* c = bs->add_subcommand("normalize", "Normal form b^-x a^y b^z of a word");
    c->add_option("--N", N, "Base N of BS(1,N)")->required();
    c->add_option("word", word1, "Word such as \"b^-1 a b\"")->required();
    handlers[c] = [&] {
      need_N();
      auto w = BSWord::parse(N, word1);
      auto f = normalize(w);
      Json j{{"N", N}, {"word", to_string(w.word)}};
      j.update(nf_json(f));
      emit(j, [&] {
        detail::Table t;
        t.row("word", to_string(w.word));
        nf_rows(t, f);
        t.print(out);
      });
    };
  }
  {
    auto* c = bs->add_subcommand("mult", "Product of two words");
    c->add_option("--N", N, "Base N")->required();
    c->add_option("u", word1, "Left factor")->required();
    c->add_option("v", word2, "Right factor")->required();
    handlers[c] = [&] {
      need_N();
      auto f = multiply(normalize(BSWord::parse(N, word1)), normalize(BSWord::parse(N, word2)));
      Json j{{"N", N}};
      j.update(nf_json(f));
      emit(j, [&] {
        detail::Table t;
        nf_rows(t, f);
        t.print(out);
      });
    };
  }
  {
    auto* c = bs->add_subcommand("invert", "Inverse of a word");
    c->add_option("--N", N, "Base N")->required();
    c->add_option("word", word1, "Word")->required();
    handlers[c] = [&] {
      need_N();
      auto f = invert(normalize(BSWord::parse(N, word1)));
      Json j{{"N", N}};
      j.update(nf_json(f));
      emit(j, [&] {
        detail::Table t;
        nf_rows(t, f);
        t.print(out);
      });
    };
  }
  {
    auto* c = bs->add_subcommand("collins", "Apply A, B, C, D, Q_i or theta_m to a word");
    c->add_option("--N", N, "Base N")->required();
    c->add_option("--gen", gen, "Generator: A, B, C, D, Q_i, theta_m")->required();
    c->add_option("word", word1, "Word")->required();
    handlers[c] = [&] {
      need_N();
      auto g = CollinsGen::parse(gen);
      auto w = BSWord::parse(N, word1);
      auto image = apply_collins(g, w);
      auto f = normalize(image);
      bool automorphism = is_automorphism(g, N);
      Json j{{"N", N}, {"gen", to_string(g)}, {"word", to_string(w.word)}, {"image", to_string(image.word)},
             {"automorphism", automorphism}};
      j.update(nf_json(f));
      emit(j, [&] {
        detail::Table t;
        t.row("generator", to_string(g));
        t.row("word", to_string(w.word));
        t.row("image", to_string(image.word));
        nf_rows(t, f);
        t.row("automorphism", detail::yes_no(automorphism));
        t.print(out);
      });
    };
  }

  // tree
  auto* tree = app.add_subcommand("tree", "The tree T_{1,n}");
  tree->require_subcommand(1);
  long n = 0, l = 0, height = 0;
  std::string map_text, vertex_text, eta_text;
  auto need_n = [&] {
    if (n < 2) fail(ErrorKind::ParseError, "--n must be >= 2");
  };
  {
    auto* c = tree->add_subcommand("act", "Image of a vertex under a ball map");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--map", map_text, "Ball map \"h,u,beta\" for x -> u x + beta")->required();
    c->add_option("--vertex", vertex_text, "Vertex \"h,c\"")->required();
    handlers[c] = [&] {
      need_n();
      auto m = detail::parse_map(n, map_text);
      auto v = detail::parse_vertex(n, vertex_text);
      auto w = act(m, v);
      Json j{{"n", n}, {"map", io::to_json(m)}, {"vertex", io::to_json(v)}, {"image", io::to_json(w)}};
      if (m.h == 0) j["fixes"] = fixes(m, v);
      emit(j, [&] {
        detail::Table t;
        t.row("map", to_string(m));
        t.row("vertex", to_string(v));
        t.row("image", to_string(w));
        if (m.h == 0) t.row("fixes", detail::yes_no(fixes(m, v)));
        t.print(out);
      });
    };
  }
  {
    auto* c = tree->add_subcommand("orbit", "Orbit of a vertex under an elliptic ball map");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--map", map_text, "Ball map \"0,u,beta\"")->required();
    c->add_option("--vertex", vertex_text, "Vertex \"h,c\"")->required();
    handlers[c] = [&] {
      need_n();
      auto m = detail::parse_map(n, map_text);
      auto v = detail::parse_vertex(n, vertex_text);
      auto o = orbit(m, v);
      Json list = Json::array();
      for (const auto& w : o) list.push_back(io::to_json(w));
      if (!ctx.dot.empty()) {
        // The other vertices of the same level under the lowest common ball,
        // colored by orbit.
        long bottom = v.h;
        for (const auto& w : o) {
          TreeVertex x = w, y = v;
          while (!(x == y)) {
            x = x.parent();
            y = y.parent();
          }
          bottom = std::min(bottom, x.h);
        }
        std::vector<TreeVertex> level{TreeVertex::containing(n, v.c, bottom)};
        while (level.front().h < v.h && level.size() <= 4096) {
          std::vector<TreeVertex> up;
          for (const auto& x : level) {
            auto ch = x.children();
            up.insert(up.end(), ch.begin(), ch.end());
          }
          level = std::move(up);
        }
        std::map<TreeVertex, std::size_t> cls;
        for (const auto& x : level) {
          if (cls.count(x) || !fixes(m, TreeVertex::containing(n, x.c, bottom))) continue;
          std::size_t id = cls.empty() ? 0 : 1 + cls.size() % 7;
          for (const auto& w : orbit(m, x)) cls.emplace(w, id);
        }
        std::vector<TreeVertex> vs;
        std::vector<std::size_t> cs;
        for (const auto& [w, id] : cls) {
          vs.push_back(w);
          cs.push_back(id);
        }
        detail::write_file(ctx.dot, io::to_dot(vs, cs));
      }
      Json j{{"n", n}, {"map", io::to_json(m)}, {"vertex", io::to_json(v)}, {"size", o.size()}, {"orbit", list}};
      emit(j, [&] {
        detail::Table t;
        t.row("map", to_string(m));
        t.row("size", std::to_string(o.size()));
        std::string s;
        for (const auto& w : o) s += (s.empty() ? "" : " ") + to_string(w);
        t.row("orbit", s);
        t.print(out);
      });
    };
  }
  {
    auto* c = tree->add_subcommand("axis", "Axis vertex of a hyperbolic ball map at a height");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--map", map_text, "Ball map \"h,u,beta\" with h != 0")->required();
    c->add_option("--height", height, "Height j")->required();
    handlers[c] = [&] {
      need_n();
      auto m = detail::parse_map(n, map_text);
      long precision = depth > 0 ? depth : std::abs(height) + std::abs(m.h);
      auto v = axis_vertex(m, height, precision);
      Json j{{"n", n}, {"map", io::to_json(m)}, {"fixed_point", io::rational_json(axis_fixed_point(m))},
             {"vertex", io::to_json(v)}};
      emit(j, [&] {
        detail::Table t;
        t.row("map", to_string(m));
        t.row("x*", to_string(axis_fixed_point(m)));
        t.row("vertex", to_string(v));
        t.print(out);
      });
    };
  }
  {
    auto* c = tree->add_subcommand("aeta", "Level permutations of A^eta");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--eta", eta_text, "Integer eta")->required();
    handlers[c] = [&] {
      need_n();
      if (depth < 1) fail(ErrorKind::ParseError, "--depth must be >= 1");
      auto eta = TruncatedNAdic::make(n, depth, parse_bigint(eta_text));
      auto f = build_Aeta(eta);
      Json j{{"n", n}, {"depth", depth}, {"eta", io::integer_json(eta.residue)}, {"levels", io::to_json(f)}};
      emit(j, [&] {
        detail::Table t;
        t.row("eta", to_string(eta.residue) + " mod " + std::to_string(n) + "^" + std::to_string(depth));
        for (long i = 1; i <= f.depth(); ++i) {
          std::string s;
          for (auto x : f.sigma[i - 1]) s += (s.empty() ? "" : " ") + std::to_string(x);
          t.row("level " + std::to_string(i), s);
        }
        t.print(out);
      });
    };
  }

  // embed
  auto* embed = app.add_subcommand("embed", "Lattice embeddings of BS(1,n^l)");
  embed->require_subcommand(1);
  detail::EmbeddingArgs ea, eb;
  auto add_embedding = [&](CLI::App* c, detail::EmbeddingArgs& a, const std::string& suffix) {
    c->add_option("--file" + suffix, a.file, "Embedding JSON file");
    c->add_option("--phi" + suffix, a.phi, "Standard embedding phi_{s,m} as \"s,m\"");
  };
  auto add_nl = [&](CLI::App* c) {
    c->add_option("--n", ea.n, "Base n");
    c->add_option("--l", ea.l, "Power l");
  };
  auto load_pair = [&] {
    eb.n = ea.n;
    eb.l = eb.l == 0 ? ea.l : eb.l;
    return std::make_pair(detail::load_embedding(ea), detail::load_embedding(eb));
  };
  {
    auto* c = embed->add_subcommand("classify", "Invariant (s, m) of an embedding");
    add_nl(c);
    add_embedding(c, ea, "");
    handlers[c] = [&] {
      auto spec = detail::load_embedding(ea);
      auto r = classify(spec);
      emit(io::to_json(r), [&] {
        detail::Table t;
        t.row("s", to_string(r.s));
        t.row("m", to_string(r.m));
        t.row("h0", std::to_string(r.h0));
        t.row("j", to_string(r.j));
        t.row("k", std::to_string(r.k));
        t.row("w0", to_string(r.w0));
        t.print(out);
      });
    };
  }
  {
    auto* c = embed->add_subcommand("validate", "Check that an embedding is a discrete representation");
    add_nl(c);
    add_embedding(c, ea, "");
    handlers[c] = [&] {
      auto spec = detail::load_embedding(ea);
      auto why = validate(spec);
      Json j{{"ok", !why.has_value()}};
      j["diagnostics"] = why ? Json::array({*why}) : Json::array();
      emit(j, [&] {
        detail::Table t;
        t.row("ok", detail::yes_no(!why));
        if (why) t.row("diagnostic", *why);
        t.print(out);
      });
      if (why) fail(ErrorKind::ValidationFailed, *why);
    };
  }
  auto pair_command = [&](const char* name, const char* help, bool conjugacy) {
    auto* c = embed->add_subcommand(name, help);
    add_nl(c);
    c->add_option("--l2", eb.l, "Power l of the second embedding when given by --phi2");
    add_embedding(c, ea, "");
    add_embedding(c, eb, "2");
    handlers[c] = [&, conjugacy] {
      auto [x, y] = load_pair();
      bool same = conjugacy ? are_conjugate(x, y) : are_automorphism_equivalent(x, y);
      auto cx = classify(x), cy = classify(y);
      Json j{{conjugacy ? "conjugate" : "automorphism_equivalent", same},
             {"first", io::to_json(cx)},
             {"second", io::to_json(cy)}};
      emit(j, [&] {
        detail::Table t;
        t.row("first", "l=" + std::to_string(x.l) + " s=" + to_string(cx.s) + " m=" + to_string(cx.m));
        t.row("second", "l=" + std::to_string(y.l) + " s=" + to_string(cy.s) + " m=" + to_string(cy.m));
        t.row(conjugacy ? "conjugate" : "automorphism-equivalent", detail::yes_no(same));
        t.print(out);
      });
    };
  };
  pair_command("conjugate", "Decide conjugacy of two embeddings", true);
  pair_command("auto-equiv", "Decide equivalence under Aut(G_n)", false);
  {
    auto* c = embed->add_subcommand("straighten", "Window conjugator into the standard position");
    add_nl(c);
    add_embedding(c, ea, "");
    handlers[c] = [&] {
      auto spec = detail::load_embedding(ea);
      long d = depth > 0 ? depth : 2;
      auto g = straighten(spec, d, window);
      if (!ctx.dot.empty()) {
        std::vector<TreeVertex> vs;
        std::vector<std::size_t> cs;
        for (const auto& [v, w] : g.pairs) {
          vs.push_back(v);
          cs.push_back(v == w ? 0 : 1);
        }
        detail::write_file(ctx.dot, io::to_dot(vs, cs));
      }
      Json j{{"depth", d}, {"window", window}, {"size", g.pairs.size()}, {"identity", g.is_identity()},
             {"map", io::to_json(g)}};
      emit(j, [&] {
        detail::Table t;
        t.row("depth", std::to_string(d));
        t.row("window", std::to_string(window));
        t.row("vertices", std::to_string(g.pairs.size()));
        t.row("identity", detail::yes_no(g.is_identity()));
        for (const auto& [v, w] : g.pairs) t.row("  " + to_string(v), "-> " + to_string(w));
        t.print(out);
      });
    };
  }

  // covol
  auto* covol = app.add_subcommand("covol", "Covolumes");
  covol->require_subcommand(1);
  std::string quotient_file;
  auto quotient_out = [&](const QuotientData& q, const Rational& v) {
    Json j{{"quotient", io::to_json(q)}, {"covolume", io::rational_json(v)}};
    emit(j, [&] {
      detail::Table t;
      for (const auto& e : q.entries) {
        t.row("  " + to_string(e.rep),
              "a_v=" + to_string(e.a_v) + " h_v=" + std::to_string(e.h_v) + " stab0=" + to_string(e.stab0));
      }
      t.row("covolume", to_string(v));
      t.print(out);
    });
  };
  {
    auto* c = covol->add_subcommand("from-quotient", "Sum over orbit representatives");
    c->add_option("--file", quotient_file, "QuotientData JSON file")->required();
    handlers[c] = [&] {
      auto q = io::quotient_from(io::parse_json(detail::read_file(quotient_file), quotient_file));
      quotient_out(q, covolume_from_quotient(q));
    };
  }
  {
    auto* c = covol->add_subcommand("enumerate", "Quotient data and covolume of an embedding");
    add_nl(c);
    add_embedding(c, ea, "");
    handlers[c] = [&] {
      auto q = enumerate_quotient(detail::load_embedding(ea));
      quotient_out(q, covolume_from_quotient(q));
    };
  }

  // present
  auto* present = app.add_subcommand("present", "Presentations of lattices with an index-two BS subgroup");
  present->require_subcommand(1);
  PresentationCase pc;
  {
    auto* c = present->add_subcommand("verify", "Evaluate every relator by exact composition");
    c->add_option("--case", pc.which, "Case 1, 2 or 3")->required();
    c->add_option("--n", pc.n, "Base n")->required();
    c->add_option("--l", pc.l, "Power l")->required();
    c->add_option("--m-ref", pc.m_ref, "Reflection offset for case 3");
    handlers[c] = [&] {
      auto fl = build_full_lattice(pc);
      Json gens = Json::object();
      for (const auto& [g, f] : fl.generators) gens[std::string(1, g)] = io::to_json(f);
      Json rels = Json::array();
      bool all = true;
      for (const auto& r : fl.relators) {
        bool ok = evaluate(fl.generators, r.word, pc.n).is_identity();
        all = all && ok;
        rels.push_back(Json{{"relation", r.name}, {"relator", to_string(r.word)}, {"identity", ok}});
      }
      Json j{{"case", pc.which}, {"n", pc.n}, {"l", pc.l}, {"generators", gens}, {"relators", rels}};
      if (fl.y) {
        j["y"] = io::integer_json(*fl.y);
        j["y_m(1-n)"] = io::integer_json(*fl.y_as_printed);
        j["y_agrees"] = *fl.y == *fl.y_as_printed;
      }
      j["verified"] = all;
      emit(j, [&] {
        detail::Table t;
        t.row("case", std::to_string(pc.which));
        for (const auto& [g, f] : fl.generators) t.row(std::string(1, g), to_string(f));
        for (const auto& r : fl.relators) {
          t.row("  " + r.name, to_string(r.word) + "  " +
                                   (evaluate(fl.generators, r.word, pc.n).is_identity() ? "identity" : "NOT identity"));
        }
        if (fl.y) {
          t.row("y", to_string(*fl.y));
          t.row("m(1-n)", to_string(*fl.y_as_printed) + (*fl.y == *fl.y_as_printed ? "  agrees" : "  differs"));
        }
        t.row("verified", detail::yes_no(all));
        t.print(out);
      });
      if (!all) fail(ErrorKind::ValidationFailed, "a relator does not evaluate to the identity");
    };
  }

  // lab
  auto* lab = app.add_subcommand("lab", "Exhaustive checks at small size");
  lab->require_subcommand(1);
  long k = 0, m_from = 1, m_to = 1, random_cases = 0;
  std::string m_text, beta_text, gamma_text, av_text;
  auto report_out = [&](const LemmaReport& r) {
    emit(io::to_json(r), [&] { detail::print_report(out, r); });
  };
  {
    auto* c = lab->add_subcommand("count-hk", "Order of H_k by enumeration against the closed form");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--k", k, "Depth k")->required();
    handlers[c] = [&] { report_out(count_Hk_report(n, k, ctx.threads)); };
  }
  {
    auto* c = lab->add_subcommand("centralizer", "Centralizer of a^m in H_k against the bounds");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--k", k, "Depth k")->required();
    c->add_option("--m", m_text, "Exponent m")->required();
    handlers[c] = [&] { report_out(centralizer_bound_report(n, k, parse_bigint(m_text), ctx.threads)); };
  }
  {
    auto* c = lab->add_subcommand("trans-search", "First level where a translation acts transitively forever");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--l", l, "Power l")->required();
    c->add_option("--beta", beta_text, "Translation beta in Z[1/n]");
    c->add_option("--random", random_cases, "Run this many random beta instead");
    handlers[c] = [&] {
      long d = depth > 0 ? depth : 8;
      std::vector<Rational> betas;
      if (random_cases > 0) {
        detail::Rng rng(ctx.seed);
        for (long i = 0; i < random_cases; ++i) {
          std::int64_t p = 0;
          while (p == 0) p = rng.uniform(-1000, 1000);
          betas.push_back(Rational(BigInt(p), ipow(n, rng.uniform(0, 3))));
        }
      } else {
        if (beta_text.empty()) fail(ErrorKind::ParseError, "--beta or --random is required");
        betas.push_back(parse_rational(beta_text));
      }
      Json results = Json::array();
      detail::Table t;
      for (const auto& beta : betas) {
        if (!in_Z_inv_n(beta, PrimeSignature::of(n))) fail(ErrorKind::ValidationFailed, "beta must lie in Z[1/n]");
        auto r = eventually_transitive_search(beta, n, l, d);
        results.push_back(Json{{"beta", io::rational_json(beta)},
                               {"raw", Json{{"k", r.raw.k}, {"j", io::integer_json(r.raw.j)}}},
                               {"h0", r.h0},
                               {"normalized", Json{{"k", r.normalized.k}, {"j", io::integer_json(r.normalized.j)}}},
                               {"certified", r.certified},
                               {"certified_depth", r.certified_depth}});
        t.row("beta=" + to_string(beta), "raw (k,j)=(" + std::to_string(r.raw.k) + "," + to_string(r.raw.j) +
                                             ")  h0=" + std::to_string(r.h0) + "  normalized (k,j)=(" +
                                             std::to_string(r.normalized.k) + "," + to_string(r.normalized.j) +
                                             ")  certified to depth " + std::to_string(d) + ": " +
                                             detail::yes_no(r.certified));
      }
      Json j{{"n", n}, {"l", l}, {"results", results}};
      emit(j, [&] { t.print(out); });
    };
  }
  {
    auto* c = lab->add_subcommand("level-sum", "Orbit-weighted level sums of a translation");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--gamma", gamma_text, "Translation gamma in Z_n")->required();
    c->add_option("--av", av_text, "Translation distance a_v")->required();
    handlers[c] = [&] {
      long d = depth > 0 ? depth : 6;
      report_out(level_sum_check(n, parse_rational(gamma_text), parse_rational(av_text), d));
    };
  }
  {
    auto* c = lab->add_subcommand("jordan-index", "Index of centralizers of a^m in H_k");
    c->add_option("--n", n, "Base n")->required();
    c->add_option("--k", k, "Depth k")->required();
    c->add_option("--m-from", m_from, "First m");
    c->add_option("--m-to", m_to, "Last m");
    handlers[c] = [&] {
      auto reports = jordan_index_report(n, k, m_from, std::max(m_from, m_to), ctx.threads);
      if (ctx.json) {
        Json list = Json::array();
        for (const auto& r : reports) list.push_back(io::to_json(r));
        out << list.dump() << "\n";
      } else {
        for (std::size_t i = 0; i < reports.size(); ++i) {
          if (i) out << "\n";
          detail::print_report(out, reports[i]);
        }
      }
    };
  }

  auto fail_line = [&](std::string_view kind, const std::string& msg) {
    err << "error kind=" << kind << " msg=" << detail::quote(msg) << "\n";
  };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    fail_line("ParseError", e.what());
    return kParse;
  } catch (const Error& e) {
    fail_line(to_string(e.kind()), e.what());
    return exit_code(e.kind());
  }

  for (auto& [cmd, handler] : handlers) {
    if (!cmd->parsed()) continue;
    try {
      handler();
      return kOk;
    } catch (const Error& e) {
      out.flush();
      fail_line(to_string(e.kind()), e.what());
      return exit_code(e.kind());
    } catch (const std::exception& e) {
      fail_line("Internal", e.what());
      return kValidation;
    }
  }
  fail_line("ParseError", "no command given");
  return kParse;
}

}  // namespace bsl::cli
