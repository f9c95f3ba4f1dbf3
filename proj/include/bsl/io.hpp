#pragma once

// JSON forms of the library's values and DOT pictures of finite subtrees.
// Rationals travel as "p/q" strings; integers that fit in 64 bits as numbers.

#include <json.hpp>

#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bsl/error.hpp"
#include "bsl/exactnum.hpp"
#include "bsl/isometry.hpp"
#include "bsl/lab.hpp"
#include "bsl/lattice.hpp"
#include "bsl/tree.hpp"

namespace bsl::io {

using Json = nlohmann::ordered_json;

inline Json rational_json(const Rational& q) { return to_string(q); }

inline Json integer_json(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
    return x.convert_to<std::int64_t>();
  }
  return x.str();
}

/// Integral values as numbers, the rest as "p/q".
inline Json number_json(const Rational& q) {
  if (den(q) == 1) return integer_json(num(q));
  return rational_json(q);
}

inline Rational rational_from(const Json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(j.get<std::int64_t>()));
  fail(ErrorKind::ParseError, what + ": expected a rational as \"p/q\" or an integer");
}

inline long integer_from(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return static_cast<long>(j.get<std::int64_t>());
  if (j.is_string()) {
    BigInt x = parse_bigint(j.get<std::string>());
    return x.convert_to<long>();
  }
  fail(ErrorKind::ParseError, what + ": expected an integer");
}

inline BigInt bigint_from(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  fail(ErrorKind::ParseError, what + ": expected an integer");
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    fail(ErrorKind::ParseError, where + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

inline Json parse_json(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, where + ": " + e.what());
  }
}

inline Json to_json(const TreeVertex& v) { return Json{{"h", v.h}, {"c", rational_json(v.c)}}; }

inline TreeVertex vertex_from(const Json& j, long n) {
  long h = integer_from(field(j, "h", "vertex"), "vertex.h");
  Rational c = rational_from(field(j, "c", "vertex"), "vertex.c");
  if (!in_Z_inv_n(c, PrimeSignature::of(n))) {
    fail(ErrorKind::ValidationFailed, "vertex center " + to_string(c) + " is not in Z[1/" + std::to_string(n) + "]");
  }
  return TreeVertex::containing(n, c, h);
}

inline Json to_json(const BallAffineMap& m) {
  return Json{{"h", m.h}, {"u", rational_json(m.u)}, {"beta", rational_json(m.beta)}};
}

inline Json to_json(const ArithmeticIsometry& f) {
  return Json{{"eps", f.eps},
              {"h", f.h},
              {"alpha", rational_json(f.alpha)},
              {"u", rational_json(f.tree.u)},
              {"beta", rational_json(f.tree.beta)}};
}

inline ArithmeticIsometry isometry_from(const Json& j, long n) {
  long eps = j.contains("eps") ? integer_from(j.at("eps"), "isometry.eps") : 1;
  long h = integer_from(field(j, "h", "isometry"), "isometry.h");
  Rational alpha = rational_from(field(j, "alpha", "isometry"), "isometry.alpha");
  Rational u = rational_from(field(j, "u", "isometry"), "isometry.u");
  Rational beta = rational_from(field(j, "beta", "isometry"), "isometry.beta");
  try {
    return ArithmeticIsometry::make(static_cast<int>(eps), alpha, BallAffineMap::make(n, h, u, beta));
  } catch (const Error& e) {
    fail(ErrorKind::ValidationFailed, std::string("isometry: ") + e.what());
  }
}

inline Json to_json(const EmbeddingSpec& e) {
  return Json{{"n", e.n}, {"l", e.l}, {"a", to_json(e.a)}, {"b", to_json(e.b)}};
}

inline EmbeddingSpec embedding_from(const Json& j) {
  long n = integer_from(field(j, "n", "embedding"), "embedding.n");
  long l = integer_from(field(j, "l", "embedding"), "embedding.l");
  if (n < 2) fail(ErrorKind::ValidationFailed, "embedding.n must be >= 2");
  return {n, l, isometry_from(field(j, "a", "embedding"), n), isometry_from(field(j, "b", "embedding"), n)};
}

inline Json to_json(const ClassifyResult& r) {
  return Json{{"s", rational_json(r.s)}, {"m", integer_json(r.m)}, {"h0", r.h0},
              {"j", integer_json(r.j)},  {"k", r.k},                {"w0", to_json(r.w0)}};
}

inline Json to_json(const QuotientData& q) {
  Json entries = Json::array();
  for (const auto& e : q.entries) {
    entries.push_back(Json{{"rep", to_json(e.rep)},
                           {"a_v", rational_json(e.a_v)},
                           {"h_v", e.h_v},
                           {"stab0", integer_json(e.stab0)}});
  }
  return Json{{"n", q.n}, {"entries", entries}};
}

inline QuotientData quotient_from(const Json& j) {
  long n = integer_from(field(j, "n", "quotient"), "quotient.n");
  if (n < 2) fail(ErrorKind::ValidationFailed, "quotient.n must be >= 2");
  QuotientData q{n, {}};
  const Json& entries = field(j, "entries", "quotient");
  if (!entries.is_array()) fail(ErrorKind::ParseError, "quotient.entries must be an array");
  for (const auto& e : entries) {
    q.entries.push_back({vertex_from(field(e, "rep", "entry"), n), rational_from(field(e, "a_v", "entry"), "a_v"),
                         integer_from(field(e, "h_v", "entry"), "h_v"),
                         e.contains("stab0") ? bigint_from(e.at("stab0"), "stab0") : BigInt(1)});
  }
  return q;
}

inline Json to_json(const LevelPerm& f) {
  Json levels = Json::array();
  for (const auto& s : f.sigma) levels.push_back(s);
  return levels;
}

inline LevelPerm level_perm_from(const Json& j, long n) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "level permutation must be an array of arrays");
  LevelPerm f{n, {}};
  for (const auto& level : j) {
    if (!level.is_array()) fail(ErrorKind::ParseError, "level permutation must be an array of arrays");
    std::vector<Label> s;
    for (const auto& x : level) {
      if (!x.is_number_unsigned()) fail(ErrorKind::ParseError, "labels must be nonnegative integers");
      s.push_back(x.get<Label>());
    }
    f.sigma.push_back(std::move(s));
  }
  if (auto d = f.defect()) fail(ErrorKind::ValidationFailed, *d);
  return f;
}

inline Json to_json(const PartialTreeMap& g) {
  Json pairs = Json::array();
  for (const auto& [v, w] : g.pairs) pairs.push_back(Json{{"from", to_json(v)}, {"to", to_json(w)}});
  return pairs;
}

inline Json to_json(const LemmaReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  Json out{{"lemma", r.lemma}, {"params", params}, {"brute", number_json(r.brute)}};
  out["formula"] = r.formula ? number_json(*r.formula) : Json(nullptr);
  out["match"] = r.match;
  Json comparisons = Json::array();
  for (const auto& c : r.comparisons) {
    comparisons.push_back(Json{{"name", c.name}, {"value", number_json(c.value)}, {"relation", c.relation}, {"holds", c.holds}});
  }
  out["comparisons"] = comparisons;
  Json details = Json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  out["details"] = details;
  out["notes"] = r.notes;
  return out;
}

/// The finite subtree spanned by the given vertices and their ancestors down to
/// their first common ancestor; vertices in the same class share a color.
inline std::string to_dot(const std::vector<TreeVertex>& vertices, const std::vector<std::size_t>& classes) {
  static const char* palette[] = {"lightblue", "salmon", "palegreen", "khaki", "plum", "lightgray", "orange", "cyan"};
  if (vertices.empty()) return "digraph T {\n}\n";
  long bottom = vertices.front().h;
  for (const auto& v : vertices) bottom = std::min(bottom, v.h);
  auto split_at = [&](long h) {
    std::set<TreeVertex> below;
    for (const auto& v : vertices) below.insert(TreeVertex::containing(v.n, v.c, h));
    return below.size() > 1;
  };
  while (split_at(bottom)) --bottom;
  std::set<TreeVertex> nodes;
  std::set<std::pair<TreeVertex, TreeVertex>> edges;
  for (const auto& v : vertices) {
    TreeVertex w = v;
    nodes.insert(w);
    while (w.h > bottom) {
      TreeVertex p = w.parent();
      edges.insert({p, w});
      nodes.insert(p);
      w = p;
    }
  }
  std::map<TreeVertex, std::size_t> color;
  for (std::size_t i = 0; i < vertices.size(); ++i) color[vertices[i]] = i < classes.size() ? classes[i] : 0;
  auto id = [](const TreeVertex& v) { return "\"" + std::to_string(v.h) + ":" + to_string(v.c) + "\""; };
  std::ostringstream out;
  out << "digraph T {\n  rankdir=BT;\n  node [shape=circle, style=filled, fillcolor=white];\n";
  for (const auto& v : nodes) {
    out << "  " << id(v) << " [label=\"" << to_string(v.c) << "\"";
    if (auto it = color.find(v); it != color.end()) out << ", fillcolor=" << palette[it->second % 8];
    out << "];\n";
  }
  for (const auto& [p, c] : edges) out << "  " << id(p) << " -> " << id(c) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace bsl::io
