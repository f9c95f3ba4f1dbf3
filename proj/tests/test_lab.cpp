#include <catch_amalgamated.hpp>

#include <map>

#include "bsl/lab.hpp"
#include "support/fixtures.hpp"

using namespace bsl;

namespace {

Rational q(long p, long d = 1) { return Rational(BigInt(p), BigInt(d)); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

const Comparison& comparison(const LemmaReport& r, const std::string& prefix) {
  for (const auto& c : r.comparisons) {
    if (c.name.rfind(prefix, 0) == 0) return c;
  }
  FAIL("no comparison " << prefix);
  throw std::logic_error("unreachable");
}

// Centralizer orders of a^m in H_k, from an independent brute force over all
// leaf permutations (tests/oracles/lab_oracle.py).
struct OracleRow {
  long n, k;
  std::size_t order;
  std::vector<std::size_t> centralizers;
};

const std::vector<OracleRow> kOracle{
    {2, 1, 2, {2, 2, 2, 2}},
    {2, 2, 8, {4, 8, 4, 8}},
    {2, 3, 128, {8, 32, 8, 128}},
    {3, 1, 6, {3, 3, 6, 3, 3, 6}},
    {3, 2, 1296, {9, 9, 162, 9, 9, 162}},
};

std::size_t walk(std::uint64_t delta, std::uint64_t mod) {
  std::vector<char> seen(mod, 0);
  std::uint64_t y = 0;
  std::size_t size = 0;
  while (!seen[y]) {
    seen[y] = 1;
    ++size;
    y = (y + delta) % mod;
  }
  return size;
}

}  // namespace

TEST_CASE("closed forms", "[lab]") {
  CHECK(count_formula_Hk(2, 2) == 8);
  CHECK(count_formula_Hk(3, 1) == 6);
  CHECK(count_formula_Hk(2, 3) == 32);
  CHECK(exact_order_Hk(2, 3) == 128);
  CHECK(exact_order_Hk(3, 2) == 1296);
}

TEST_CASE("enumeration of H_k", "[lab]") {
  for (const auto& row : kOracle) {
    auto H = enumerate_Hk(row.n, row.k);
    CHECK(H.elements.size() == row.order);
    CHECK(std::is_sorted(H.elements.begin(), H.elements.end()));
    CHECK(std::adjacent_find(H.elements.begin(), H.elements.end()) == H.elements.end());
    CHECK(H.contains(LevelPerm::identity(row.n, row.k)));
    CHECK_FALSE(closure_defect(H));
  }
  CHECK(kind_of([] { enumerate_Hk(2, 7); }) == ErrorKind::TooLarge);
  CHECK(kind_of([] { enumerate_Hk(3, 3); }) == ErrorKind::TooLarge);
  CHECK(kind_of([] { enumerate_Hk(4, 2); }) == ErrorKind::TooLarge);
}

TEST_CASE("enumeration does not depend on the thread count", "[lab]") {
  CHECK(enumerate_Hk(3, 2, 1).elements == enumerate_Hk(3, 2, 3).elements);
  CHECK(enumerate_Hk(2, 3, 1).elements == enumerate_Hk(2, 3, 4).elements);
}

TEST_CASE("counting report", "[lab]") {
  auto r22 = count_Hk_report(2, 2);
  CHECK(r22.brute == 8);
  CHECK(r22.match);
  auto r23 = count_Hk_report(2, 3);
  CHECK(r23.brute == 128);
  CHECK(*r23.formula == 32);
  CHECK_FALSE(r23.match);
  CHECK(comparison(r23, "orbit-stabilizer").holds);
  CHECK_FALSE(comparison(r23, "recurrence").holds);
  auto r32 = count_Hk_report(3, 2);
  CHECK(r32.brute == 1296);
  CHECK(*r32.formula == 108);
  CHECK_FALSE(r32.match);
  CHECK(comparison(r32, "orbit-stabilizer").holds);
}

TEST_CASE("centralizers of powers of a", "[lab]") {
  for (const auto& row : kOracle) {
    auto H = enumerate_Hk(row.n, row.k);
    for (std::size_t i = 0; i < row.centralizers.size(); ++i) {
      auto C = centralizer_in_Hk(standard_a_power(row.n, row.k, BigInt(i + 1)), H);
      CHECK(C.elements.size() == row.centralizers[i]);
      CHECK_FALSE(closure_defect(C));
    }
  }
  auto H2 = enumerate_Hk(2, 2);
  CHECK(centralizer_in_Hk(LevelPerm::identity(2, 2), H2).elements == H2.elements);
  CHECK(kind_of([&] { centralizer_in_Hk(LevelPerm::identity(2, 1), H2); }) == ErrorKind::NotMember);
}

TEST_CASE("centralizer of a is the A^eta family", "[lab][property]") {
  for (auto [n, k] : std::vector<std::pair<long, long>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
    auto C = centralizer_in_Hk(standard_a_power(n, k, BigInt(1)), enumerate_Hk(n, k));
    CHECK(BigInt(C.elements.size()) == ipow(n, k));
    std::set<BigInt> etas;
    for (const auto& f : C.elements) {
      auto eta = extract_eta(f);
      CHECK(build_Aeta(eta) == f);
      etas.insert(eta.residue);
    }
    CHECK(BigInt(etas.size()) == ipow(n, k));
  }
}

TEST_CASE("centralizer bound report", "[lab]") {
  auto r = centralizer_bound_report(2, 2, BigInt(2));
  CHECK(r.brute == 8);
  CHECK(*r.formula == 8);
  CHECK(r.match);
  auto r3 = centralizer_bound_report(2, 3, BigInt(2));
  CHECK(r3.brute == 32);
  CHECK(*r3.formula == 16);
  CHECK_FALSE(comparison(r3, "bound n^k").holds);
  CHECK(comparison(r3, "split sequence").holds);
  auto r1 = centralizer_bound_report(2, 2, BigInt(1));
  CHECK(r1.brute == 4);
  CHECK(kind_of([] { centralizer_bound_report(2, 1, BigInt(2)); }) == ErrorKind::InvalidParams);
}

TEST_CASE("split sequence count matches enumeration", "[lab][property]") {
  for (auto [n, k, m] : std::vector<std::tuple<long, long, long>>{{2, 2, 1}, {2, 3, 1}, {2, 3, 2}, {2, 3, 3}, {3, 2, 1}, {3, 2, 2}}) {
    CHECK(comparison(centralizer_bound_report(n, k, BigInt(m)), "split sequence").holds);
  }
}

TEST_CASE("eventual transitivity examples", "[lab]") {
  auto r1 = eventually_transitive_search(q(1), 2, 1, 8);
  CHECK(r1.raw.k == 0);
  CHECK(r1.raw.j == 1);
  CHECK(r1.certified);
  auto r12 = eventually_transitive_search(q(12), 2, 1, 8);
  CHECK(r12.raw.k == 2);
  CHECK(r12.raw.j == 1);
  CHECK(r12.h0 == 2);
  CHECK(r12.normalized.k == 0);
  CHECK(r12.normalized.j == 1);
  CHECK(r12.certified);
  auto r6 = eventually_transitive_search(q(4), 6, 1, 8);
  CHECK(r6.h0 == 0);
  CHECK(r6.normalized.k == 2);
  CHECK(r6.normalized.j == 9);
  CHECK(r6.certified);
  CHECK(kind_of([] { eventually_transitive_search(q(0), 2, 1, 8); }) == ErrorKind::ZeroTranslation);
  CHECK(kind_of([] { eventually_transitive_search(q(1), 2, 1, 40); }) == ErrorKind::TooLarge);
}

TEST_CASE("eventual transitivity agrees with orbit walks", "[lab][property]") {
  testing::Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    long n = rng.pick(std::vector<long>{2, 3, 4, 6});
    long l = rng.uniform(1, 2);
    Rational beta(BigInt(rng.uniform(1, 5000) * (rng.uniform(0, 1) ? 1 : -1)), ipow(n, rng.uniform(0, 2)));
    auto r = eventually_transitive_search(beta, n, l, 4);
    CHECK(r.certified);
    Rational b0 = beta / rpow(n, r.h0);
    Rational shift = Rational(r.normalized.j) * b0 / rpow(n, l * r.normalized.k);
    auto mod = static_cast<std::uint64_t>(ipow(n, 4));
    CHECK(walk(static_cast<std::uint64_t>(reduce_mod_power(shift, n, 4)), mod) == mod);
    // The orbit of w_k under translation by b0 has exactly j elements.
    if (r.normalized.k > 0) {
      auto modk = static_cast<std::uint64_t>(ipow(n, l * r.normalized.k));
      CHECK(BigInt(walk(static_cast<std::uint64_t>(reduce_mod_power(b0, n, l * r.normalized.k)), modk)) ==
            r.normalized.j);
    }
  }
}

TEST_CASE("level sums", "[lab]") {
  auto r = level_sum_check(2, q(1), q(1), 6);
  CHECK(r.match);
  CHECK(r.brute == 1);
  CHECK(r.details.size() == 6);
  CHECK(level_sum_check(2, q(3), q(1, 2), 6).brute == q(1, 2));
  CHECK(level_sum_check(4, q(2), q(1), 4).match);
  CHECK(level_sum_check(6, q(0), q(5, 3), 3).match);
  CHECK(kind_of([] { level_sum_check(2, q(1, 2), q(1), 3); }) == ErrorKind::InvalidParams);
}

TEST_CASE("Jordan index", "[lab]") {
  auto r22 = jordan_index_report(2, 2, 1, 2);
  REQUIRE(r22.size() == 2);
  CHECK(r22[0].brute == 2);
  CHECK(r22[1].brute == 1);
  auto r23 = jordan_index_report(2, 3, 1, 1);
  CHECK(r23[0].brute == 16);
  CHECK(r23[0].formula);
  CHECK(comparison(r23[0], "index lower bound").holds);
  auto details = std::map<std::string, std::string>(r23[0].details.begin(), r23[0].details.end());
  CHECK(details["max abelian order"] == "16");
}
