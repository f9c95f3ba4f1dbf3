#include <catch_amalgamated.hpp>

#include "bsl/exactnum.hpp"
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

}  // namespace

TEST_CASE("parse and print rationals", "[exactnum]") {
  CHECK(parse_rational("3/6") == q(1, 2));
  CHECK(parse_rational(" -7 ") == q(-7));
  CHECK(parse_rational("-4/8") == q(-1, 2));
  CHECK(to_string(q(6, 4)) == "3/2");
  CHECK(to_string(q(-5)) == "-5");
  CHECK(parse_bigint("123456789012345678901234567890") * 10 == parse_bigint("1234567890123456789012345678900"));
  for (const char* bad : {"", "1/0", "x", "1/2/3", "1.5", "--1", "4/-8"}) {
    CHECK(kind_of([&] { parse_rational(bad); }) == ErrorKind::ParseError);
  }
}

TEST_CASE("floor division and powers", "[exactnum]") {
  CHECK(floor_div(BigInt(-7), BigInt(2)) == -4);
  CHECK(floor_mod(BigInt(-7), BigInt(2)) == 1);
  CHECK(floor_div(-1L, 3L) == -1);
  CHECK(ipow(6, 3) == 216);
  CHECK(rpow(2, -3) == q(1, 8));
  CHECK(rpow(5, 0) == 1);
}

TEST_CASE("prime signatures", "[exactnum]") {
  auto s = PrimeSignature::of(12);
  REQUIRE(s.factors.size() == 2);
  CHECK(s.factors[0].p == 2);
  CHECK(s.factors[0].e == 2);
  CHECK(s.factors[1].p == 3);
  CHECK(PrimeSignature::of(8).is_prime_power());
  CHECK_FALSE(PrimeSignature::of(6).is_prime_power());
  CHECK(s.divides_some_power(BigInt(18)));
  CHECK_FALSE(s.divides_some_power(BigInt(10)));
  CHECK(kind_of([] { PrimeSignature::of(1); }) == ErrorKind::InvalidParams);
}

TEST_CASE("n-adic valuation", "[exactnum]") {
  CHECK(n_valuation(q(12), 2).value() == 2);
  CHECK(n_valuation(q(8), 4).value() == 1);
  CHECK(n_valuation(q(9, 2), 6).value() == -1);
  CHECK(n_valuation(q(0), 3).is_infinite());
  CHECK(n_valuation(q(16), 4).value() == 2);
  CHECK(n_valuation(q(2), 4).value() == 0);
  CHECK(n_valuation(q(1, 8), 4).value() == -2);
}

TEST_CASE("units of Z_n", "[exactnum]") {
  CHECK(is_unit_in_Zn(q(3), 2));
  CHECK_FALSE(is_unit_in_Zn(q(1, 2), 2));
  CHECK_FALSE(is_unit_in_Zn(q(10), 6));
  CHECK(n_valuation(q(10), 6).value() == 0);
  CHECK(is_unit_in_Zn(q(5, 7), 6));
}

TEST_CASE("unit implies valuation zero", "[exactnum][property]") {
  testing::Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    long n = rng.pick(std::vector<long>{2, 3, 4, 6, 10, 12});
    Rational x(BigInt(rng.uniform(-500, 500)), BigInt(rng.uniform(1, 64)));
    if (x == 0) continue;
    if (is_unit_in_Zn(x, n)) CHECK(n_valuation(x, n).value() == 0);
  }
}

TEST_CASE("valuation is superadditive under products", "[exactnum][property]") {
  testing::Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    long n = rng.pick(std::vector<long>{2, 3, 4, 6, 12});
    Rational x(BigInt(rng.uniform(1, 400)), BigInt(rng.uniform(1, 64)));
    Rational y(BigInt(rng.uniform(1, 400)), BigInt(rng.uniform(1, 64)));
    auto vx = n_valuation(x, n).value(), vy = n_valuation(y, n).value();
    CHECK(n_valuation(x * y, n).value() >= vx + vy);
    if (PrimeSignature::of(n).factors.size() == 1 && PrimeSignature::of(n).factors[0].e == 1) {
      CHECK(n_valuation(x * y, n).value() == vx + vy);
    }
  }
}

TEST_CASE("Z[1/n] elements", "[exactnum]") {
  NInvertible x(q(3, 4), 2), y(q(5, 8), 2);
  CHECK((x + y).value() == q(11, 8));
  CHECK((x * y).value() == q(15, 32));
  CHECK(kind_of([] { NInvertible(q(1, 3), 2); }) == ErrorKind::InvalidParams);
  CHECK(kind_of([&] { (void)(x + NInvertible(q(1), 3)); }) == ErrorKind::BaseMismatch);
  CHECK(in_Z_inv_n(q(7, 36), PrimeSignature::of(6)));
  CHECK(n_part(q(12, 5), PrimeSignature::of(2)) == 4);
}

TEST_CASE("solve j eta", "[exactnum]") {
  CHECK(solve_j_eta(BigInt(1), 0, 2) == 1);
  CHECK(solve_j_eta(BigInt(4), 3, 2) == 2);
  CHECK(kind_of([] { solve_j_eta(BigInt(3), 1, 2); }) == ErrorKind::NotDivisible);
}

TEST_CASE("truncated inverse", "[exactnum]") {
  CHECK(truncated_inverse(BigInt(3), 3, 2).residue == 3);
  CHECK(truncated_inverse(BigInt(1), 5, 3).residue == 1);
  CHECK(kind_of([] { truncated_inverse(BigInt(2), 2, 2); }) == ErrorKind::NotInvertible);
  testing::Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    long n = rng.pick(std::vector<long>{2, 3, 5, 6, 10});
    long D = rng.uniform(1, 8);
    BigInt x(testing::coprime_integer(rng, n, 10000));
    auto inv = truncated_inverse(x, D, n);
    CHECK(floor_mod(inv.residue * x, inv.modulus()) == 1);
  }
}

TEST_CASE("reduction modulo n^h", "[exactnum]") {
  CHECK(reduce_mod_power(q(-1), 2, 2) == 3);
  CHECK(reduce_mod_power(q(1, 3), 2, 3) == 3);
  CHECK(canonical_mod(q(-1), 2, 2) == 3);
  CHECK(canonical_mod(q(5, 4), 0, 2) == q(1, 4));
  CHECK(canonical_mod(q(3, 2), -1, 2) == 0);
  CHECK(canonical_mod(q(1, 3), 1, 2) == 1);
  CHECK(kind_of([] { reduce_mod_power(q(1, 2), 2, 3); }) == ErrorKind::InvalidParams);
}

TEST_CASE("canonical representative is idempotent and in range", "[exactnum][property]") {
  testing::Rng rng(14);
  for (int t = 0; t < 300; ++t) {
    long n = rng.pick(std::vector<long>{2, 3, 4, 6});
    long h = rng.uniform(-3, 4);
    Rational c = testing::random_z_inv_n(rng, n, 500);
    auto r = canonical_mod(c, h, n);
    CHECK(r >= 0);
    CHECK(r < rpow(n, h));
    CHECK(canonical_mod(r, h, n) == r);
    CHECK(in_ball(c - r, h, n));
  }
}
