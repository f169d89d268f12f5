#include <doctest.h>

#include <random>
#include <stdexcept>

#include "shorres/numtheory.hpp"
#include "shorres/statevec.hpp"

using namespace shorres;

TEST_CASE("gcd") {
  CHECK(gcd(48, 18) == 6);
  CHECK(gcd(7, 15) == 1);
  CHECK(gcd(7 * 7 - 1, 15) == 3);
  CHECK(gcd(0, 9) == 9);
}

TEST_CASE("mod_pow") {
  CHECK(mod_pow(7, 2, 15) == 4);
  CHECK(mod_pow(7, 4, 15) == 1);
  CHECK(mod_pow(7, 0, 15) == 1);
  CHECK(mod_pow(123456, 0, 2147483647) == 1);
  CHECK_THROWS_AS(mod_pow(3, 2, 1), std::domain_error);
  // close to the modulus cap the squares exceed 64 bits
  CHECK(mod_pow(2147483646, 2, 2147483647) == 1);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const u64 N = 2 + rng() % (kMaxModulus - 2);
    const u64 x = rng() % N, a = rng() % 100000, b = rng() % 100000;
    const u64 lhs = mod_pow(x, a + b, N);
    const u64 rhs = static_cast<u64>(static_cast<unsigned __int128>(mod_pow(x, a, N)) * mod_pow(x, b, N) % N);
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("find_order_bruteforce") {
  CHECK(find_order_bruteforce(7, 15) == 4);
  CHECK(find_order_bruteforce(1, 15) == 1);
  CHECK(find_order_bruteforce(1, 21) == 1);
  CHECK(find_order_bruteforce(2, 15) == 4);
  CHECK(find_order_bruteforce(2, 21) == 6);
  CHECK_THROWS_AS(find_order_bruteforce(3, 15), std::domain_error);
}

TEST_CASE("register_sizes") {
  const RegisterSizes a = register_sizes(15, 0.25);
  CHECK(a.L == 4);
  CHECK(a.t == 11);
  CHECK(a.Q == 2048);
  CHECK_FALSE(a.within_square_window);
  CHECK_FALSE(within_square_window(15, 2048));
  CHECK(within_square_window(15, 256));

  const RegisterSizes b = register_sizes(21, 0.25);
  CHECK(b.L == 5);
  CHECK(b.t == 13);
  CHECK(b.Q == 8192);

  CHECK_THROWS_AS(register_sizes(15, 0.0), std::domain_error);
  CHECK_THROWS_AS(register_sizes(15, 1.0), std::domain_error);
}

TEST_CASE("continued_fraction_convergents") {
  const auto c = continued_fraction_convergents(1536, 2048);
  REQUIRE_FALSE(c.empty());
  CHECK(c.back() == Convergent{3, 4});

  CHECK(continued_fraction_convergents(0, 2048) == std::vector<Convergent>{{0, 1}});
  CHECK(continued_fraction_convergents(512, 2048) == std::vector<Convergent>{{0, 1}, {1, 4}});
  CHECK_THROWS_AS(continued_fraction_convergents(0, 0), std::domain_error);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const u64 Q = 2 + rng() % 100000;
    const u64 k = rng() % Q;
    const auto cs = continued_fraction_convergents(k, Q);
    REQUIRE_FALSE(cs.empty());
    CHECK(cs.back().numerator * Q == k * cs.back().denominator);
    for (std::size_t j = 0; j < cs.size(); ++j) {
      CHECK(gcd(cs[j].numerator, cs[j].denominator) == 1);
      // the second convergent may repeat denominator 1 when the first partial quotient is 1
      if (j >= 2) CHECK(cs[j].denominator > cs[j - 1].denominator);
      if (j >= 1) CHECK(cs[j].denominator >= cs[j - 1].denominator);
    }
    // alternation around k/Q
    for (std::size_t j = 0; j + 1 < cs.size(); ++j) {
      const __int128 d = static_cast<__int128>(cs[j].numerator) * Q - static_cast<__int128>(k) * cs[j].denominator;
      const __int128 e =
          static_cast<__int128>(cs[j + 1].numerator) * Q - static_cast<__int128>(k) * cs[j + 1].denominator;
      if (d != 0 && e != 0) CHECK(((d < 0) != (e < 0)));
    }
  }
}

TEST_CASE("recover_order") {
  const ShorInstance in = make_instance(15, 7, 11);
  CHECK(recover_order(1536, in) == 4u);
  CHECK(recover_order(512, in) == 4u);
  CHECK_FALSE(recover_order(0, in).has_value());
  // 1024/2048 = 1/2: 7^2 = 4, the multiple 4 verifies
  CHECK(recover_order(1024, in) == 4u);
}

TEST_CASE("recover_order never returns a wrong order") {
  for (u64 N : {15u, 21u, 33u, 35u}) {
    const RegisterSizes sz = register_sizes(N, 0.25);
    for (u64 x = 2; x < N; ++x) {
      if (gcd(x, N) != 1) continue;
      const ShorInstance in = make_instance(N, x, sz.t, sz.L);
      const OutcomeDistribution dist = eq6_distribution(*in.r, in.Q);
      int recovered = 0;
      for (std::size_t k : dist.support(1e-6)) {
        const auto q = recover_order(k, in);
        if (!q) continue;
        ++recovered;
        CAPTURE(N);
        CAPTURE(x);
        CAPTURE(k);
        REQUIRE(*q == *in.r);
        REQUIRE(mod_pow(x, *q, N) == 1);
      }
      if (*in.r > 1) CHECK(recovered > 0);
    }
  }
}

TEST_CASE("extract_factors") {
  const auto f = extract_factors(7, 4, 15);
  REQUIRE(f.has_value());
  CHECK(*f == std::pair<u64, u64>{3, 5});
  CHECK(extract_factors(4, 2, 15) == std::optional<std::pair<u64, u64>>{{3, 5}});
  // order 3 of 4 mod 21 is odd
  CHECK(find_order_bruteforce(4, 21) == 3);
  CHECK_FALSE(extract_factors(4, 3, 21).has_value());
  // 14 = -1 mod 15
  CHECK_FALSE(extract_factors(14, 2, 15).has_value());
  CHECK_THROWS_AS(extract_factors(7, 3, 15), std::domain_error);
}

TEST_CASE("make_instance") {
  const ShorInstance in = make_instance(15, 7, 11);
  CHECK(in.L == 4);
  CHECK(in.Q == 2048);
  CHECK(in.total_qubits() == 15);
  CHECK(in.r == 4u);
  CHECK(in.m == 512u);
  CHECK(in.order_divides_register());

  const ShorInstance odd = make_instance(21, 2, 13);
  CHECK(odd.r == 6u);
  CHECK_FALSE(odd.m.has_value());

  CHECK(make_instance(15, 1, 4).r == 1u);
  CHECK_THROWS_AS(make_instance(15, 3, 11), std::domain_error);
  CHECK_THROWS_AS(make_instance(15, 0, 11), std::domain_error);
  CHECK_THROWS_AS(make_instance(15, 15, 11), std::domain_error);
  CHECK(is_odd_composite(15));
  CHECK_FALSE(is_odd_composite(13));
  CHECK_FALSE(is_odd_composite(16));
}
