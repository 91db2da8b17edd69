#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <set>

#include "factmod/permgroup.hpp"
#include "oracles.hpp"

using namespace factmod;

TEST_CASE("generator parsing") {
  const auto g = parse_generators("(1 2 3),(1 2)");
  REQUIRE(g.size() == 2);
  CHECK(g[0] == Perm{1, 2, 0});
  CHECK(g[1] == Perm{1, 0, 2});
  // (1 2)(2 3): right factor first, so 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1.
  CHECK(parse_generators("(1 2)(2 3)")[0] == Perm{1, 2, 0});
  CHECK(parse_generators("(1 2)", 4)[0] == Perm{1, 0, 2, 3});
  CHECK(parse_generators(" ( 1  2 ) , (3) ")[1] == Perm{0, 1, 2});
  CHECK_THROWS_AS(parse_generators(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_generators("(1 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generators("(0 1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generators("(1 1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generators("(1 2),"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generators("(1 5)", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_generators("1 2"), std::invalid_argument);
}

TEST_CASE("closure is a group") {
  const auto gens = parse_generators("(1 2 3 4),(1 3)");  // dihedral of order 8
  const PermGroup G(4, gens);
  CHECK(G.order() == 8);
  std::set<Perm> elems(G.elements().begin(), G.elements().end());
  CHECK(elems.count(identity_perm(4)) == 1);
  for (const auto& a : G.elements()) {
    for (const auto& b : G.elements()) REQUIRE(elems.count(compose(a, b)) == 1);
  }
  CHECK_THROWS_AS(PermGroup::symmetric(8, 1000), std::length_error);
  CHECK_THROWS_AS(PermGroup(3, {Perm{0, 0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PermGroup(3, {Perm{0, 1}}), std::invalid_argument);
}

TEST_CASE("fixed_point_free_proportion examples") {
  const auto s3 = fixed_point_free_proportion(PermGroup::symmetric(3));
  CHECK(s3.sigma == Rational(1, 3));
  CHECK(s3.upper_bound_ok);
  CHECK_FALSE(s3.printed_lower_bound_holds);  // 1/3 < 5/6
  const auto s4 = fixed_point_free_proportion(PermGroup::symmetric(4));
  CHECK(s4.sigma == Rational(9, 24));
  CHECK(s4.derangements == 9);
  const auto trivial = fixed_point_free_proportion(PermGroup(5, {}));
  CHECK(trivial.sigma == 0);
  CHECK(trivial.orbits == 5);
  CHECK(trivial.burnside_identity_ok);
}

TEST_CASE("sigma(S_n) = D_n / n! and Burnside for n <= 8") {
  CHECK(derangements(0) == 1);
  CHECK(derangements(1) == 0);
  CHECK(derangements(4) == 9);
  CHECK(derangements(8) == 14833);
  for (unsigned n = 1; n <= 8; ++n) {
    const auto f = fixed_point_free_proportion(PermGroup::symmetric(n));
    REQUIRE(f.order == factorial(n));
    REQUIRE(f.sigma == Rational(derangements(n), factorial(n)));
    REQUIRE(f.burnside_identity_ok);
    REQUIRE(f.orbits == 1);
    REQUIRE(f.upper_bound_ok);
  }
}

TEST_CASE("Burnside and the upper bound on assorted subgroups") {
  const char* groups[] = {"(1 2 3)",           "(1 2)(3 4)",         "(1 2 3 4 5)",
                          "(1 2),(3 4 5)",     "(1 2 3),(2 3 4)",    "(1 2 3 4 5 6),(1 6)(2 5)(3 4)",
                          "(1 2)(3 4),(1 3)(2 4)", "(1 2 3 4 5 6 7)",  "(1 5)(2 6),(3 7)"};
  for (const char* g : groups) {
    const auto gens = parse_generators(g);
    const PermGroup G(gens.front().size(), gens);
    const auto f = fixed_point_free_proportion(G);
    INFO(g);
    CHECK(f.burnside_identity_ok);
    CHECK(f.upper_bound_ok);
    CHECK(f.sigma <= Rational(BigInt(f.degree - 1), BigInt(f.degree)));
  }
  // A transitive action attains the Burnside average of exactly one fixed point.
  const auto c7 = fixed_point_free_proportion(PermGroup(7, parse_generators("(1 2 3 4 5 6 7)")));
  CHECK(c7.sigma == Rational(6, 7));
}

TEST_CASE("partial products of permutations") {
  // Identity on p = 5: products 1, 2, 6 = 1, 24 = 4.
  const PrimeCtx ctx5(5);
  CHECK(partial_product_distinct(ctx5, {1, 2, 3, 4}) == 3);
  // The identity permutation reproduces the factorial values.
  for (u64 p : oracle::primes_upto(3000)) {
    if (p < 5) continue;
    const PrimeCtx ctx(p);
    std::vector<u64> id(p - 1);
    for (u64 i = 0; i < p - 1; ++i) id[i] = i + 1;
    const u64 V = oracle::distinct_factorials(p, 2, p - 1);
    const auto fact = oracle::factorials(p);
    bool one_repeats = false;
    for (u64 n = 2; n < p; ++n) one_repeats = one_repeats || fact[n] == 1;
    REQUIRE(partial_product_distinct(ctx, id) == V + (one_repeats ? 0 : 1));
  }
}

TEST_CASE("random permutations are seeded and uniform-looking") {
  const auto a = random_unit_permutation(101, 42);
  CHECK(a == random_unit_permutation(101, 42));
  CHECK(a != random_unit_permutation(101, 43));
  std::vector<u64> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (u64 i = 0; i < 100; ++i) CHECK(sorted[i] == i + 1);
  // Position of value 1 over many seeds is roughly uniform over 4 slots.
  std::vector<int> where(4, 0);
  for (u64 s = 0; s < 8000; ++s) {
    const auto q = random_unit_permutation(5, s);
    ++where[static_cast<std::size_t>(std::find(q.begin(), q.end(), 1) - q.begin())];
  }
  for (int c : where) CHECK(std::abs(c - 2000) < 200);
  // Pinned values guard cross-platform reproducibility of mt19937_64 and the draws.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
  CHECK(trial_seed(1, 0) == splitmix64(splitmix64(1)));
}

TEST_CASE("partial_products_distinct") {
  const auto r = partial_products_distinct(1009, 20, 7, 1);
  CHECK(r.trials.size() == 20);
  for (const auto& t : r.trials) {
    CHECK(t.distinct >= 1);
    CHECK(t.distinct <= 1008);
  }
  const auto r4 = partial_products_distinct(1009, 20, 7, 4);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(r4.trials[i].seed == r.trials[i].seed);
    CHECK(r4.trials[i].distinct == r.trials[i].distinct);
  }
  CHECK(r4.mean == r.mean);
  CHECK_THROWS_AS(partial_products_distinct(1009, 0, 7), std::domain_error);
  CHECK_THROWS_AS(partial_products_distinct(3, 5, 7), std::domain_error);
  CHECK_THROWS_AS(partial_products_distinct(1001, 5, 7), std::domain_error);
}

TEST_CASE("failing_density_estimate") {
  CHECK(failing_density_estimate(4).product == Rational(1, 4));
  CHECK(failing_density_estimate(100).product == Rational(1, 100));
  for (unsigned N = 2; N <= 60; ++N) REQUIRE(failing_density_estimate(N).product == Rational(BigInt(1), BigInt(N)));
  const auto d10 = failing_density_estimate(10);
  CHECK(d10.sigmas.size() == 9);
  CHECK(d10.sigmas[0] == Rational(1, 2));   // sigma(S_2)
  CHECK(d10.sigmas[2] == Rational(3, 8));   // sigma(S_4)
  CHECK(d10.sigmas[8] == Rational(9, 10));  // bound for n = 10
  CHECK(d10.chain > 0);
  // With the bound everywhere the chain is (sum 1/(n-1)) * (1/N).
  const auto bound_only = failing_density_estimate(6, 0);
  const Rational harmonic = Rational(1) + Rational(1, 2) + Rational(1, 3) + Rational(1, 4) + Rational(1, 5);
  CHECK(bound_only.chain == harmonic * Rational(1, 6));
  CHECK_THROWS_AS(failing_density_estimate(1), std::domain_error);
}

TEST_CASE("erdos_density_scan") {
  const auto d100 = erdos_density_scan(100, ScanOptions{});
  CHECK(d100.primes == 23);
  CHECK(d100.without_collision == std::vector<u64>{5});
  CHECK(*d100.fraction == Rational(1, 23));
  const auto d5 = erdos_density_scan(5, ScanOptions{});
  CHECK(*d5.fraction == 1);
  CHECK_FALSE(erdos_density_scan(4, ScanOptions{}).fraction.has_value());
}
