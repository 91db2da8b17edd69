#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <random>

#include "factmod/residues.hpp"
#include "oracles.hpp"

using namespace factmod;

TEST_CASE("v_count examples") {
  const auto v5 = v_count(PrimeCtx(5), Window{0, 4});
  CHECK(v5.V == 3);
  CHECK(v5.missed == 2);
  const auto v7 = v_count(PrimeCtx(7), Window{0, 6});
  CHECK(v7.V == 4);
  CHECK(v7.missed == 3);
  CHECK(v7.range.lo == 2);
  CHECK(v7.range.hi == 6);
  CHECK(v7.range.count() == 5);
  const auto single = v_count(PrimeCtx(7), Window{2, 0});
  CHECK(single.V == 1);
  CHECK(single.range.count() == 1);
}

TEST_CASE("windows are clipped to [2, p-1]") {
  const PrimeCtx ctx(11);
  const auto r = effective_range(ctx, Window{8, 100});
  CHECK(r.lo == 8);
  CHECK(r.hi == 10);
  CHECK_THROWS_AS(effective_range(ctx, Window{0, 1}), std::domain_error);
  CHECK_THROWS_AS(effective_range(ctx, Window{11, 5}), std::domain_error);
  CHECK_THROWS_AS(v_count(ctx, Window{20, 5}), std::domain_error);
  // H + N overflowing a word still clips.
  CHECK(effective_range(ctx, Window{3, ~u64{0}}).hi == 10);
}

TEST_CASE("V from the bit set equals a sorted-set oracle for p <= 2000") {
  for (u64 p : oracle::primes_upto(2000)) {
    if (p < 3) continue;
    const PrimeCtx ctx(p);
    const auto v = v_count(ctx, Window{0, p - 1});
    REQUIRE(v.V == oracle::distinct_factorials(p, 2, p - 1));
    REQUIRE(v.missed == p - v.V);
    REQUIRE(v.missed >= 1);
  }
}

TEST_CASE("V on random windows matches the oracle; monotone and subadditive") {
  std::mt19937_64 rng(21);
  const auto primes = oracle::primes_upto(3000);
  for (int i = 0; i < 400; ++i) {
    const u64 p = primes[2 + rng() % (primes.size() - 2)];
    const PrimeCtx ctx(p);
    const u64 H = 2 + rng() % (p - 2);
    const u64 N = rng() % p;
    const auto v = v_count(ctx, Window{H, N});
    REQUIRE(v.V == oracle::distinct_factorials(p, v.range.lo, v.range.hi));

    const u64 N1 = N == 0 ? 0 : rng() % N;
    REQUIRE(v_count(ctx, Window{H, N1}).V <= v.V);

    if (N >= 2 && H + N <= p - 1) {
      const u64 k = rng() % (N - 1);
      const u64 left = v_count(ctx, Window{H, k}).V;
      const u64 right = v_count(ctx, Window{H + k + 1, N - k - 1}).V;
      REQUIRE(v.V <= left + right);
    }
  }
}

TEST_CASE("erdos_check examples and errors") {
  CHECK(erdos_check(PrimeCtx(7)) == Collision{3, 6});
  CHECK_FALSE(erdos_check(PrimeCtx(5)).has_value());
  CHECK_THROWS_AS(erdos_check(PrimeCtx(3)), std::domain_error);
  const auto c11 = erdos_check(PrimeCtx(11));
  const auto o11 = oracle::first_collision(11);
  REQUIRE(c11.has_value());
  REQUIRE(o11.has_value());
  CHECK(c11->m == o11->first);
  CHECK(c11->n == o11->second);
}

TEST_CASE("erdos_check agrees with the map oracle and with v_count") {
  for (u64 p : oracle::primes_upto(3000)) {
    if (p < 5) continue;
    const PrimeCtx ctx(p);
    const auto c = erdos_check(ctx);
    const auto o = oracle::first_collision(p);
    REQUIRE(c.has_value() == o.has_value());
    if (c) {
      REQUIRE(c->m == o->first);
      REQUIRE(c->n == o->second);
    }
    // No collision exactly when every index in [2, p-1] gives a new value.
    const auto v = v_count(ctx, Window{0, p - 1});
    REQUIRE(c.has_value() == (v.V != v.range.count()));
  }
}

TEST_CASE("FactorialScanner reuses its table across primes of mixed sizes") {
  FactorialScanner scanner;
  for (u64 p : {u64{10007}, u64{7}, u64{2003}, u64{5}, u64{10009}, u64{11}}) {
    const PrimeCtx ctx(p);
    const auto r = scanner.scan(ctx);
    CHECK(r.p == p);
    CHECK(r.V == v_count(ctx, Window{0, p - 1}).V);
    CHECK(r.missed == p - r.V);
    CHECK(r.collision == erdos_check(ctx));
  }
}

TEST_CASE("CSV rows round-trip") {
  const ScanRecord with{7, 4, 3, Collision{3, 6}};
  CHECK(to_csv_row(with) == "7,4,3,0.571428571,3,6");
  CHECK(parse_csv_row(to_csv_row(with)) == with);
  const ScanRecord without{5, 3, 2, std::nullopt};
  CHECK(to_csv_row(without) == "5,3,2,0.600000000,,");
  CHECK(parse_csv_row(to_csv_row(without)) == without);
  CHECK_THROWS_AS(parse_csv_row("7,4,2,0.5,3,6"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv_row("7,4,3,0.5,3,"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv_row("7,4,3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv_row("7x,4,3,0.5,,"), std::invalid_argument);
}

TEST_CASE("Chen-Dai floor is an exact integer comparison") {
  CHECK(chen_dai_holds(4, 7));    // 32 >= 21
  CHECK_FALSE(chen_dai_holds(2, 7));  // 8 < 21
  CHECK(chen_dai_holds(3, 6));    // 18 >= 18
  CHECK_FALSE(chen_dai_holds(3, 7));  // 18 < 21
}

TEST_CASE("guy_ratio_scan examples") {
  const auto single = guy_ratio_scan(7, 7, ScanOptions{});
  REQUIRE(single.records.size() == 1);
  CHECK(single.mean_ratio == doctest::Approx(4.0 / 7.0));

  CHECK(guy_ratio_scan(24, 28, ScanOptions{}).records.empty());
  CHECK(guy_ratio_scan(100, 10, ScanOptions{}).records.empty());

  const auto rep = guy_ratio_scan(10'000, 20'000, ScanOptions{});
  CHECK(rep.records.size() == oracle::primes_upto(20'000).size() - oracle::primes_upto(9'999).size());
  CHECK(std::abs(rep.mean_ratio - kGuyLimit) <= 0.02);
  CHECK(rep.summary.chen_dai_violations.empty());
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    REQUIRE(rep.records[i - 1].p < rep.records[i].p);
  }
}

TEST_CASE("scan output is independent of thread count and batch size") {
  auto collect = [](unsigned threads, std::size_t batch) {
    ScanOptions o;
    o.threads = threads;
    o.batch = batch;
    std::vector<ScanRecord> out;
    factorial_scan(5, 30'000, o, [&](const ScanRecord& r) { out.push_back(r); });
    return out;
  };
  const auto base = collect(1, 2048);
  CHECK(collect(4, 2048) == base);
  CHECK(collect(3, 17) == base);
  CHECK(collect(8, 1) == base);
}

TEST_CASE("factorial_scan resumes after a given prime") {
  std::vector<ScanRecord> all, tail;
  factorial_scan(5, 2000, ScanOptions{}, [&](const ScanRecord& r) { all.push_back(r); });
  factorial_scan(5, 2000, ScanOptions{}, [&](const ScanRecord& r) { tail.push_back(r); }, 1009);
  REQUIRE(!tail.empty());
  CHECK(tail.front().p == 1013);
  CHECK(std::equal(tail.begin(), tail.end(), all.end() - static_cast<long>(tail.size())));
}

TEST_CASE("budget refusal") {
  CHECK(estimate_prime_sum(5, 3) == 0);
  const double est = estimate_prime_sum(0, 1'000'000);
  CHECK(est == doctest::Approx(3.7e10).epsilon(0.05));
  CHECK(estimate_prime_sum(0, 1'000'000'000) > kDefaultBudget);
  ScanOptions o;
  CHECK_THROWS_AS(factorial_scan(5, 4'000'000'000ull, o, [](const ScanRecord&) {}), BudgetExceeded);
  o.budget = 1e6;
  CHECK_THROWS_AS(average_missed(100'000, o), BudgetExceeded);
  o.force = true;
  CHECK_NOTHROW(average_missed(1000, o));
  try {
    enforce_budget(2e11, false);
    FAIL("expected refusal");
  } catch (const BudgetExceeded& e) {
    CHECK(e.estimate() == 2e11);
    CHECK(std::string(e.what()).find("--force") != std::string::npos);
  }
}

TEST_CASE("short_interval_bound_check") {
  const PrimeCtx ctx(10007);
  const auto full = short_interval_bound_check(ctx, Window{0, 10006});
  CHECK(full.pass);
  CHECK(full.in_regime);
  CHECK(full.V >= 123);

  const auto mid = short_interval_bound_check(ctx, Window{5000, 200});
  CHECK(mid.N == 200);
  CHECK(mid.regime_threshold == 11);  // ceil(10007^{1/4}) = ceil(10.0017)
  CHECK(mid.in_regime);
  CHECK(mid.pass == (2 * mid.V * mid.V >= 3 * mid.N));
  CHECK(mid.V == oracle::distinct_factorials(10007, 5000, 5200));
  CHECK(mid.bound_floor == 17);

  const auto tiny = short_interval_bound_check(ctx, Window{100, 1});
  CHECK(tiny.N == 1);
  CHECK_FALSE(tiny.in_regime);
  CHECK(tiny.V == 2);

  const auto wide = short_interval_bound_check(ctx, Window{5000, 5}, 0.0);
  CHECK(wide.regime_threshold == 1);
  CHECK(wide.in_regime);
}

TEST_CASE("average_missed examples") {
  const auto a7 = average_missed(7, ScanOptions{});
  CHECK(a7.primes == 2);
  CHECK(a7.average == Rational(5, 2));
  CHECK(average_missed(5, ScanOptions{}).average == 2);
  CHECK(average_missed(6, ScanOptions{}).average == 2);
  CHECK_THROWS_AS(average_missed(4, ScanOptions{}), std::domain_error);

  // Oracle: direct sum over primes.
  const u64 x = 3000;
  u64 sum = 0, count = 0;
  for (u64 p : oracle::primes_upto(x)) {
    if (p < 5) continue;
    sum += p - oracle::distinct_factorials(p, 2, p - 1);
    ++count;
  }
  const auto ax = average_missed(x, ScanOptions{});
  CHECK(ax.primes == count);
  CHECK(ax.sum_missed == sum);
  CHECK(ax.average == Rational(BigInt(sum), BigInt(count)));
  CHECK(ax.average >= 1);
}

TEST_CASE("ScanSummary aggregates") {
  ScanSummary s;
  s.add(ScanRecord{5, 3, 2, std::nullopt});
  s.add(ScanRecord{7, 4, 3, Collision{3, 6}});
  CHECK(s.count == 2);
  CHECK(s.sum_missed == 5);
  CHECK(s.last_prime == 7);
  CHECK(s.no_collision == std::vector<u64>{5});
  CHECK(s.mean_missed() == Rational(5, 2));
  CHECK(s.mean_ratio() == doctest::Approx((0.6 + 4.0 / 7.0) / 2));
  CHECK_THROWS_AS(ScanSummary{}.mean_missed(), std::domain_error);
}
