#pragma once

// Permutation groups given by generators, fixed-point-free proportions and the
// Burnside count; random-permutation partial products; the failing-prime density.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factmod/bigint.hpp"
#include "factmod/residues.hpp"

namespace factmod {

/// Images of the points 0..n-1.
using Perm = std::vector<std::uint16_t>;

Perm identity_perm(std::size_t n);
/// (a * b)(x) = a(b(x)).
Perm compose(const Perm& a, const Perm& b);
std::size_t fixed_points(const Perm& g) noexcept;

/// Parses "(1 2 3),(1 2)" with 1-based points. `degree` of 0 means the largest
/// point mentioned. Throws std::invalid_argument on malformed input.
std::vector<Perm> parse_generators(std::string_view text, std::size_t degree = 0);

inline constexpr std::size_t kGroupGuard = 1'000'000;

class PermGroup {
 public:
  /// Closure of the generators. Throws std::length_error above `guard` elements.
  PermGroup(std::size_t degree, const std::vector<Perm>& generators,
            std::size_t guard = kGroupGuard);

  /// S_n from a transposition and an n-cycle.
  static PermGroup symmetric(std::size_t n, std::size_t guard = kGroupGuard);

  std::size_t degree() const noexcept { return degree_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<Perm>& elements() const noexcept { return elements_; }
  const std::vector<Perm>& generators() const noexcept { return generators_; }

  /// Orbits of the natural action, by union-find over the generators.
  std::size_t orbit_count() const;

 private:
  std::size_t degree_;
  std::vector<Perm> generators_;
  std::vector<Perm> elements_;
};

struct FixedPointFree {
  std::size_t degree = 0;
  BigInt order;
  BigInt derangements;
  Rational sigma;
  bool upper_bound_ok = true;          // sigma <= 1 - 1/n
  bool printed_lower_bound_holds = true;  // sigma >= 1 - 1/n!, recorded only
  /// (1/|G|) sum |X^g| == number of orbits.
  bool burnside_identity_ok = true;
  Rational average_fixed_points;
  std::size_t orbits = 0;
};

FixedPointFree fixed_point_free_proportion(const PermGroup& G);

/// D_n from D_n = (n-1)(D_{n-1} + D_{n-2}), D_0 = 1, D_1 = 0.
BigInt derangements(unsigned n);
BigInt factorial(unsigned n);

// ---- random-permutation partial products ------------------------------------

/// SplitMix64 finaliser, used to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept;

/// Uniform permutation of {1, ..., p-1} by Fisher-Yates on mt19937_64 with
/// rejection-based bounded draws; identical output on every platform.
std::vector<u64> random_unit_permutation(u64 p, std::uint64_t seed);

/// Distinct values among sigma(1), sigma(1)sigma(2), ..., prod_{i<p} sigma(i) mod p.
u64 partial_product_distinct(const PrimeCtx& ctx, const std::vector<u64>& sigma);

struct PartialProductTrial {
  std::uint64_t seed = 0;
  u64 distinct = 0;
};

struct PartialProductReport {
  u64 p = 0;
  std::uint64_t master_seed = 0;
  std::vector<PartialProductTrial> trials;
  double mean = 0;
  double mean_over_p = 0;
  double deviation = 0;  // mean/p - (1 - 1/e)
};

/// Throws std::domain_error for p < 5 or trials == 0.
PartialProductReport partial_products_distinct(u64 p, u64 trials, std::uint64_t seed,
                                               unsigned threads = 1);

// ---- density of primes without a factorial collision ------------------------

struct DensityEstimate {
  unsigned N = 0;
  Rational product;  // prod_{n=2}^N (1 - 1/n)
  /// (sum (1-s_n)/s_n) * prod s_n with s_n = sigma(S_n) for n <= measured_upto, 1 - 1/n beyond.
  Rational chain;
  unsigned measured_upto = 0;
  std::vector<Rational> sigmas;  // s_2 .. s_N
};

/// Throws std::domain_error for N < 2.
DensityEstimate failing_density_estimate(unsigned N, unsigned measure_upto = 8);

struct ErdosDensity {
  u64 x = 0;
  u64 primes = 0;
  std::vector<u64> without_collision;
  /// Empty when there are no primes in [5, x].
  std::optional<Rational> fraction;
};

ErdosDensity erdos_density_scan(u64 x, const ScanOptions& opts);

}  // namespace factmod
