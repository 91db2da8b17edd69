#pragma once

// Executable checks for the three lemmas behind the short-interval lower bound
// on V(H,N) and for the pair-colouring argument that combines them.

#include <optional>
#include <span>
#include <vector>

#include "factmod/polyfp.hpp"
#include "factmod/residues.hpp"

namespace factmod {

// ---- quadratic images in an interval ---------------------------------------

/// P(x) = x^2 + b x + c over F_p.
struct Quadratic {
  u64 b = 0;
  u64 c = 0;
};

/// y is a value of P iff 4y + b^2 - 4c is a square (0 included).
bool quadratic_hits(const PrimeCtx& ctx, const Quadratic& q, u64 y) noexcept;

struct BurgessCount {
  u64 count = 0;
  double deviation = 0;  // count - N/2
  double envelope = 0;   // 3 sqrt(p) ln p
  bool within_envelope = false;
};

/// Counts y in [H, H+N] (taken mod p) that are values of P. Throws
/// std::domain_error when the window holds more than p residues.
BurgessCount burgess_count(const PrimeCtx& ctx, const Quadratic& q, u64 H, u64 N);

/// Same count by marking P(x) for every x in F_p.
u64 quadratic_image_count_brute(const PrimeCtx& ctx, const Quadratic& q, u64 H, u64 N);

// ---- shift lemma -------------------------------------------------------------

struct ShiftWitness {
  u64 d = 1;
  u64 pair_count = 0;
  double alpha = 0;      // |S| / N
  u64 max_shift = 1;     // ceil(1/alpha)
  double guarantee = 0;  // alpha^3 N / 2
  /// guarantee < 1: the bound is below one pair and is not enforced.
  bool vacuous = false;
  bool holds = true;
};

/// #{(a, b) in S x S : a - b = d} for sorted, duplicate-free S.
u64 difference_count(std::span<const u64> sorted_set, u64 d) noexcept;

/// Smallest d in [1, ceil(1/alpha)] maximising the number of differences equal to d,
/// with alpha = |S|/N. S must lie in [H, H+N]. Throws std::domain_error on an empty
/// S, an element outside the window or N == 0.
ShiftWitness sieve_shift_find(std::vector<u64> S, u64 H, u64 N);

// ---- (n!)^2 == P(n) ----------------------------------------------------------

struct Lemma3Result {
  IndexRange range;
  std::vector<u64> solutions;
  double ratio = 0;  // solutions / N^{3/4}, N = range length (at least 1)
  /// For every pair of solutions n < n+d: P(n) (prod_{k=1}^d (n+k)^2 - 1) == P(n+d) - P(n).
  bool derived_congruence_ok = true;
  u64 pairs_checked = 0;
};

/// Throws std::domain_error when deg P > 8 or the window misses [2, p-1].
Lemma3Result lemma3_count(const PrimeCtx& ctx, const PolyFp& P, u64 H, u64 N);

// ---- colouring ---------------------------------------------------------------

struct ColoringReport {
  u64 p = 0;
  IndexRange range;
  bool degenerate = false;  // fewer than 5 indices
  u64 colors = 0;           // k

  // (i) (n, n+1) patterns pairwise distinct
  u64 consecutive_pairs = 0;
  u64 consecutive_repeats = 0;
  // (ii) same colour pattern (n, n+2) ~ (m, m+2), n != m  =>  n + m + 3 == 0
  u64 gap2_coincidences = 0;
  u64 gap2_relation_failures = 0;
  // (iii) ((n+2)!)^2 == (-1)^{n-1} (n+1)(n+2) for every n in such a coincidence
  u64 wilson_checked = 0;
  u64 wilson_failures = 0;
  // (iv) (n, n+1) ~ (m, m+2)  =>  n == m^2 + 3m + 1
  u64 cross_coincidences = 0;
  u64 cross_relation_failures = 0;
  // (v) distinct ordered colour pairs among both pair families, against k^2
  u64 distinct_patterns = 0;
  double target = 0;          // 1.5 N
  double observed_constant = 0;  // (1.5 N - distinct_patterns) / N^{3/4}
  bool k_squared_ok = true;

  /// (i)-(iv) and k^2 >= distinct_patterns.
  bool all_pass() const noexcept {
    return consecutive_repeats == 0 && gap2_relation_failures == 0 && wilson_failures == 0 &&
           cross_relation_failures == 0 && k_squared_ok;
  }
};

/// Colours [H, H+N] clipped to [2, p-1] by factorial value and verifies the pair relations.
ColoringReport coloring_pairs(const PrimeCtx& ctx, u64 H, u64 N);

/// (p-1)! != (p-2)! (mod p).
bool top_factorials_differ(const PrimeCtx& ctx);

}  // namespace factmod
