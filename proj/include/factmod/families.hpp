#pragma once

// The family f_n(t) = t(t+1)...(t+n-1) - 1: root counts rho_n(p), the factorial
// collisions each root forces, prime scans and discriminant data.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factmod/bigint.hpp"
#include "factmod/polyz.hpp"
#include "factmod/residues.hpp"

namespace factmod {

inline constexpr int kMaxFamilyIndex = 64;

class FamilyPoly {
 public:
  /// Throws std::domain_error unless 1 <= n <= 64.
  explicit FamilyPoly(int n);

  int n() const noexcept { return n_; }
  const PolyZ& poly() const noexcept { return poly_; }
  PolyFp reduce(const PrimeCtx& ctx) const { return poly_.reduce(ctx); }
  /// Computed on first use.
  const BigInt& discriminant() const;

 private:
  int n_;
  PolyZ poly_;
  mutable std::optional<BigInt> disc_;
};

inline FamilyPoly build_f(int n) { return FamilyPoly(n); }

struct RhoResult {
  int n = 0;
  u64 p = 0;
  int count = 0;
  /// Present when p is within the exhaustive-root guard.
  std::optional<std::vector<u64>> roots;
  /// Roots t0 with t0 >= 1 and t0 + n - 1 <= p - 1.
  std::vector<u64> checked_roots;
  /// Roots outside that range, excluded from the collision check.
  std::vector<u64> boundary_roots;
  /// Every checked root satisfies (t0+n-1)! == (t0-1)! (mod p).
  bool verified = true;
};

/// rho_n(p) = number of distinct roots of f_n mod p. Roots are enumerated and
/// their factorial consequence checked when p <= root_guard.
RhoResult rho(const FamilyPoly& f, const PrimeCtx& ctx, u64 root_guard = kBruteRootGuard);
inline RhoResult rho(int n, const PrimeCtx& ctx) { return rho(FamilyPoly(n), ctx); }

/// Checks (t0+n-1)! == (t0-1)! mod p for in-range roots given a factorial table
/// fact[k] = k! mod p, 0 <= k <= p-1.
bool root_forces_collision(u64 t0, int n, const std::vector<u64>& fact) noexcept;

/// Table k! mod p for 0 <= k <= p-1.
std::vector<u64> factorial_table(const PrimeCtx& ctx);

struct RhoRow {
  u64 p = 0;
  int n = 0;
  int rho = 0;
};

inline constexpr const char* kRhoCsvHeader = "p,n,rho";
std::string to_csv_row(const RhoRow& r);

struct RhoMeanReport {
  int n = 0;
  u64 x = 0;
  u64 primes = 0;
  u64 sum_rho = 0;
  Rational mean;
  double deviation = 0;  // mean - 1
  /// k -> #{p : rho_n(p) = k}
  std::map<int, u64> histogram;
};

inline constexpr int kRhoScanMaxN = 20;
inline constexpr u64 kRhoScanMaxX = 10'000'000;

/// Mean of rho_n(p) over odd primes p <= x. Rows are handed to `emit` in ascending p.
/// Throws std::domain_error outside n <= 20, x <= 10^7 unless opts.force.
RhoMeanReport rho_mean_scan(int n, u64 x, const ScanOptions& opts,
                            const std::function<void(const RhoRow&)>& emit = {});

struct MissedInequality {
  u64 p = 0;
  int nmax = 0;
  u64 missed = 0;
  /// rho_{2n+1}(p) for n = 1..nmax.
  std::vector<int> terms;
  u64 rho_sum = 0;
  bool pass = true;  // missed >= rho_sum
};

/// Compares p - V(0,p-1) with sum_{n=1}^{nmax} rho_{2n+1}(p).
/// Throws std::domain_error when 2*nmax+1 > p-2 or nmax > 10.
MissedInequality missed_inequality_check(const PrimeCtx& ctx, int nmax);

struct SquarefreePart {
  BigInt value;  // sign kept
  bool partial = false;
  BigInt unfactored;  // cofactor left after trial division (1 when complete)
};

/// Squarefree part by trial division up to `trial_bound` and a perfect-square
/// peel of the cofactor; a cofactor that cannot be resolved is flagged partial.
SquarefreePart squarefree_part(const BigInt& v, u64 trial_bound = 1'000'000);

struct DiscReport {
  int n = 0;
  BigInt disc;
  SquarefreePart squarefree;
  /// log10(|disc| / n^{10 n^2}); defined for n >= 2.
  double log10_bound_ratio = 0;
  bool bound_ok = true;
};

inline constexpr int kDiscMaxN = 24;

/// Throws std::domain_error unless 1 <= n <= 24.
DiscReport disc_family(int n, u64 trial_bound = 1'000'000);

/// Exact |v| <= n^{10 n^2}.
bool disc_within_bound(const BigInt& v, int n);

struct DisjointnessReport {
  int n1 = 0;
  int n2 = 0;
  u64 x = 0;
  SquarefreePart sqf1;
  SquarefreePart sqf2;
  /// Squarefree parts known and different: Q(sqrt d1) != Q(sqrt d2).
  bool quadratic_subfields_differ = false;
  bool quadratic_comparison_conclusive = false;
  u64 primes = 0;
  double freq1 = 0;
  double freq2 = 0;
  double joint = 0;
  double product = 0;
  double std_error = 0;
  double z_score = 0;  // (joint - product) / std_error, 0 when std_error == 0
};

/// Two proxies for disjoint splitting fields; see the report fields.
/// Throws std::domain_error when n1 == n2 or either exceeds 12.
DisjointnessReport splitting_disjointness_proxy(int n1, int n2, u64 x, const ScanOptions& opts);

}  // namespace factmod
