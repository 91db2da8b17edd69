#pragma once

// Distinct-residue counts V(H,N) of the factorial sequence, Erdős collision
// witnesses and the prime scans built from them.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "factmod/bigint.hpp"
#include "factmod/modarith.hpp"

namespace factmod {

/// Requested index window [H, H+N].
struct Window {
  u64 H = 0;
  u64 N = 0;
};

/// Indices actually used: [H, H+N] clipped to [2, p-1].
struct IndexRange {
  u64 lo = 0;
  u64 hi = 0;
  u64 count() const noexcept { return hi - lo + 1; }
  /// Window length in the sense "lo <= n <= lo + length".
  u64 length() const noexcept { return hi - lo; }
};

/// Throws std::domain_error when the clipped window is empty.
IndexRange effective_range(const PrimeCtx& ctx, const Window& w);

/// Indices m < n with m! == n! (mod p).
struct Collision {
  u64 m = 0;
  u64 n = 0;
  friend bool operator==(const Collision&, const Collision&) = default;
};

struct VStats {
  u64 p = 0;
  u64 V = 0;
  /// p - V; class 0 is never hit so this is at least 1.
  u64 missed = 0;
  std::optional<Collision> collision;
  Window window;
  IndexRange range;
  double ratio() const noexcept { return static_cast<double>(V) / static_cast<double>(p); }
};

/// V over the clipped window using a p-bit set. Does not look for collisions.
VStats v_count(const PrimeCtx& ctx, const Window& w);

/// Lexicographically first (m, n), 2 <= m < n <= p-1, with m! == n! (mod p).
/// Empty when 2!, ..., (p-1)! are pairwise distinct. Throws std::domain_error for p < 5.
std::optional<Collision> erdos_check(const PrimeCtx& ctx);

/// One row of a full-window factorial scan.
struct ScanRecord {
  u64 p = 0;
  u64 V = 0;
  u64 missed = 0;
  std::optional<Collision> collision;
  double ratio() const noexcept { return static_cast<double>(V) / static_cast<double>(p); }
  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

inline constexpr const char* kSchemaLine = "# schema=1";
inline constexpr const char* kScanCsvHeader = "p,V,missed,ratio,collision_m,collision_n";

std::string to_csv_row(const ScanRecord& r);
/// Throws std::invalid_argument on a malformed row.
ScanRecord parse_csv_row(const std::string& line);

/// Full-window V together with the lexicographically first collision, using a
/// first-occurrence table that is reused across primes. Requires p < 2^32.
class FactorialScanner {
 public:
  ScanRecord scan(const PrimeCtx& ctx);

 private:
  std::vector<u32> first_seen_;
};

/// V(0,p-1) >= sqrt(1.5 p), checked exactly as 2V^2 >= 3p.
bool chen_dai_holds(u64 V, u64 p) noexcept;

/// Running aggregate over scan records, in ascending prime order.
struct ScanSummary {
  u64 count = 0;
  u64 sum_missed = 0;
  u64 last_prime = 0;
  long double sum_ratio = 0;
  std::vector<u64> no_collision;
  std::vector<u64> chen_dai_violations;

  void add(const ScanRecord& r);
  double mean_ratio() const noexcept;
  Rational mean_missed() const;
};

// ---- budgets ---------------------------------------------------------------

inline constexpr double kDefaultBudget = 1e11;

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(double estimate, double limit);
  double estimate() const noexcept { return estimate_; }
  double limit() const noexcept { return limit_; }

 private:
  double estimate_;
  double limit_;
};

/// Approximate sum of the primes in [lo, hi], i.e. the modular
/// multiplications of a full-window factorial scan.
double estimate_prime_sum(u64 lo, u64 hi) noexcept;

/// Throws BudgetExceeded when estimate > limit and force is off.
void enforce_budget(double estimate, bool force, double limit = kDefaultBudget);

// ---- scans -----------------------------------------------------------------

struct ScanOptions {
  unsigned threads = 1;
  bool force = false;
  double budget = kDefaultBudget;
  /// Primes handed to the worker pool per round; results are emitted per round.
  std::size_t batch = 2048;
};

/// Scans every prime p in [max(lo, 5), hi] in ascending order and hands each
/// record to `emit` on the calling thread. `after` skips primes <= after (resume).
void factorial_scan(u64 lo, u64 hi, const ScanOptions& opts,
                    const std::function<void(const ScanRecord&)>& emit, u64 after = 0);

inline constexpr double kGuyLimit = 0.63212055882855767840;  // 1 - 1/e

struct GuyReport {
  std::vector<ScanRecord> records;
  ScanSummary summary;
  double mean_ratio = 0;
  double deviation = 0;  // mean_ratio - (1 - 1/e)
};

/// Records and mean V(0,p-1)/p over primes in [lo, hi]. Empty range gives an empty report.
GuyReport guy_ratio_scan(u64 lo, u64 hi, const ScanOptions& opts);

struct IntervalBound {
  u64 p = 0;
  IndexRange range;
  u64 V = 0;
  u64 N = 0;  // range.length()
  double bound = 0;          // sqrt(1.5 N)
  u64 bound_floor = 0;       // floor(sqrt(1.5 N))
  double trivial_bound = 0;  // sqrt(N - 1)
  bool pass = false;         // V >= sqrt(1.5 N)
  bool trivial_pass = false; // V >= sqrt(N - 1)
  bool in_regime = false;    // N >= ceil(p^exponent)
  u64 regime_threshold = 0;
};

IntervalBound short_interval_bound_check(const PrimeCtx& ctx, const Window& w,
                                         double exponent = 0.25);

struct MissedAverage {
  u64 x = 0;
  u64 primes = 0;
  u64 sum_missed = 0;
  Rational average;
  double loglog_shape = 0;  // log log x / log log log x
  double grh_shape = 0;     // x^{1/4} / log x
};

/// (1/#primes) * sum of p - V(0,p-1) over primes 5 <= p <= x. Throws std::domain_error for x < 5.
MissedAverage average_missed(u64 x, const ScanOptions& opts);
MissedAverage missed_average_from(u64 x, const ScanSummary& s);

}  // namespace factmod
