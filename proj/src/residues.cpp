#include "factmod/residues.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "factmod/parallel.hpp"

namespace factmod {

namespace {

u64 isqrt(u64 n) noexcept {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 parse_u64(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty numeric field");
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
  return v;
}

}  // namespace

IndexRange effective_range(const PrimeCtx& ctx, const Window& w) {
  const u64 top = ctx.p() - 1;
  const u64 end = (w.N > std::numeric_limits<u64>::max() - w.H) ? std::numeric_limits<u64>::max()
                                                                 : w.H + w.N;
  IndexRange r{std::max<u64>(w.H, 2), std::min(end, top)};
  if (r.lo > r.hi) {
    throw std::domain_error("window [" + std::to_string(w.H) + ", H+" + std::to_string(w.N) +
                            "] does not meet [2, p-1] for p = " + std::to_string(ctx.p()));
  }
  return r;
}

VStats v_count(const PrimeCtx& ctx, const Window& w) {
  const IndexRange range = effective_range(ctx, w);
  std::vector<u64> bits((ctx.p() + 63) / 64, 0);
  FactorialStream s(ctx, range.lo);
  u64 V = 0;
  for (;;) {
    const u64 v = s.value();
    u64& word = bits[v >> 6];
    const u64 mask = u64{1} << (v & 63);
    if (!(word & mask)) {
      word |= mask;
      ++V;
    }
    if (s.index() == range.hi) break;
    s.advance();
  }
  VStats out;
  out.p = ctx.p();
  out.V = V;
  out.missed = ctx.p() - V;
  out.window = w;
  out.range = range;
  return out;
}

ScanRecord FactorialScanner::scan(const PrimeCtx& ctx) {
  const u64 p = ctx.p();
  if (p >= (u64{1} << 32)) {
    throw std::domain_error("FactorialScanner: p must be below 2^32");
  }
  first_seen_.assign(p, 0);
  u32* seen = first_seen_.data();
  u64 v = 1;
  u64 V = 0;
  u32 best_m = std::numeric_limits<u32>::max();
  u32 best_n = 0;
  const u32 top = static_cast<u32>(p - 1);
  for (u32 n = 2; n <= top; ++n) {
    v = ctx.mul(v, n);
    u32& slot = seen[v];
    if (slot == 0) {
      slot = n;
      ++V;
    } else if (slot < best_m) {
      // Once best_m <= m, later repeats of m can no longer improve it, so the
      // first time this branch sees m it is m's earliest repeat.
      best_m = slot;
      best_n = n;
    }
  }
  ScanRecord r;
  r.p = p;
  r.V = V;
  r.missed = p - V;
  if (best_n != 0) r.collision = Collision{best_m, best_n};
  return r;
}

std::optional<Collision> erdos_check(const PrimeCtx& ctx) {
  if (ctx.p() < 5) throw std::domain_error("erdos_check: requires p >= 5");
  FactorialScanner scanner;
  return scanner.scan(ctx).collision;
}

std::string to_csv_row(const ScanRecord& r) {
  char ratio[32];
  std::snprintf(ratio, sizeof ratio, "%.9f", r.ratio());
  std::string row = std::to_string(r.p) + ',' + std::to_string(r.V) + ',' + std::to_string(r.missed) +
                    ',' + ratio + ',';
  if (r.collision) {
    row += std::to_string(r.collision->m) + ',' + std::to_string(r.collision->n);
  } else {
    row += ',';
  }
  return row;
}

ScanRecord parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  if (fields.size() != 6) throw std::invalid_argument("scan row must have 6 fields: " + line);
  ScanRecord r;
  r.p = parse_u64(fields[0]);
  r.V = parse_u64(fields[1]);
  r.missed = parse_u64(fields[2]);
  if (fields[4].empty() != fields[5].empty()) {
    throw std::invalid_argument("collision fields must both be set or both empty: " + line);
  }
  if (!fields[4].empty()) r.collision = Collision{parse_u64(fields[4]), parse_u64(fields[5])};
  if (r.V + r.missed != r.p) throw std::invalid_argument("V + missed != p: " + line);
  return r;
}

bool chen_dai_holds(u64 V, u64 p) noexcept {
  return 2 * static_cast<u128>(V) * V >= 3 * static_cast<u128>(p);
}

void ScanSummary::add(const ScanRecord& r) {
  ++count;
  sum_missed += r.missed;
  last_prime = r.p;
  sum_ratio += static_cast<long double>(r.V) / static_cast<long double>(r.p);
  if (!r.collision) no_collision.push_back(r.p);
  if (!chen_dai_holds(r.V, r.p)) chen_dai_violations.push_back(r.p);
}

double ScanSummary::mean_ratio() const noexcept {
  return count == 0 ? 0.0 : static_cast<double>(sum_ratio / static_cast<long double>(count));
}

Rational ScanSummary::mean_missed() const {
  if (count == 0) throw std::domain_error("mean over an empty prime range");
  return Rational(BigInt(sum_missed), BigInt(count));
}

BudgetExceeded::BudgetExceeded(double estimate, double limit)
    : std::runtime_error("estimated cost " + std::to_string(estimate) +
                         " modular multiplications exceeds the budget of " +
                         std::to_string(limit) + "; rerun with --force to proceed"),
      estimate_(estimate),
      limit_(limit) {}

double estimate_prime_sum(u64 lo, u64 hi) noexcept {
  if (hi < 3 || lo > hi) return 0;
  auto F = [](double x) { return x < 3 ? 0.0 : x * x / (2.0 * std::log(x)); };
  return std::max(0.0, F(static_cast<double>(hi)) - F(static_cast<double>(lo)));
}

void enforce_budget(double estimate, bool force, double limit) {
  if (estimate > limit && !force) throw BudgetExceeded(estimate, limit);
}

void factorial_scan(u64 lo, u64 hi, const ScanOptions& opts,
                    const std::function<void(const ScanRecord&)>& emit, u64 after) {
  u64 start = std::max<u64>(lo, 5);
  if (after >= start) start = after + 1;
  if (start > hi) return;
  if (hi >= (u64{1} << 32)) throw std::domain_error("factorial_scan: hi must be below 2^32");
  enforce_budget(estimate_prime_sum(start, hi), opts.force, opts.budget);

  const std::size_t batch = std::max<std::size_t>(1, opts.batch);
  std::vector<u64> chunk;
  auto flush = [&] {
    auto records = ordered_parallel_map(
        chunk, opts.threads, [] { return FactorialScanner{}; },
        [](FactorialScanner& s, u64 p) { return s.scan(PrimeCtx(p)); });
    for (const auto& r : records) emit(r);
    chunk.clear();
  };
  for_each_prime_segment(start, hi, [&](const std::vector<u64>& seg) {
    for (u64 p : seg) {
      chunk.push_back(p);
      if (chunk.size() == batch) flush();
    }
  });
  if (!chunk.empty()) flush();
}

GuyReport guy_ratio_scan(u64 lo, u64 hi, const ScanOptions& opts) {
  GuyReport rep;
  if (lo > hi) return rep;
  factorial_scan(lo, hi, opts, [&](const ScanRecord& r) {
    rep.records.push_back(r);
    rep.summary.add(r);
  });
  rep.mean_ratio = rep.summary.mean_ratio();
  rep.deviation = rep.summary.count ? rep.mean_ratio - kGuyLimit : 0.0;
  return rep;
}

IntervalBound short_interval_bound_check(const PrimeCtx& ctx, const Window& w, double exponent) {
  const VStats vs = v_count(ctx, w);
  IntervalBound b;
  b.p = ctx.p();
  b.range = vs.range;
  b.V = vs.V;
  b.N = vs.range.length();
  b.bound = std::sqrt(1.5 * static_cast<double>(b.N));
  b.bound_floor = isqrt(3 * b.N / 2);
  b.trivial_bound = b.N >= 1 ? std::sqrt(static_cast<double>(b.N - 1)) : 0.0;
  b.pass = 2 * static_cast<u128>(b.V) * b.V >= 3 * static_cast<u128>(b.N);
  b.trivial_pass = b.N == 0 || static_cast<u128>(b.V) * b.V >= b.N - 1;
  u64 t = static_cast<u64>(std::ceil(std::pow(static_cast<double>(ctx.p()), exponent) - 1e-9));
  b.regime_threshold = std::max<u64>(t, 1);
  b.in_regime = b.N >= b.regime_threshold;
  return b;
}

MissedAverage missed_average_from(u64 x, const ScanSummary& s) {
  MissedAverage m;
  m.x = x;
  m.primes = s.count;
  m.sum_missed = s.sum_missed;
  m.average = s.mean_missed();
  const double lx = std::log(static_cast<double>(x));
  const double llx = std::log(lx);
  m.loglog_shape = llx / std::log(llx);
  m.grh_shape = std::pow(static_cast<double>(x), 0.25) / lx;
  return m;
}

MissedAverage average_missed(u64 x, const ScanOptions& opts) {
  if (x < 5) throw std::domain_error("average_missed: requires x >= 5");
  ScanSummary s;
  factorial_scan(5, x, opts, [&](const ScanRecord& r) { s.add(r); });
  return missed_average_from(x, s);
}

}  // namespace factmod
