#include "app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "factmod/checkpoint.hpp"
#include "factmod/families.hpp"
#include "factmod/lemmas.hpp"
#include "factmod/parallel.hpp"
#include "factmod/permgroup.hpp"
#include "factmod/polyz.hpp"
#include "factmod/residues.hpp"

namespace factmod::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct RunConfig {
  std::string subcommand;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::string output;
  std::string checkpoint;
  std::string format = "csv";
  bool force = false;
  u64 halt_after = 0;  // test hook: stop a scan after this many new records
  std::ostream* err = nullptr;
};

struct Params {
  u64 x = 0, lo = 0, hi = 0, p = 0, H = 0, N = 0, b = 0, c = 0;
  u64 trials = 0, count = 0, draws = 0;
  int n = 0, n1 = 0, n2 = 0, nmax = 0;
  unsigned density_N = 0, measure_upto = 8, sym_n = 0, degree = 0;
  bool random = false;
  std::string set, poly, generators;
  double exponent = 0.25;
  u64 set_H = 0, set_N = 0;
  u64 nmin_len = 50, nmax_len = 2000;
};

std::string sci(double log10_value) {
  if (!std::isfinite(log10_value)) return "0";
  const double e = std::floor(log10_value);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6fe%+.0f", std::pow(10.0, log10_value - e), e);
  return buf;
}

ScanOptions scan_options(const RunConfig& cfg) {
  ScanOptions o;
  o.threads = cfg.threads;
  o.force = cfg.force;
  return o;
}

void emit_json(const RunConfig& cfg, const json& j, std::ostream& out) {
  if (!cfg.output.empty() && cfg.format == "json") {
    std::ofstream f(cfg.output, std::ios::trunc);
    f << j.dump(2) << '\n';
  }
  out << j.dump(2) << '\n';
}

json record_json(const ScanRecord& r) {
  json j{{"p", r.p}, {"V", r.V}, {"missed", r.missed}, {"ratio", r.ratio()}};
  if (r.collision) {
    j["collision_m"] = r.collision->m;
    j["collision_n"] = r.collision->n;
  } else {
    j["collision_m"] = nullptr;
    j["collision_n"] = nullptr;
  }
  return j;
}

// Runs a full-window factorial scan over [lo, hi], streaming records to
// cfg.output (CSV, with checkpoint/resume) or collecting them for a JSON report.
// Returns the summary; `halted` is set when the test hook stopped the run early.
ScanSummary run_factorial_scan(const RunConfig& cfg, const std::string& id, u64 lo, u64 hi,
                               bool& halted, const std::function<void(const ScanRecord&)>& extra) {
  const auto started = std::chrono::steady_clock::now();
  ScanSummary summary;
  halted = false;
  u64 after = 0;
  std::ofstream csv;
  std::vector<ScanRecord> collected;
  const bool to_csv = !cfg.output.empty() && cfg.format == "csv";
  const bool to_json = !cfg.output.empty() && cfg.format == "json";

  if (!cfg.checkpoint.empty()) {
    if (!to_csv) throw std::invalid_argument("--checkpoint requires --output with --format csv");
    if (auto cp = read_checkpoint(cfg.checkpoint)) {
      summary = restore_scan_csv(cfg.output, *cp);
      after = cp->last_prime;
    }
  }
  if (to_csv) {
    if (after == 0 && summary.count == 0) {
      csv.open(cfg.output, std::ios::trunc);
      csv << kSchemaLine << '\n' << kScanCsvHeader << '\n';
    } else {
      csv.open(cfg.output, std::ios::app);
    }
    if (!csv) throw std::runtime_error("cannot open " + cfg.output);
  }

  // Replays restored rows through the extra hook so summaries match a fresh run.
  if (extra && summary.count > 0) {
    std::ifstream in(cfg.output);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line == kScanCsvHeader) continue;
      extra(parse_csv_row(line));
    }
  }

  u64 fresh = 0;
  constexpr u64 kCheckpointEvery = 1024;
  struct Halt {};
  try {
    factorial_scan(
        lo, hi, scan_options(cfg),
        [&](const ScanRecord& r) {
          summary.add(r);
          if (extra) extra(r);
          if (to_csv) csv << to_csv_row(r) << '\n';
          if (to_json) collected.push_back(r);
          ++fresh;
          if (to_csv && !cfg.checkpoint.empty() && fresh % kCheckpointEvery == 0) {
            csv.flush();
            write_checkpoint(cfg.checkpoint, checkpoint_of(summary));
          }
          if (cfg.halt_after && fresh >= cfg.halt_after) throw Halt{};
        },
        after);
  } catch (const Halt&) {
    halted = true;
  }
  if (to_csv) {
    csv.flush();
    if (!cfg.checkpoint.empty()) write_checkpoint(cfg.checkpoint, checkpoint_of(summary));
  }
  if (to_json) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json rep{{"schema", 1}, {"x", hi}, {"lo", lo}, {"wall_time_seconds", wall},
             {"checkpoint_id", id}, {"records", json::array()}};
    for (const auto& r : collected) rep["records"].push_back(record_json(r));
    std::ofstream f(cfg.output, std::ios::trunc);
    f << rep.dump(2) << '\n';
  }
  return summary;
}

int cmd_erdos_scan(const RunConfig& cfg, const Params& a, std::ostream& out) {
  bool halted = false;
  const auto s = run_factorial_scan(cfg, "erdos-scan:" + std::to_string(a.x), 5, a.x, halted, {});
  json j{{"subcommand", "erdos-scan"}, {"x", a.x}, {"primes", s.count}, {"halted", halted},
         {"without_collision", s.no_collision}};
  std::vector<u64> beyond;
  for (u64 p : s.no_collision) {
    if (p >= 7) beyond.push_back(p);
  }
  j["without_collision_from_7"] = beyond;
  for (u64 p : beyond) *cfg.err << "finding: 2!, ..., (p-1)! are pairwise distinct mod p = " << p << '\n';
  j["fraction_without_collision"] =
      s.count ? json(to_fraction(Rational(BigInt(s.no_collision.size()), BigInt(s.count))))
              : json(nullptr);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_v_stats(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const PrimeCtx ctx(a.p);
  const VStats v = v_count(ctx, Window{a.H, a.N});
  json j{{"p", v.p}, {"H", a.H}, {"N", a.N}, {"lo", v.range.lo}, {"hi", v.range.hi},
         {"indices", v.range.count()}, {"V", v.V}, {"missed", v.missed}, {"ratio", v.ratio()}};
  emit_json(cfg, j, out);
  return kExitOk;
}

int cmd_guy_scan(const RunConfig& cfg, const Params& a, std::ostream& out) {
  bool halted = false;
  const auto s = run_factorial_scan(
      cfg, "guy-scan:" + std::to_string(a.lo) + "-" + std::to_string(a.hi), a.lo, a.hi, halted, {});
  json j{{"subcommand", "guy-scan"}, {"lo", a.lo}, {"hi", a.hi}, {"primes", s.count},
         {"halted", halted}};
  if (s.count) {
    j["mean_ratio"] = s.mean_ratio();
    j["limit"] = kGuyLimit;
    j["deviation"] = s.mean_ratio() - kGuyLimit;
  } else {
    j["mean_ratio"] = nullptr;
  }
  j["chen_dai_violations"] = s.chen_dai_violations;
  for (u64 p : s.chen_dai_violations) *cfg.err << "finding: V(0,p-1) < sqrt(1.5 p) at p = " << p << '\n';
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_missed_avg(const RunConfig& cfg, const Params& a, std::ostream& out) {
  if (a.x < 5) throw std::domain_error("missed-avg: --x must be >= 5");
  std::vector<FamilyPoly> family;
  for (int k = 1; k <= a.nmax; ++k) family.emplace_back(2 * k + 1);
  u64 checked = 0;
  json violations = json::array();
  auto inequality = [&](const ScanRecord& r) {
    if (a.nmax == 0 || static_cast<u64>(2 * a.nmax + 1) > r.p - 2) return;
    const PrimeCtx ctx(r.p);
    u64 sum = 0;
    for (const auto& f : family) sum += static_cast<u64>(distinct_root_count(f.reduce(ctx)));
    ++checked;
    if (r.missed < sum) violations.push_back({{"p", r.p}, {"missed", r.missed}, {"rho_sum", sum}});
  };
  bool halted = false;
  const auto s =
      run_factorial_scan(cfg, "missed-avg:" + std::to_string(a.x), 5, a.x, halted, inequality);
  const MissedAverage m = missed_average_from(a.x, s);
  json j{{"subcommand", "missed-avg"},
         {"x", a.x},
         {"primes", m.primes},
         {"halted", halted},
         {"sum_missed", m.sum_missed},
         {"average", to_fraction(m.average)},
         {"average_decimal", to_decimal(m.average, 9)},
         {"loglog_shape", m.loglog_shape},
         {"grh_shape", m.grh_shape},
         {"nmax", a.nmax},
         {"inequality_checked", checked},
         {"inequality_violations", violations}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_rho(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const PrimeCtx ctx(a.p);
  const RhoResult r = rho(FamilyPoly(a.n), ctx);
  json j{{"n", r.n}, {"p", r.p}, {"count", r.count}};
  j["roots"] = r.roots ? json(*r.roots) : json(nullptr);
  j["checked_roots"] = r.checked_roots;
  j["boundary_roots"] = r.boundary_roots;
  j["verified"] = r.verified;
  emit_json(cfg, j, out);
  return r.verified ? kExitOk : kExitFinding;
}

int cmd_rho_scan(const RunConfig& cfg, const Params& a, std::ostream& out) {
  std::ofstream csv;
  if (!cfg.output.empty() && cfg.format == "csv") {
    csv.open(cfg.output, std::ios::trunc);
    csv << kSchemaLine << '\n' << kRhoCsvHeader << '\n';
  }
  const auto rep = rho_mean_scan(a.n, a.x, scan_options(cfg), [&](const RhoRow& row) {
    if (csv.is_open()) csv << to_csv_row(row) << '\n';
  });
  json hist = json::object();
  for (const auto& [k, c] : rep.histogram) hist[std::to_string(k)] = c;
  json j{{"subcommand", "rho-scan"},
         {"n", rep.n},
         {"x", rep.x},
         {"primes", rep.primes},
         {"sum_rho", rep.sum_rho},
         {"mean", to_fraction(rep.mean)},
         {"mean_decimal", to_decimal(rep.mean, 9)},
         {"deviation", rep.deviation},
         {"statistical_tolerance", 5.0 / std::sqrt(static_cast<double>(rep.primes))},
         {"histogram", hist}};
  if (!cfg.output.empty() && cfg.format == "json") {
    std::ofstream f(cfg.output, std::ios::trunc);
    f << j.dump(2) << '\n';
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_interval_bound(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const PrimeCtx ctx(a.p);
  const auto b = short_interval_bound_check(ctx, Window{a.H, a.N}, a.exponent);
  json j{{"p", b.p}, {"H", a.H}, {"N", a.N}, {"lo", b.range.lo}, {"hi", b.range.hi},
         {"N_effective", b.N}, {"V", b.V}, {"bound", b.bound}, {"bound_floor", b.bound_floor},
         {"trivial_bound", b.trivial_bound}, {"pass", b.pass}, {"trivial_pass", b.trivial_pass},
         {"in_regime", b.in_regime}, {"regime_threshold", b.regime_threshold},
         {"exponent", a.exponent}};
  emit_json(cfg, j, out);
  return kExitOk;
}

int cmd_burgess(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const PrimeCtx ctx(a.p);
  const Quadratic q{a.b, a.c};
  const auto r = burgess_count(ctx, q, a.H, a.N);
  json observed{{"count", r.count}, {"deviation", r.deviation}};
  if (a.p <= kBruteRootGuard) observed["image_oracle"] = quadratic_image_count_brute(ctx, q, a.H, a.N);
  json j{{"lemma", "quadratic-image-count"},
         {"params", {{"p", a.p}, {"b", a.b}, {"c", a.c}, {"H", a.H}, {"N", a.N}}},
         {"observed", observed},
         {"bound", {{"half_N", static_cast<double>(a.N) / 2.0}, {"envelope", r.envelope}}},
         {"pass", r.within_envelope}};
  emit_json(cfg, j, out);
  if (observed.contains("image_oracle") && observed["image_oracle"].get<u64>() != r.count) {
    return kExitFinding;
  }
  return kExitOk;
}

json shift_json(const ShiftWitness& w, u64 H, u64 N, std::size_t size) {
  return json{{"lemma", "shift"},
              {"params", {{"H", H}, {"N", N}, {"set_size", size}}},
              {"observed", {{"d", w.d}, {"pair_count", w.pair_count}, {"alpha", w.alpha}}},
              {"bound", {{"guarantee", w.guarantee}, {"max_shift", w.max_shift}}},
              {"vacuous", w.vacuous},
              {"pass", w.holds}};
}

int cmd_sieve_lemma(const RunConfig& cfg, const Params& a, std::ostream& out) {
  if (a.random == !a.set.empty()) {
    throw std::invalid_argument("sieve-lemma: give exactly one of --random or --set");
  }
  if (!a.set.empty()) {
    std::vector<u64> S;
    std::size_t start = 0;
    for (;;) {
      const auto comma = a.set.find(',', start);
      const std::string tok = a.set.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
      std::size_t pos = 0;
      S.push_back(std::stoull(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("sieve-lemma: bad set element '" + tok + "'");
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const u64 H = a.set_H;
    const u64 N = a.set_N ? a.set_N : 0;
    if (N == 0) throw std::invalid_argument("sieve-lemma: --N is required with --set");
    const auto w = sieve_shift_find(S, H, N);
    emit_json(cfg, shift_json(w, H, N, S.size()), out);
    return w.holds ? kExitOk : kExitFinding;
  }
  if (a.nmin_len < 1 || a.nmin_len > a.nmax_len) {
    throw std::invalid_argument("sieve-lemma: need 1 <= --min-length <= --max-length");
  }
  std::mt19937_64 rng(cfg.seed);
  u64 violations = 0, vacuous = 0;
  double min_slack = INFINITY;
  json failures = json::array();
  for (u64 t = 0; t < a.count; ++t) {
    const u64 N = a.nmin_len + rng() % (a.nmax_len - a.nmin_len + 1);
    const double alpha = 0.1 + 0.8 * static_cast<double>(rng() >> 11) / 9007199254740992.0;
    const u64 size = std::max<u64>(1, static_cast<u64>(std::llround(alpha * static_cast<double>(N))));
    std::vector<u64> pool(N + 1);
    for (u64 i = 0; i <= N; ++i) pool[i] = i;
    for (u64 i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng() % (N + 1 - i)]);
    pool.resize(size);
    const auto w = sieve_shift_find(pool, 0, N);
    vacuous += w.vacuous;
    if (!w.vacuous) min_slack = std::min(min_slack, static_cast<double>(w.pair_count) / w.guarantee);
    if (!w.holds) {
      ++violations;
      failures.push_back(shift_json(w, 0, N, size));
    }
  }
  json j{{"lemma", "shift"},
         {"params", {{"count", a.count}, {"seed", cfg.seed}, {"min_length", a.nmin_len},
                     {"max_length", a.nmax_len}}},
         {"observed", {{"violations", violations}, {"vacuous", vacuous},
                       {"min_ratio_to_guarantee", std::isfinite(min_slack) ? json(min_slack) : json(nullptr)}}},
         {"bound", "pair_count >= alpha^3 N / 2 with d <= ceil(1/alpha)"},
         {"pass", violations == 0},
         {"failures", failures}};
  emit_json(cfg, j, out);
  return violations == 0 ? kExitOk : kExitFinding;
}

int cmd_lemma3(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const PrimeCtx ctx(a.p);
  if (a.poly.empty() == (a.draws == 0)) {
    throw std::invalid_argument("lemma3: give exactly one of --poly or --draws");
  }
  if (!a.poly.empty()) {
    const PolyFp P = parse_poly_fp(ctx, a.poly);
    const auto r = lemma3_count(ctx, P, a.H, a.N);
    json j{{"lemma", "factorial-square"},
           {"params", {{"p", a.p}, {"poly", to_string(P)}, {"H", a.H}, {"N", a.N}}},
           {"observed", {{"solutions", r.solutions}, {"count", r.solutions.size()},
                         {"ratio", r.ratio}, {"pairs_checked", r.pairs_checked}}},
           {"bound", {{"N_pow_3_4", std::pow(static_cast<double>(std::max<u64>(r.range.length(), 1)), 0.75)}}},
           {"pass", r.derived_congruence_ok}};
    emit_json(cfg, j, out);
    return r.derived_congruence_ok ? kExitOk : kExitFinding;
  }
  if (a.N + 3 > a.p) throw std::invalid_argument("lemma3: --N must leave room inside [2, p-1]");
  std::mt19937_64 rng(cfg.seed);
  double max_ratio = 0;
  u64 max_solutions = 0;
  bool derived_ok = true;
  for (u64 t = 0; t < a.draws; ++t) {
    const PolyFp P(ctx, {rng() % a.p, rng() % a.p, 1});
    const u64 H = 2 + rng() % (a.p - 2 - a.N);
    const auto r = lemma3_count(ctx, P, H, a.N);
    max_ratio = std::max(max_ratio, r.ratio);
    max_solutions = std::max<u64>(max_solutions, r.solutions.size());
    derived_ok = derived_ok && r.derived_congruence_ok;
  }
  json j{{"lemma", "factorial-square"},
         {"params", {{"p", a.p}, {"N", a.N}, {"draws", a.draws}, {"seed", cfg.seed}}},
         {"observed", {{"max_solutions", max_solutions}, {"max_ratio", max_ratio}}},
         {"bound", {{"envelope", 5.0}}},
         {"pass", derived_ok}};
  emit_json(cfg, j, out);
  return derived_ok ? kExitOk : kExitFinding;
}

int cmd_coloring(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const PrimeCtx ctx(a.p);
  const auto r = coloring_pairs(ctx, a.H, a.N);
  json j{{"lemma", "coloring"},
         {"params", {{"p", a.p}, {"H", a.H}, {"N", a.N}, {"lo", r.range.lo}, {"hi", r.range.hi}}},
         {"observed",
          {{"colors", r.colors},
           {"degenerate", r.degenerate},
           {"consecutive_pairs", r.consecutive_pairs},
           {"consecutive_repeats", r.consecutive_repeats},
           {"gap2_coincidences", r.gap2_coincidences},
           {"gap2_relation_failures", r.gap2_relation_failures},
           {"wilson_checked", r.wilson_checked},
           {"wilson_failures", r.wilson_failures},
           {"cross_coincidences", r.cross_coincidences},
           {"cross_relation_failures", r.cross_relation_failures},
           {"distinct_patterns", r.distinct_patterns},
           {"observed_constant", r.observed_constant}}},
         {"bound", {{"target_1_5N", r.target}, {"k_squared", r.colors * r.colors}}},
         {"pass", r.all_pass()}};
  emit_json(cfg, j, out);
  return r.all_pass() ? kExitOk : kExitFinding;
}

int cmd_disc(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const auto d = disc_family(a.n);
  json j{{"n", d.n},
         {"disc", d.disc.str()},
         {"squarefree_part", d.squarefree.value.str()},
         {"partial", d.squarefree.partial}};
  if (d.n >= 2) {
    j["bound_ratio"] = sci(d.log10_bound_ratio);
    j["bound_log10_ratio"] = d.log10_bound_ratio;
    j["bound_ok"] = d.bound_ok;
  } else {
    j["bound_ratio"] = nullptr;
  }
  emit_json(cfg, j, out);
  return kExitOk;
}

int cmd_disjointness(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const auto r = splitting_disjointness_proxy(a.n1, a.n2, a.x, scan_options(cfg));
  json j{{"n1", r.n1},
         {"n2", r.n2},
         {"x", r.x},
         {"squarefree_part_1", r.sqf1.value.str()},
         {"squarefree_part_2", r.sqf2.value.str()},
         {"quadratic_comparison_conclusive", r.quadratic_comparison_conclusive},
         {"quadratic_subfields_differ", r.quadratic_subfields_differ},
         {"primes", r.primes},
         {"freq1", r.freq1},
         {"freq2", r.freq2},
         {"joint", r.joint},
         {"product", r.product},
         {"std_error", r.std_error},
         {"z_score", r.z_score}};
  emit_json(cfg, j, out);
  return kExitOk;
}

int cmd_permsim(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const auto r = partial_products_distinct(a.p, a.trials, cfg.seed, cfg.threads);
  json trials = json::array();
  for (const auto& t : r.trials) trials.push_back({{"seed", t.seed}, {"distinct", t.distinct}});
  json j{{"p", r.p}, {"master_seed", r.master_seed}, {"trials", trials}, {"mean", r.mean},
         {"mean_over_p", r.mean_over_p}, {"limit", kGuyLimit}, {"deviation", r.deviation}};
  emit_json(cfg, j, out);
  return kExitOk;
}

int cmd_burnside(const RunConfig& cfg, const Params& a, std::ostream& out) {
  if ((a.sym_n == 0) == a.generators.empty()) {
    throw std::invalid_argument("burnside: give exactly one of --generators or --sym-n");
  }
  std::optional<PermGroup> G;
  if (a.sym_n) {
    G.emplace(PermGroup::symmetric(a.sym_n));
  } else {
    const auto gens = parse_generators(a.generators, a.degree);
    G.emplace(gens.front().size(), gens);
  }
  const auto f = fixed_point_free_proportion(*G);
  json j{{"degree", f.degree},
         {"order", f.order.str()},
         {"derangements", f.derangements.str()},
         {"sigma", to_fraction(f.sigma)},
         {"sigma_decimal", to_decimal(f.sigma, 9)},
         {"upper_bound_ok", f.upper_bound_ok},
         {"printed_lower_bound_holds", f.printed_lower_bound_holds},
         {"orbits", f.orbits},
         {"average_fixed_points", to_fraction(f.average_fixed_points)},
         {"burnside_identity_ok", f.burnside_identity_ok}};
  emit_json(cfg, j, out);
  return (f.upper_bound_ok && f.burnside_identity_ok) ? kExitOk : kExitFinding;
}

int cmd_density(const RunConfig& cfg, const Params& a, std::ostream& out) {
  const auto d = failing_density_estimate(a.density_N, a.measure_upto);
  json sigmas = json::array();
  for (const auto& s : d.sigmas) sigmas.push_back(to_fraction(s));
  json j{{"N", d.N},
         {"product", to_fraction(d.product)},
         {"product_decimal", to_decimal(d.product, 9)},
         {"chain", to_fraction(d.chain)},
         {"chain_decimal", to_decimal(d.chain, 9)},
         {"measured_upto", d.measured_upto},
         {"sigmas", sigmas}};
  emit_json(cfg, j, out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.threads = default_threads();
  cfg.err = &err;
  Params a;

  CLI::App app{"Factorials modulo p: residue counts, collisions, root counts and lemma checks",
               "factmod"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", cfg.threads, "worker threads (default: FACTMOD_THREADS or all cores)")
      ->check(CLI::Range(1u, 4096u));
  app.add_option("--seed", cfg.seed, "master RNG seed (default 1)");
  app.add_option("--output", cfg.output, "report file (records for scans)");
  app.add_option("--checkpoint", cfg.checkpoint, "checkpoint file for resumable scans");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--force", cfg.force, "run even when the cost estimate exceeds the budget");
  app.add_option("--halt-after", cfg.halt_after)->group("");

  using Handler = std::function<int(const RunConfig&, const Params&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto sub = [&](const char* name, const char* desc, Handler h) {
    CLI::App* s = app.add_subcommand(name, desc);
    commands.emplace_back(s, std::move(h));
    return s;
  };
  const auto pos = CLI::PositiveNumber;

  auto* erdos = sub("erdos-scan", "first factorial collision for every prime 5 <= p <= x", cmd_erdos_scan);
  erdos->add_option("--x", a.x)->required()->check(CLI::Range(u64{5}, (u64{1} << 32) - 1));

  auto* vs = sub("v-stats", "V(H,N) for one prime", cmd_v_stats);
  vs->add_option("--p", a.p)->required()->check(CLI::Range(u64{3}, ~u64{0}));
  vs->add_option("--H", a.H)->required();
  vs->add_option("--N", a.N)->required();

  auto* guy = sub("guy-scan", "mean V(0,p-1)/p over primes in [lo, hi]", cmd_guy_scan);
  guy->add_option("--lo", a.lo)->required();
  guy->add_option("--hi", a.hi)->required()->check(CLI::Range(u64{0}, (u64{1} << 32) - 1));

  auto* ma = sub("missed-avg", "average of p - V(0,p-1) over primes 5 <= p <= x", cmd_missed_avg);
  ma->add_option("--x", a.x)->required()->check(CLI::Range(u64{5}, (u64{1} << 32) - 1));
  ma->add_option("--nmax", a.nmax, "odd family indices 3..2*nmax+1 for the per-prime inequality")
      ->check(CLI::Range(0, 10));

  auto* rh = sub("rho", "roots of f_n mod p", cmd_rho);
  rh->add_option("--n", a.n)->required()->check(CLI::Range(1, kMaxFamilyIndex));
  rh->add_option("--p", a.p)->required()->check(CLI::Range(u64{3}, ~u64{0}));

  auto* rs = sub("rho-scan", "mean rho_n(p) over odd primes p <= x", cmd_rho_scan);
  rs->add_option("--n", a.n)->required()->check(CLI::Range(1, kMaxFamilyIndex));
  rs->add_option("--x", a.x)->required()->check(CLI::Range(u64{3}, ~u64{0}));

  auto* ib = sub("interval-bound", "V(H,N) against sqrt(1.5 N)", cmd_interval_bound);
  ib->add_option("--p", a.p)->required()->check(CLI::Range(u64{3}, ~u64{0}));
  ib->add_option("--H", a.H)->required();
  ib->add_option("--N", a.N)->required();
  ib->add_option("--exponent", a.exponent, "regime exponent: N >= p^exponent")->check(CLI::Range(0.0, 1.0));

  auto* bg = sub("burgess", "values of x^2+bx+c in [H, H+N]", cmd_burgess);
  bg->add_option("--p", a.p)->required()->check(CLI::Range(u64{3}, ~u64{0}));
  bg->add_option("--b", a.b)->required();
  bg->add_option("--c", a.c)->required();
  bg->add_option("--H", a.H)->required();
  bg->add_option("--N", a.N)->required();

  auto* sl = sub("sieve-lemma", "shift witness d with many differences a - b = d", cmd_sieve_lemma);
  sl->add_flag("--random", a.random, "random sets");
  sl->add_option("--count", a.count, "number of random sets")->check(pos);
  sl->add_option("--min-length", a.nmin_len)->check(pos);
  sl->add_option("--max-length", a.nmax_len)->check(pos);
  sl->add_option("--set", a.set, "comma-separated elements");
  sl->add_option("--H", a.set_H);
  sl->add_option("--N", a.set_N)->check(pos);

  auto* l3 = sub("lemma3", "solutions of (n!)^2 == P(n) mod p", cmd_lemma3);
  l3->add_option("--p", a.p)->required()->check(CLI::Range(u64{5}, ~u64{0}));
  l3->add_option("--poly", a.poly, "coefficients c0,c1,...,cd");
  l3->add_option("--H", a.H);
  l3->add_option("--N", a.N)->required();
  l3->add_option("--draws", a.draws, "random monic quadratics")->check(pos);

  auto* co = sub("coloring", "pair colouring checks", cmd_coloring);
  co->add_option("--p", a.p)->required()->check(CLI::Range(u64{5}, (u64{1} << 32) - 1));
  co->add_option("--H", a.H)->required();
  co->add_option("--N", a.N)->required();

  auto* di = sub("disc", "discriminant of f_n", cmd_disc);
  di->add_option("--n", a.n)->required()->check(CLI::Range(1, kDiscMaxN));

  auto* dj = sub("disjointness", "quadratic-subfield and independence proxies", cmd_disjointness);
  dj->add_option("--n1", a.n1)->required()->check(CLI::Range(1, 12));
  dj->add_option("--n2", a.n2)->required()->check(CLI::Range(1, 12));
  dj->add_option("--x", a.x)->required()->check(CLI::Range(u64{3}, ~u64{0}));

  auto* ps = sub("permsim", "partial products of random permutations", cmd_permsim);
  ps->add_option("--p", a.p)->required()->check(CLI::Range(u64{5}, (u64{1} << 32) - 1));
  ps->add_option("--trials", a.trials)->required()->check(pos);

  auto* bu = sub("burnside", "fixed-point-free proportion of a permutation group", cmd_burnside);
  bu->add_option("--generators", a.generators, "cycles such as (1 2 3),(1 2)");
  bu->add_option("--degree", a.degree, "number of points (default: largest mentioned)");
  bu->add_option("--sym-n", a.sym_n, "use the symmetric group S_n")->check(CLI::Range(1u, 9u));

  auto* de = sub("density", "prod (1 - 1/n) and the failing-prime chain", cmd_density);
  de->add_option("--N", a.density_N)->required()->check(CLI::Range(2u, 100000u));
  de->add_option("--measure-upto", a.measure_upto, "use exact sigma(S_n) up to this n")
      ->check(CLI::Range(0u, 9u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (!cfg.output.empty()) {
    const auto parent = fs::path(cfg.output).parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) {
      err << "output directory does not exist: " << parent << '\n';
      return kExitUsage;
    }
  }

  try {
    for (auto& [s, handler] : commands) {
      if (s->parsed()) {
        cfg.subcommand = s->get_name();
        return handler(cfg, a, out);
      }
    }
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace factmod::cli
