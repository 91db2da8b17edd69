#include "factmod/permgroup.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "factmod/parallel.hpp"

namespace factmod {

namespace {

struct PermHash {
  std::size_t operator()(const Perm& g) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : g) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  u128 m = static_cast<u128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

Perm identity_perm(std::size_t n) {
  Perm g(n);
  std::iota(g.begin(), g.end(), std::uint16_t{0});
  return g;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

std::size_t fixed_points(const Perm& g) noexcept {
  std::size_t c = 0;
  for (std::size_t i = 0; i < g.size(); ++i) c += (g[i] == i);
  return c;
}

std::vector<Perm> parse_generators(std::string_view text, std::size_t degree) {
  // First pass collects cycles as point lists, second builds permutations.
  std::vector<std::vector<std::vector<std::size_t>>> gens;
  std::size_t max_point = 0;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip_ws();
  if (i == text.size()) throw std::invalid_argument("empty generator list");
  std::vector<std::vector<std::size_t>> current;
  while (i < text.size()) {
    skip_ws();
    if (i == text.size()) break;
    if (text[i] == ',') {
      if (current.empty()) throw std::invalid_argument("empty generator in '" + std::string(text) + "'");
      gens.push_back(std::move(current));
      current.clear();
      ++i;
      continue;
    }
    if (i >= text.size() || text[i] != '(') {
      throw std::invalid_argument("expected '(' in generator list '" + std::string(text) + "'");
    }
    ++i;
    std::vector<std::size_t> cycle;
    for (;;) {
      skip_ws();
      if (i >= text.size()) throw std::invalid_argument("unterminated cycle in '" + std::string(text) + "'");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (text[i] < '0' || text[i] > '9') {
        throw std::invalid_argument("bad point in '" + std::string(text) + "'");
      }
      std::size_t v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        v = v * 10 + static_cast<std::size_t>(text[i] - '0');
        if (v > 65535) throw std::invalid_argument("point out of range");
        ++i;
      }
      if (v == 0) throw std::invalid_argument("points are 1-based");
      if (std::find(cycle.begin(), cycle.end(), v) != cycle.end()) {
        throw std::invalid_argument("repeated point in a cycle");
      }
      cycle.push_back(v);
      max_point = std::max(max_point, v);
    }
    current.push_back(std::move(cycle));
  }
  if (current.empty()) throw std::invalid_argument("trailing ',' in generator list");
  gens.push_back(std::move(current));

  if (degree == 0) degree = std::max<std::size_t>(max_point, 1);
  if (max_point > degree) throw std::invalid_argument("point exceeds the stated degree");

  std::vector<Perm> out;
  for (const auto& cycles : gens) {
    Perm g = identity_perm(degree);
    // Cycles compose right to left: the rightmost acts first.
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
      Perm c = identity_perm(degree);
      for (std::size_t k = 0; k < it->size(); ++k) {
        c[(*it)[k] - 1] = static_cast<std::uint16_t>((*it)[(k + 1) % it->size()] - 1);
      }
      g = compose(c, g);
    }
    out.push_back(std::move(g));
  }
  return out;
}

PermGroup::PermGroup(std::size_t degree, const std::vector<Perm>& generators, std::size_t guard)
    : degree_(degree), generators_(generators) {
  if (degree == 0) throw std::invalid_argument("PermGroup: degree must be positive");
  for (const auto& g : generators_) {
    if (g.size() != degree) throw std::invalid_argument("PermGroup: generator of the wrong degree");
    std::vector<char> hit(degree, 0);
    for (auto v : g) {
      if (v >= degree || hit[v]) throw std::invalid_argument("PermGroup: generator is not a permutation");
      hit[v] = 1;
    }
  }
  std::unordered_set<Perm, PermHash> seen;
  elements_.push_back(identity_perm(degree));
  seen.insert(elements_.back());
  for (std::size_t head = 0; head < elements_.size(); ++head) {
    for (const auto& g : generators_) {
      Perm h = compose(g, elements_[head]);
      if (seen.insert(h).second) {
        if (elements_.size() >= guard) {
          throw std::length_error("PermGroup: more than " + std::to_string(guard) + " elements");
        }
        elements_.push_back(std::move(h));
      }
    }
  }
}

PermGroup PermGroup::symmetric(std::size_t n, std::size_t guard) {
  std::vector<Perm> gens;
  if (n >= 2) {
    Perm t = identity_perm(n);
    std::swap(t[0], t[1]);
    gens.push_back(t);
    Perm c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<std::uint16_t>((i + 1) % n);
    gens.push_back(c);
  }
  return PermGroup(n, gens, guard);
}

std::size_t PermGroup::orbit_count() const {
  std::vector<std::size_t> parent(degree_);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (const auto& g : generators_) {
    for (std::size_t i = 0; i < degree_; ++i) {
      const auto a = find_root(parent, i);
      const auto b = find_root(parent, g[i]);
      if (a != b) parent[a] = b;
    }
  }
  std::size_t orbits = 0;
  for (std::size_t i = 0; i < degree_; ++i) orbits += (find_root(parent, i) == i);
  return orbits;
}

BigInt derangements(unsigned n) {
  if (n == 0) return 1;
  BigInt prev2 = 1, prev1 = 0;
  for (unsigned k = 2; k <= n; ++k) {
    BigInt cur = (k - 1) * (prev1 + prev2);
    prev2 = prev1;
    prev1 = cur;
  }
  return prev1;
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

FixedPointFree fixed_point_free_proportion(const PermGroup& G) {
  FixedPointFree out;
  out.degree = G.degree();
  out.order = G.order();
  BigInt total_fixed = 0;
  u64 none = 0;
  for (const auto& g : G.elements()) {
    const auto f = fixed_points(g);
    total_fixed += f;
    none += (f == 0);
  }
  out.derangements = none;
  out.sigma = Rational(out.derangements, out.order);
  const BigInt n = out.degree;
  out.upper_bound_ok = out.sigma <= Rational(n - 1, n);
  out.printed_lower_bound_holds =
      out.sigma >= Rational(1) - Rational(BigInt(1), factorial(static_cast<unsigned>(out.degree)));
  out.average_fixed_points = Rational(total_fixed, out.order);
  out.orbits = G.orbit_count();
  out.burnside_identity_ok = out.average_fixed_points == Rational(BigInt(out.orbits));
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  return splitmix64(splitmix64(master) ^ (trial * 0xd1b54a32d192ed03ull));
}

std::vector<u64> random_unit_permutation(u64 p, std::uint64_t seed) {
  std::vector<u64> sigma(p - 1);
  std::iota(sigma.begin(), sigma.end(), u64{1});
  std::mt19937_64 rng(seed);
  for (std::size_t i = sigma.size(); i > 1; --i) {
    const auto j = bounded(rng, i);
    std::swap(sigma[i - 1], sigma[j]);
  }
  return sigma;
}

u64 partial_product_distinct(const PrimeCtx& ctx, const std::vector<u64>& sigma) {
  std::vector<u64> bits((ctx.p() + 63) / 64, 0);
  u64 v = 1;
  u64 distinct = 0;
  for (u64 s : sigma) {
    v = ctx.mul(v, s);
    u64& word = bits[v >> 6];
    const u64 mask = u64{1} << (v & 63);
    if (!(word & mask)) {
      word |= mask;
      ++distinct;
    }
  }
  return distinct;
}

PartialProductReport partial_products_distinct(u64 p, u64 trials, std::uint64_t seed,
                                               unsigned threads) {
  if (p < 5) throw std::domain_error("partial_products_distinct: requires p >= 5");
  if (trials == 0) throw std::domain_error("partial_products_distinct: trials must be positive");
  const PrimeCtx ctx(p);
  PartialProductReport rep;
  rep.p = p;
  rep.master_seed = seed;
  std::vector<u64> index(trials);
  std::iota(index.begin(), index.end(), u64{0});
  rep.trials = ordered_parallel_map(index, threads, [] { return 0; }, [&](int&, u64 t) {
    const auto s = trial_seed(seed, t);
    return PartialProductTrial{s, partial_product_distinct(ctx, random_unit_permutation(p, s))};
  });
  long double sum = 0;
  for (const auto& t : rep.trials) sum += static_cast<long double>(t.distinct);
  rep.mean = static_cast<double>(sum / static_cast<long double>(trials));
  rep.mean_over_p = rep.mean / static_cast<double>(p);
  rep.deviation = rep.mean_over_p - kGuyLimit;
  return rep;
}

DensityEstimate failing_density_estimate(unsigned N, unsigned measure_upto) {
  if (N < 2) throw std::domain_error("failing_density_estimate: requires N >= 2");
  DensityEstimate out;
  out.N = N;
  out.product = 1;
  out.measured_upto = std::min(measure_upto, N);
  Rational prod_sigma = 1;
  Rational ratio_sum = 0;
  for (unsigned n = 2; n <= N; ++n) {
    const Rational bound = Rational(BigInt(n - 1), BigInt(n));
    out.product *= bound;
    Rational s = bound;
    if (n <= out.measured_upto) {
      s = fixed_point_free_proportion(PermGroup::symmetric(n)).sigma;
    }
    out.sigmas.push_back(s);
    prod_sigma *= s;
    ratio_sum += (Rational(1) - s) / s;
  }
  out.chain = ratio_sum * prod_sigma;
  return out;
}

ErdosDensity erdos_density_scan(u64 x, const ScanOptions& opts) {
  ErdosDensity out;
  out.x = x;
  factorial_scan(5, x, opts, [&](const ScanRecord& r) {
    ++out.primes;
    if (!r.collision) out.without_collision.push_back(r.p);
  });
  if (out.primes > 0) {
    out.fraction = Rational(BigInt(out.without_collision.size()), BigInt(out.primes));
  }
  return out;
}

}  // namespace factmod
