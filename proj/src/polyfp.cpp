#include "factmod/polyfp.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace factmod {

namespace {

void require_same_field(const PolyFp& f, const PolyFp& g) {
  if (!(f.ctx() == g.ctx())) {
    throw std::domain_error("polynomials over different primes: " + std::to_string(f.ctx().p()) +
                            " vs " + std::to_string(g.ctx().p()));
  }
}

// r <- r mod g for monic g, in place on a coefficient vector.
void reduce_monic(std::vector<u64>& r, const std::vector<u64>& g, const PrimeCtx& ctx) {
  const std::size_t dg = g.size() - 1;
  while (r.size() > dg) {
    const u64 q = r.back();
    if (q != 0) {
      const std::size_t shift = r.size() - 1 - dg;
      for (std::size_t i = 0; i < dg; ++i) {
        r[shift + i] = ctx.sub(r[shift + i], ctx.mul(q, g[i]));
      }
    }
    r.pop_back();
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
}

std::vector<u64> mul_raw(const std::vector<u64>& a, const std::vector<u64>& b, const PrimeCtx& ctx) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = ctx.add(out[i + j], ctx.mul(a[i], b[j]));
    }
  }
  return out;
}

}  // namespace

PolyFp::PolyFp(const PrimeCtx& ctx, std::vector<u64> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
  for (auto& v : c_) v = ctx_.reduce(v);
  trim();
}

PolyFp PolyFp::from_signed(const PrimeCtx& ctx, const std::vector<i64>& coeffs) {
  std::vector<u64> c(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = ctx.reduce_signed(coeffs[i]);
  return PolyFp(ctx, std::move(c));
}

PolyFp PolyFp::constant(const PrimeCtx& ctx, u64 c) { return PolyFp(ctx, std::vector<u64>{c}); }

PolyFp PolyFp::x(const PrimeCtx& ctx) { return PolyFp(ctx, std::vector<u64>{0, 1}); }

void PolyFp::trim() noexcept {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

u64 PolyFp::eval(u64 t) const noexcept {
  t = ctx_.reduce(t);
  u64 acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = ctx_.add(ctx_.mul(acc, t), *it);
  return acc;
}

PolyFp PolyFp::monic() const {
  if (c_.empty() || c_.back() == 1) return *this;
  const u64 inv = ctx_.inv(c_.back());
  std::vector<u64> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = ctx_.mul(c_[i], inv);
  return PolyFp(ctx_, std::move(c));
}

PolyFp PolyFp::derivative() const {
  if (c_.size() <= 1) return PolyFp(ctx_);
  std::vector<u64> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = ctx_.mul(c_[i], ctx_.reduce(i));
  return PolyFp(ctx_, std::move(d));
}

PolyFp poly_add(const PolyFp& f, const PolyFp& g) {
  require_same_field(f, g);
  const auto& ctx = f.ctx();
  std::vector<u64> c(std::max(f.coeffs().size(), g.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = ctx.add(f[i], g[i]);
  return PolyFp(ctx, std::move(c));
}

PolyFp poly_sub(const PolyFp& f, const PolyFp& g) {
  require_same_field(f, g);
  const auto& ctx = f.ctx();
  std::vector<u64> c(std::max(f.coeffs().size(), g.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = ctx.sub(f[i], g[i]);
  return PolyFp(ctx, std::move(c));
}

PolyFp poly_mul(const PolyFp& f, const PolyFp& g) {
  require_same_field(f, g);
  return PolyFp(f.ctx(), mul_raw(f.coeffs(), g.coeffs(), f.ctx()));
}

PolyDivMod poly_divmod(const PolyFp& f, const PolyFp& g) {
  require_same_field(f, g);
  if (g.is_zero()) throw std::domain_error("polynomial division by zero");
  const auto& ctx = f.ctx();
  const int df = f.degree();
  const int dg = g.degree();
  if (df < dg) return {PolyFp(ctx), f};
  const u64 inv_lead = ctx.inv(g.lead());
  std::vector<u64> r = f.coeffs();
  std::vector<u64> q(static_cast<std::size_t>(df - dg + 1), 0);
  const auto& gc = g.coeffs();
  for (int k = df - dg; k >= 0; --k) {
    const u64 coef = ctx.mul(r[static_cast<std::size_t>(k + dg)], inv_lead);
    q[static_cast<std::size_t>(k)] = coef;
    if (coef == 0) continue;
    for (int i = 0; i <= dg; ++i) {
      auto& slot = r[static_cast<std::size_t>(k + i)];
      slot = ctx.sub(slot, ctx.mul(coef, gc[static_cast<std::size_t>(i)]));
    }
  }
  r.resize(static_cast<std::size_t>(dg));
  return {PolyFp(ctx, std::move(q)), PolyFp(ctx, std::move(r))};
}

PolyFp poly_rem(const PolyFp& f, const PolyFp& g) { return poly_divmod(f, g).rem; }

PolyFp poly_gcd(const PolyFp& f, const PolyFp& g) {
  require_same_field(f, g);
  PolyFp a = f.monic();
  PolyFp b = g.monic();
  while (!b.is_zero()) {
    PolyFp r = poly_rem(a, b).monic();
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

PolyFp poly_powmod_xp(const PolyFp& f) {
  if (f.degree() < 1) throw std::domain_error("poly_powmod_xp: modulus must have degree >= 1");
  const auto& ctx = f.ctx();
  const std::vector<u64> g = f.monic().coeffs();
  const u64 p = ctx.p();

  std::vector<u64> acc{0, 1};
  reduce_monic(acc, g, ctx);
  const int top = 63 - __builtin_clzll(p);
  for (int bit = top - 1; bit >= 0; --bit) {
    acc = mul_raw(acc, acc, ctx);
    reduce_monic(acc, g, ctx);
    if ((p >> bit) & 1) {
      acc.insert(acc.begin(), 0);
      reduce_monic(acc, g, ctx);
    }
  }
  return PolyFp(ctx, std::move(acc));
}

int distinct_root_count(const PolyFp& f) {
  if (f.is_zero()) throw std::domain_error("distinct_root_count: zero polynomial");
  if (f.degree() == 0) return 0;
  const PolyFp xp_minus_x = poly_sub(poly_powmod_xp(f), PolyFp::x(f.ctx()));
  return poly_gcd(xp_minus_x, f).degree();
}

std::vector<u64> roots_brute(const PolyFp& f, u64 guard) {
  if (f.is_zero()) throw std::domain_error("roots_brute: zero polynomial");
  if (f.ctx().p() > guard) {
    throw std::domain_error("roots_brute: p = " + std::to_string(f.ctx().p()) +
                            " exceeds the exhaustive-evaluation guard " + std::to_string(guard));
  }
  std::vector<u64> roots;
  for (u64 t = 0; t < f.ctx().p(); ++t) {
    if (f.eval(t) == 0) roots.push_back(t);
  }
  return roots;
}

u64 resultant_fp(const PolyFp& f, const PolyFp& g) {
  require_same_field(f, g);
  if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant of a zero polynomial");
  const auto& ctx = f.ctx();
  PolyFp a = f;
  PolyFp b = g;
  u64 scale = 1;
  for (;;) {
    const u64 m = static_cast<u64>(a.degree());
    const u64 n = static_cast<u64>(b.degree());
    if (n == 0) return ctx.mul(scale, ctx.pow(b.lead(), m));
    if (m == 0) return ctx.mul(scale, ctx.pow(a.lead(), n));
    if (m < n) {
      if ((m & n & 1) != 0) scale = ctx.neg(scale);
      std::swap(a, b);
      continue;
    }
    PolyFp r = poly_rem(a, b);
    if (r.is_zero()) return 0;
    // Res(a,b) = (-1)^{mn} lc(b)^{m - deg r} Res(b, r)
    if ((m & n & 1) != 0) scale = ctx.neg(scale);
    scale = ctx.mul(scale, ctx.pow(b.lead(), m - static_cast<u64>(r.degree())));
    a = std::move(b);
    b = std::move(r);
  }
}

u64 discriminant_fp(const PolyFp& f) {
  if (f.degree() < 1) throw std::domain_error("discriminant of a constant");
  const auto& ctx = f.ctx();
  const u64 d = static_cast<u64>(f.degree());
  const PolyFp df = f.derivative();
  u64 res = df.is_zero() ? 0 : resultant_fp(f, df);
  res = ctx.mul(res, ctx.inv(f.lead()));
  if ((d * (d - 1) / 2) & 1) res = ctx.neg(res);
  return res;
}

PolyFp parse_poly_fp(const PrimeCtx& ctx, std::string_view text) {
  std::vector<u64> coeffs;
  std::size_t i = 0;
  if (text.empty()) throw std::invalid_argument("empty polynomial");
  for (;;) {
    while (i < text.size() && text[i] == ' ') ++i;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      negative = text[i] == '-';
      ++i;
    }
    const std::size_t start = i;
    u64 acc = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      acc = ctx.add(ctx.mul(acc, 10 % ctx.p()), ctx.reduce(static_cast<u64>(text[i] - '0')));
      ++i;
    }
    if (i == start) throw std::invalid_argument("malformed polynomial: '" + std::string(text) + "'");
    while (i < text.size() && text[i] == ' ') ++i;
    coeffs.push_back(negative ? ctx.neg(acc) : acc);
    if (i == text.size()) break;
    if (text[i] != ',') throw std::invalid_argument("malformed polynomial: '" + std::string(text) + "'");
    ++i;
  }
  return PolyFp(ctx, std::move(coeffs));
}

std::string to_string(const PolyFp& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (i) s += ',';
    s += std::to_string(f.coeffs()[i]);
  }
  return s;
}

}  // namespace factmod
