#include "factmod/polyz.hpp"

#include <stdexcept>
#include <utility>

namespace factmod {

namespace {

BigInt ipow(BigInt b, unsigned e) {
  BigInt r = 1;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

BigInt content(const std::vector<BigInt>& c) {
  BigInt g = 0;
  for (const auto& v : c) {
    g = boost::multiprecision::gcd(g, v);
    if (g == 1) break;
  }
  return boost::multiprecision::abs(g);
}

void trim(std::vector<BigInt>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// lead(b)^{deg a - deg b + 1} * a = q * b + r, returns r.
std::vector<BigInt> pseudo_rem(std::vector<BigInt> r, const std::vector<BigInt>& b) {
  const std::size_t db = b.size() - 1;
  const BigInt& lb = b.back();
  int e = static_cast<int>(r.size()) - static_cast<int>(db);  // delta + 1
  while (!r.empty() && r.size() - 1 >= db) {
    const BigInt lr = r.back();
    const std::size_t shift = r.size() - 1 - db;
    for (auto& v : r) v *= lb;
    for (std::size_t i = 0; i <= db; ++i) r[shift + i] -= lr * b[i];
    trim(r);
    --e;
  }
  if (e > 0) {
    const BigInt s = ipow(lb, static_cast<unsigned>(e));
    for (auto& v : r) v *= s;
  }
  return r;
}

}  // namespace

PolyZ::PolyZ(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(c_); }

const BigInt& PolyZ::lead() const {
  if (c_.empty()) throw std::domain_error("lead of the zero polynomial");
  return c_.back();
}

BigInt PolyZ::eval(const BigInt& t) const {
  BigInt acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

PolyZ PolyZ::derivative() const {
  if (c_.size() <= 1) return PolyZ();
  std::vector<BigInt> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long long>(i);
  return PolyZ(std::move(d));
}

u64 reduce_big(const BigInt& v, const PrimeCtx& ctx) {
  BigInt r = v % ctx.p();
  if (r < 0) r += ctx.p();
  return r.convert_to<u64>();
}

PolyFp PolyZ::reduce(const PrimeCtx& ctx) const {
  std::vector<u64> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = reduce_big(c_[i], ctx);
  return PolyFp(ctx, std::move(c));
}

PolyZ poly_mul(const PolyZ& f, const PolyZ& g) {
  if (f.is_zero() || g.is_zero()) return PolyZ();
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  std::vector<BigInt> out(a.size() + b.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return PolyZ(std::move(out));
}

BigInt resultant_z(const PolyZ& f, const PolyZ& g) {
  if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant of a zero polynomial");
  const unsigned m0 = static_cast<unsigned>(f.degree());
  const unsigned n0 = static_cast<unsigned>(g.degree());
  if (n0 == 0) return ipow(g.lead(), m0);
  if (m0 == 0) return ipow(f.lead(), n0);

  std::vector<BigInt> A = f.coeffs();
  std::vector<BigInt> B = g.coeffs();
  const BigInt ca = content(A);
  const BigInt cb = content(B);
  for (auto& v : A) v /= ca;
  for (auto& v : B) v /= cb;
  const BigInt t = ipow(ca, n0) * ipow(cb, m0);

  int s = 1;
  if (A.size() < B.size()) {
    std::swap(A, B);
    if ((m0 & n0 & 1) != 0) s = -s;
  }
  BigInt gg = 1;
  BigInt h = 1;
  for (;;) {
    const unsigned da = static_cast<unsigned>(A.size() - 1);
    const unsigned db = static_cast<unsigned>(B.size() - 1);
    const unsigned delta = da - db;
    if ((da & db & 1) != 0) s = -s;
    std::vector<BigInt> R = pseudo_rem(A, B);
    A = std::move(B);
    const BigInt div = gg * ipow(h, delta);
    for (auto& v : R) v /= div;
    B = std::move(R);
    gg = A.back();
    if (delta == 0) {
      // h unchanged
    } else {
      h = ipow(gg, delta) / ipow(h, delta - 1);
    }
    if (B.empty()) return 0;
    if (B.size() > 1) continue;
    const unsigned dA = static_cast<unsigned>(A.size() - 1);
    h = ipow(B.back(), dA) / ipow(h, dA - 1);
    return s * t * h;
  }
}

BigInt sylvester_resultant(const PolyZ& f, const PolyZ& g) {
  if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant of a zero polynomial");
  const std::size_t m = static_cast<std::size_t>(f.degree());
  const std::size_t n = static_cast<std::size_t>(g.degree());
  const std::size_t size = m + n;
  if (size == 0) return 1;
  std::vector<std::vector<BigInt>> M(size, std::vector<BigInt>(size, BigInt(0)));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k <= m; ++k) M[r][r + k] = f.coeffs()[m - k];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k <= n; ++k) M[n + r][r + k] = g.coeffs()[n - k];
  }
  // Bareiss: every intermediate division is exact.
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (M[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < size && M[swap_row][k] == 0) ++swap_row;
      if (swap_row == size) return 0;
      std::swap(M[k], M[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
      }
      M[i][k] = 0;
    }
    prev = M[k][k];
  }
  return sign * M[size - 1][size - 1];
}

BigInt discriminant_z(const PolyZ& f) {
  if (f.degree() < 1) throw std::domain_error("discriminant of a constant");
  const unsigned d = static_cast<unsigned>(f.degree());
  BigInt res = resultant_z(f, f.derivative()) / f.lead();
  if ((d * (d - 1) / 2) & 1) res = -res;
  return res;
}

PolyZ parse_poly_z(std::string_view text) {
  std::vector<BigInt> coeffs;
  std::size_t start = 0;
  if (text.empty()) throw std::invalid_argument("empty polynomial");
  for (;;) {
    const std::size_t comma = text.find(',', start);
    std::string tok(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    std::size_t digits_from = (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) ? 1 : 0;
    if (tok.size() == digits_from ||
        tok.find_first_not_of("0123456789", digits_from) != std::string::npos) {
      throw std::invalid_argument("malformed polynomial: '" + std::string(text) + "'");
    }
    if (tok[0] == '+') tok.erase(tok.begin());
    coeffs.emplace_back(tok);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return PolyZ(std::move(coeffs));
}

std::string to_string(const PolyZ& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (i) s += ',';
    s += f.coeffs()[i].str();
  }
  return s;
}

}  // namespace factmod
