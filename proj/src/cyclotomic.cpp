#include "crg/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <sstream>

#include "crg/errors.hpp"

namespace crg {

uint32_t euler_phi(uint32_t n) {
  uint32_t result = n;
  for (uint32_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

uint64_t lcm_u64(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / std::gcd(a, b) * b;
}

namespace {

// dense integer polynomial helpers for Phi_n
std::vector<long> poly_exact_div(const std::vector<long>& a, const std::vector<long>& b) {
  // b monic
  std::vector<long> r = a;
  std::vector<long> q(a.size() - b.size() + 1, 0);
  for (size_t d = q.size(); d-- > 0;) {
    long c = r[d + b.size() - 1];
    if (c == 0) continue;
    q[d] = c;
    for (size_t j = 0; j < b.size(); ++j) r[d + j] -= c * b[j];
  }
  for (long c : r)
    if (c != 0) throw Error("inexact cyclotomic division");
  return q;
}

std::map<uint32_t, std::vector<long>>& cyclo_memo() {
  static std::map<uint32_t, std::vector<long>> memo;
  return memo;
}

std::mutex& cyclo_mutex() {
  static std::mutex m;
  return m;
}

// caller holds cyclo_mutex
const std::vector<long>& cyclotomic_poly_locked(uint32_t n) {
  auto& memo = cyclo_memo();
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::vector<long> p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (uint32_t d = 1; d < n; ++d)
    if (n % d == 0) p = poly_exact_div(p, cyclotomic_poly_locked(d));
  return memo.emplace(n, std::move(p)).first->second;
}

std::vector<std::pair<uint32_t, uint32_t>> factorize(uint32_t n) {
  std::vector<std::pair<uint32_t, uint32_t>> f;
  for (uint32_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      uint32_t e = 0;
      while (n % p == 0) n /= p, ++e;
      f.emplace_back(p, e);
    }
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

uint64_t pow_mod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

uint32_t primitive_root(uint32_t pe, uint32_t p) {
  uint32_t phi = pe / p * (p - 1);
  auto pf = factorize(phi);
  for (uint32_t g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (auto& [q, e] : pf)
      if (pow_mod(g, phi / q, pe) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw Error("no primitive root");
}

// x = a mod m, x = 1 mod (n/m), with gcd(m, n/m) = 1
uint32_t crt_lift(uint64_t a, uint64_t m, uint64_t n) {
  uint64_t k = n / m;
  // inverse of k mod m
  long x0 = 1, x1 = 0;
  long r0 = (long)(k % m), r1 = (long)m;
  while (r1) {
    long q = r0 / r1;
    std::swap(r0 -= q * r1, r1);
    std::swap(x0 -= q * x1, x1);
  }
  long inv = ((x0 % (long)m) + (long)m) % (long)m;
  // x = 1 + k * t with k*t = a-1 mod m
  uint64_t t = ((a + m - 1) % m) * (uint64_t)inv % m;
  return (uint32_t)((1 + k * t) % n);
}

struct Scratch {
  std::vector<Rational> acc;
  std::vector<char> used;
  std::vector<uint32_t> touched;
  void ensure(size_t phi) {
    if (acc.size() < phi) {
      acc.resize(phi);
      used.resize(phi, 0);
    }
  }
  void add(uint32_t k, const Rational& v) {
    if (!used[k]) {
      used[k] = 1;
      touched.push_back(k);
      acc[k] = v;
    } else {
      acc[k] += v;
    }
  }
  std::vector<Cyclotomic::Term> extract() {
    std::sort(touched.begin(), touched.end());
    std::vector<Cyclotomic::Term> out;
    out.reserve(touched.size());
    for (uint32_t k : touched) {
      if (acc[k] != 0) out.emplace_back(k, acc[k]);
      used[k] = 0;
      acc[k] = 0;
    }
    touched.clear();
    return out;
  }
};

thread_local Scratch tls_scratch;

}  // namespace

struct CycContextLock {
  std::shared_mutex m;
};

CycContext::CycContext(uint32_t n) : n_(n), lock_(new CycContextLock) {
  {
    std::lock_guard<std::mutex> g(cyclo_mutex());
    cyclo_ = cyclotomic_poly_locked(n);
  }
  phi_ = (uint32_t)cyclo_.size() - 1;
  factors_ = factorize(n);
  rows_.resize(n_);
  // unit group generators
  if (n > 2) {
    for (auto& [p, e] : factors_) {
      uint32_t pe = 1;
      for (uint32_t i = 0; i < e; ++i) pe *= p;
      if (p == 2) {
        if (e >= 2) unit_gens_.push_back(crt_lift(pe - 1, pe, n));
        if (e >= 3) unit_gens_.push_back(crt_lift(5, pe, n));
      } else {
        unit_gens_.push_back(crt_lift(primitive_root(pe, p), pe, n));
      }
    }
  }
}

const CycContext& CycContext::get(uint32_t n) {
  if (n == 0) throw ConductorError("conductor must be positive");
  static std::map<uint32_t, std::unique_ptr<CycContext>> registry;
  static std::shared_mutex m;
  {
    std::shared_lock rl(m);
    auto it = registry.find(n);
    if (it != registry.end()) return *it->second;
  }
  std::unique_lock wl(m);
  auto& slot = registry[n];
  if (!slot) slot.reset(new CycContext(n));
  return *slot;
}

const std::vector<std::pair<uint32_t, BigInt>>& CycContext::row(uint32_t t) const {
  t %= n_;
  {
    std::shared_lock rl(lock_->m);
    if (rows_[t]) return *rows_[t];
  }
  std::unique_lock wl(lock_->m);
  if (rows_[t]) return *rows_[t];
  using Row = std::vector<std::pair<uint32_t, BigInt>>;
  if (t < phi_) {
    rows_[t].reset(new Row{{t, BigInt(1)}});
    return *rows_[t];
  }
  // build the chain phi..t from the highest cached entry
  uint32_t start = phi_;
  std::vector<BigInt> cur(phi_ + 1);
  for (uint32_t s = t; s >= phi_; --s) {
    if (rows_[s]) {
      start = s + 1;
      for (auto& [k, c] : *rows_[s]) cur[k] = c;
      break;
    }
    if (s == phi_) {
      // x^phi = -sum_{i<phi} Phi[i] x^i
      cur.assign(phi_ + 1, BigInt(0));
      for (uint32_t i = 0; i < phi_; ++i) cur[i] = -cyclo_[i];
      rows_[phi_].reset(new Row);
      for (uint32_t i = 0; i < phi_; ++i)
        if (cur[i] != 0) rows_[phi_]->emplace_back(i, cur[i]);
      start = phi_ + 1;
      break;
    }
  }
  for (uint32_t s = start; s <= t; ++s) {
    for (uint32_t i = phi_; i-- > 0;) cur[i + 1] = cur[i];
    cur[0] = 0;
    BigInt top = cur[phi_];
    if (top != 0) {
      for (uint32_t i = 0; i < phi_; ++i)
        if (cyclo_[i] != 0) cur[i] -= top * cyclo_[i];
      cur[phi_] = 0;
    }
    rows_[s].reset(new Row);
    for (uint32_t i = 0; i < phi_; ++i)
      if (cur[i] != 0) rows_[s]->emplace_back(i, cur[i]);
  }
  return *rows_[t];
}

Rational CycContext::trace_of_power(uint32_t t) const {
  t %= n_;
  uint32_t d = n_ / std::gcd(n_, t);
  // Tr(zeta_d primitive) = mu(d) * phi(n) / phi(d)
  long mu = 1;
  uint32_t phid = 1;
  uint32_t rem = d;
  for (auto& [p, e] : factors_) {
    if (rem % p == 0) {
      uint32_t cnt = 0;
      while (rem % p == 0) rem /= p, ++cnt;
      if (cnt >= 2) return Rational(0);
      mu = -mu;
      phid *= (p - 1);
    }
  }
  return Rational(mu * (long)(phi_ / phid));
}

// ---------------------------------------------------------------------------

Cyclotomic Cyclotomic::from_rational(uint32_t n, Rational q) {
  Cyclotomic c(n);
  if (q != 0) c.terms_.emplace_back(0, std::move(q));
  return c;
}

Cyclotomic Cyclotomic::root(uint32_t n, long k) {
  const CycContext& ctx = CycContext::get(n);
  long t = k % (long)n;
  if (t < 0) t += n;
  Cyclotomic c(n);
  for (auto& [i, v] : ctx.row((uint32_t)t)) c.terms_.emplace_back(i, Rational(v));
  return c;
}

Cyclotomic Cyclotomic::from_terms(uint32_t n, std::vector<Term> terms) {
  const CycContext& ctx = CycContext::get(n);
  Scratch& s = tls_scratch;
  s.ensure(ctx.phi());
  for (auto& [e, q] : terms) {
    if (q == 0) continue;
    if (e < ctx.phi()) {
      s.add(e, q);
    } else {
      for (auto& [k, c] : ctx.row(e)) s.add(k, Rational(q * c));
    }
  }
  Cyclotomic out(n);
  out.terms_ = s.extract();
  return out;
}

bool Cyclotomic::is_one() const {
  return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
}

bool Cyclotomic::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
}

Rational Cyclotomic::rational_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_rational()) throw Error("not a rational value: " + render());
  return terms_[0].second;
}

namespace {
void align(Cyclotomic& a, Cyclotomic& b) {
  if (a.conductor() == b.conductor()) return;
  uint64_t m = lcm_u64(a.conductor(), b.conductor());
  if (m > 2'000'000) throw ConductorError("conductor overflow in mixed arithmetic");
  if (a.conductor() != m) a = a.embed((uint32_t)m);
  if (b.conductor() != m) b = b.embed((uint32_t)m);
}
}  // namespace

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
  Cyclotomic a = *this, b = o;
  align(a, b);
  Cyclotomic out(a.n_);
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin(), j = b.terms_.begin();
  while (i != a.terms_.end() || j != b.terms_.end()) {
    if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
      out.terms_.push_back(*i++);
    } else if (i == a.terms_.end() || j->first < i->first) {
      out.terms_.push_back(*j++);
    } else {
      Rational v = i->second + j->second;
      if (v != 0) out.terms_.emplace_back(i->first, std::move(v));
      ++i, ++j;
    }
  }
  return out;
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic out(n_);
  out.terms_.reserve(terms_.size());
  for (auto& [e, q] : terms_) out.terms_.emplace_back(e, Rational(-q));
  return out;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator*(const Rational& q) const {
  if (q == 0) return Cyclotomic(n_);
  Cyclotomic out(n_);
  out.terms_.reserve(terms_.size());
  for (auto& [e, c] : terms_) out.terms_.emplace_back(e, Rational(c * q));
  return out;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
  if (is_zero() || o.is_zero()) {
    return Cyclotomic(n_ == o.n_ ? n_ : (uint32_t)lcm_u64(n_, o.n_));
  }
  Cyclotomic a = *this, b = o;
  align(a, b);
  const CycContext& ctx = CycContext::get(a.n_);
  Scratch& s = tls_scratch;
  s.ensure(ctx.phi());
  for (auto& [i, x] : a.terms_) {
    for (auto& [j, y] : b.terms_) {
      uint32_t t = i + j;
      Rational p(x * y);
      if (t < ctx.phi()) {
        s.add(t, p);
      } else {
        for (auto& [k, c] : ctx.row(t)) s.add(k, Rational(p * c));
      }
    }
  }
  Cyclotomic out(a.n_);
  out.terms_ = s.extract();
  return out;
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw DivideByZero();
  if (is_rational()) return from_rational(n_, Rational(1 / terms_[0].second));
  if (terms_.size() == 1) {
    // c * z^e -> (1/c) * z^(n-e)
    Cyclotomic r = root(n_, (long)n_ - (long)terms_[0].first);
    return r * Rational(1 / terms_[0].second);
  }
  // product of nontrivial Galois conjugates divided by the (rational) norm
  const CycContext& ctx = CycContext::get(n_);
  Cyclotomic p = one(n_);
  for (uint32_t k = 2; k <= n_; ++k) {
    if (std::gcd(k, n_) != 1) continue;
    p = p * galois((long)k);
  }
  (void)ctx;
  Cyclotomic norm = *this * p;
  if (!norm.is_rational()) throw Error("norm not rational");
  Rational nv = norm.rational_value();
  if (nv == 0) throw DivideByZero();
  return p * Rational(1 / nv);
}

Cyclotomic Cyclotomic::operator/(const Cyclotomic& o) const {
  if (o.is_zero()) throw DivideByZero();
  if (o.is_rational()) return *this * Rational(1 / o.terms_[0].second);
  Cyclotomic a = *this, b = o;
  align(a, b);
  return a * b.inverse();
}

Cyclotomic Cyclotomic::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Cyclotomic r = one(n_), b = *this;
  unsigned long u = (unsigned long)e;
  while (u) {
    if (u & 1) r = r * b;
    b = b * b;
    u >>= 1;
  }
  return r;
}

bool Cyclotomic::operator<(const Cyclotomic& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  size_t m = std::min(terms_.size(), o.terms_.size());
  for (size_t i = 0; i < m; ++i) {
    if (terms_[i].first != o.terms_[i].first) return terms_[i].first < o.terms_[i].first;
    int c = cmp(terms_[i].second, o.terms_[i].second);
    if (c != 0) return c < 0;
  }
  return terms_.size() < o.terms_.size();
}

std::size_t Cyclotomic::hash() const {
  std::size_t h = n_;
  for (auto& [e, q] : terms_) {
    hash_mix(h, e);
    hash_mix(h, hash_value(q));
  }
  return h;
}

Cyclotomic Cyclotomic::galois(long k) const {
  long km = k % (long)n_;
  if (km < 0) km += n_;
  if (n_ > 1 && std::gcd((uint32_t)km, n_) != 1)
    throw ConductorError("galois parameter not coprime to conductor");
  if (km == 1 || n_ == 1) return *this;
  const CycContext& ctx = CycContext::get(n_);
  Scratch& s = tls_scratch;
  s.ensure(ctx.phi());
  for (auto& [e, q] : terms_) {
    uint32_t t = (uint32_t)((uint64_t)e * (uint64_t)km % n_);
    if (t < ctx.phi()) {
      s.add(t, q);
    } else {
      for (auto& [i, c] : ctx.row(t)) s.add(i, Rational(q * c));
    }
  }
  Cyclotomic out(n_);
  out.terms_ = s.extract();
  return out;
}

Cyclotomic Cyclotomic::conj() const {
  if (n_ <= 2) return *this;
  return galois(-1);
}

Cyclotomic Cyclotomic::embed(uint32_t m) const {
  if (m == n_) return *this;
  if (m % n_ != 0) throw ConductorError("embed target conductor not a multiple");
  uint32_t k = m / n_;
  const CycContext& ctx = CycContext::get(m);
  Scratch& s = tls_scratch;
  s.ensure(ctx.phi());
  for (auto& [e, q] : terms_) {
    uint32_t t = (uint32_t)((uint64_t)e * k % m);
    if (t < ctx.phi()) {
      s.add(t, q);
    } else {
      for (auto& [i, c] : ctx.row(t)) s.add(i, Rational(q * c));
    }
  }
  Cyclotomic out(m);
  out.terms_ = s.extract();
  return out;
}

Rational Cyclotomic::field_trace() const {
  const CycContext& ctx = CycContext::get(n_);
  Rational t(0);
  for (auto& [e, q] : terms_) t += q * ctx.trace_of_power(e);
  return t;
}

std::optional<uint64_t> Cyclotomic::root_order() const {
  if (is_zero()) return std::nullopt;
  if (is_rational()) {
    if (terms_[0].second == 1) return 1;
    if (terms_[0].second == -1) return 2;
    return std::nullopt;
  }
  // Kronecker: an algebraic integer all of whose conjugates lie on the unit
  // circle is a root of unity; |a|=1 forces the same for every conjugate.
  for (auto& [e, q] : terms_)
    if (!is_integer(q)) return std::nullopt;
  Cyclotomic mod = *this * conj();
  if (!mod.is_one()) return std::nullopt;
  const CycContext& ctx = CycContext::get(n_);
  uint64_t bound = ctx.root_bound();
  Cyclotomic p = *this;
  for (uint64_t k = 1; k <= bound; ++k) {
    if (p.is_one()) return k;
    p = p * (*this);
  }
  return std::nullopt;
}

std::string Cyclotomic::render() const {
  std::ostringstream os;
  if (terms_.empty()) {
    os << "0";
  } else {
    bool first = true;
    for (auto& [e, q] : terms_) {
      if (!first) os << " + ";
      first = false;
      if (e == 0) {
        os << crg::render(q);
      } else {
        os << crg::render(q) << "*z";
        if (e > 1) os << "^" << e;
      }
    }
  }
  os << " @" << n_;
  return os.str();
}

}  // namespace crg
