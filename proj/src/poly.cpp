#include "crg/poly.hpp"

#include <algorithm>
#include <sstream>

#include "crg/errors.hpp"

namespace crg {

const char* const kVarAlphabet = "qtxyu";

static int var_rank(char v) {
  for (int i = 0; kVarAlphabet[i]; ++i)
    if (kVarAlphabet[i] == v) return i;
  throw ParseError(std::string("unknown variable '") + v + "'");
}

static void check_vars(const std::string& vars) {
  int last = -1;
  for (char v : vars) {
    int r = var_rank(v);
    if (r <= last) throw ParseError("variables must follow the fixed order qtxyu");
    last = r;
  }
}

// ---------------------------------------------------------------------------
// dense univariate helpers

void upoly_trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly upoly_add(const UPoly& a, const UPoly& b) {
  UPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < out.size(); ++i) {
    if (i < a.size() && i < b.size())
      out[i] = a[i] + b[i];
    else
      out[i] = i < a.size() ? a[i] : b[i];
  }
  upoly_trim(out);
  return out;
}

UPoly upoly_sub(const UPoly& a, const UPoly& b) {
  UPoly nb(b.size());
  for (size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
  return upoly_add(a, nb);
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1);
  uint32_t n = 1;
  for (auto& c : a) n = (uint32_t)lcm_u64(n, c.conductor());
  for (auto& c : b) n = (uint32_t)lcm_u64(n, c.conductor());
  for (auto& c : out) c = Cyclotomic::zero(n);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      out[i + j] = out[i + j] + a[i] * b[j];
    }
  }
  upoly_trim(out);
  return out;
}

UPoly upoly_div_exact(const UPoly& a, const UPoly& b) {
  if (b.empty()) throw DivideByZero();
  if (a.empty()) return {};
  if (a.size() < b.size()) throw Error("inexact polynomial division");
  UPoly r = a;
  UPoly q(a.size() - b.size() + 1);
  Cyclotomic lead_inv = b.back().inverse();
  for (auto& c : q) c = Cyclotomic::zero(lead_inv.conductor());
  for (size_t d = q.size(); d-- > 0;) {
    Cyclotomic c = r[d + b.size() - 1] * lead_inv;
    if (c.is_zero()) continue;
    q[d] = c;
    for (size_t j = 0; j < b.size(); ++j) r[d + j] = r[d + j] - c * b[j];
  }
  for (auto& c : r)
    if (!c.is_zero()) throw Error("inexact polynomial division");
  upoly_trim(q);
  return q;
}

Cyclotomic upoly_eval(const UPoly& p, const Cyclotomic& x) {
  Cyclotomic acc = Cyclotomic::zero(x.conductor());
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

UPoly upoly_series_inverse(const UPoly& p, int bound) {
  if (p.empty() || p[0].is_zero()) throw Error("series inverse needs invertible constant term");
  Cyclotomic c0 = p[0].inverse();
  UPoly out((size_t)bound + 1);
  out[0] = c0;
  for (int j = 1; j <= bound; ++j) {
    Cyclotomic acc = Cyclotomic::zero(p[0].conductor());
    for (size_t i = 1; i < p.size() && (int)i <= j; ++i) {
      if (!p[i].is_zero()) acc = acc + p[i] * out[j - i];
    }
    out[j] = -(acc * c0);
  }
  return out;
}

int upoly_mult_at_one(const UPoly& p) {
  if (p.empty()) return 0;
  UPoly cur = p;
  int mult = 0;
  while (cur.size() > 1) {
    Cyclotomic sum = Cyclotomic::zero(1);
    for (auto& c : cur) sum = sum + c;
    if (!sum.is_zero()) break;
    // synthetic division by (x - 1): q[i-1] = cur[i] + q[i]
    UPoly q(cur.size() - 1);
    q[cur.size() - 2] = cur.back();
    for (size_t i = cur.size() - 2; i >= 1; --i) q[i - 1] = cur[i] + q[i];
    cur = std::move(q);
    upoly_trim(cur);
    ++mult;
  }
  return mult;
}

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly::MultiPoly(std::string vars) : vars_(std::move(vars)) { check_vars(vars_); }

MultiPoly MultiPoly::constant(std::string vars, Cyclotomic c) {
  MultiPoly p(std::move(vars));
  if (!c.is_zero()) p.terms_.emplace(Expt(p.vars_.size(), 0), std::move(c));
  return p;
}

MultiPoly MultiPoly::monomial(std::string vars, Expt e, Cyclotomic c) {
  MultiPoly p(std::move(vars));
  if (e.size() != p.vars_.size()) throw ParseError("exponent arity mismatch");
  if (!c.is_zero()) p.terms_.emplace(std::move(e), std::move(c));
  return p;
}

MultiPoly MultiPoly::aligned(const std::string& vars) const {
  if (vars == vars_) return *this;
  check_vars(vars);
  std::vector<int> pos(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    size_t p = vars.find(vars_[i]);
    if (p == std::string::npos) throw ParseError("alignment must not drop variables");
    pos[i] = (int)p;
  }
  MultiPoly out(vars);
  for (auto& [e, c] : terms_) {
    Expt ne(vars.size(), 0);
    for (size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
    out.terms_.emplace(std::move(ne), c);
  }
  return out;
}

static std::string var_union(const std::string& a, const std::string& b) {
  std::string u;
  for (const char* v = kVarAlphabet; *v; ++v)
    if (a.find(*v) != std::string::npos || b.find(*v) != std::string::npos) u += *v;
  return u;
}

void MultiPoly::add_term(const Expt& e, const Cyclotomic& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    Cyclotomic v = it->second + c;
    if (v.is_zero())
      terms_.erase(it);
    else
      it->second = std::move(v);
  }
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  std::string u = var_union(vars_, o.vars_);
  MultiPoly a = aligned(u), out = o.aligned(u);
  for (auto& [e, c] : a.terms_) out.add_term(e, c);
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + o.scaled(Cyclotomic::from_rational(1, -1)); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  std::string u = var_union(vars_, o.vars_);
  MultiPoly a = aligned(u), b = o.aligned(u);
  MultiPoly out(u);
  for (auto& [ea, ca] : a.terms_) {
    for (auto& [eb, cb] : b.terms_) {
      Expt e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly MultiPoly::scaled(const Cyclotomic& c) const {
  MultiPoly out(vars_);
  if (c.is_zero()) return out;
  for (auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
  return out;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  std::string u = var_union(vars_, o.vars_);
  MultiPoly a = aligned(u), b = o.aligned(u);
  if (a.terms_.size() != b.terms_.size()) return false;
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end(); ++i, ++j) {
    if (i->first != j->first) return false;
    Cyclotomic x = i->second, y = j->second;
    uint32_t m = (uint32_t)lcm_u64(x.conductor(), y.conductor());
    if (x.embed(m) != y.embed(m)) return false;
  }
  return true;
}

MultiPoly MultiPoly::substitute(char var, const Rational& value) const {
  size_t pos = vars_.find(var);
  if (pos == std::string::npos) return *this;
  std::string nv = vars_;
  nv.erase(pos, 1);
  MultiPoly out(nv);
  for (auto& [e, c] : terms_) {
    Rational f(1);
    for (int k = 0; k < e[pos]; ++k) f *= value;
    Expt ne;
    ne.reserve(e.size() - 1);
    for (size_t i = 0; i < e.size(); ++i)
      if (i != pos) ne.push_back(e[i]);
    out.add_term(ne, c * f);
  }
  return out;
}

Cyclotomic MultiPoly::coefficient(const Expt& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Cyclotomic() : it->second;
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (auto& [e, c] : terms_) {
    int t = 0;
    for (int x : e) t += x;
    d = std::max(d, t);
  }
  return d;
}

static std::string render_monomial(const std::string& vars, const Expt& e,
                                   const Cyclotomic& c) {
  std::ostringstream os;
  bool any_var = false;
  for (int x : e)
    if (x > 0) any_var = true;
  bool coeff_shown = true;
  if (c.is_rational()) {
    Rational q = c.rational_value();
    if (any_var && q == 1) {
      coeff_shown = false;
    } else if (any_var && q == -1) {
      os << "-";
      coeff_shown = false;
    } else {
      os << render(q);
    }
  } else {
    os << "(" << c.render() << ")";
  }
  if (any_var) {
    bool first = !coeff_shown;
    for (size_t i = 0; i < vars.size(); ++i) {
      if (e[i] == 0) continue;
      if (!first || coeff_shown) os << "*";
      first = false;
      os << vars[i];
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

std::string MultiPoly::render() const {
  if (terms_.empty()) return "0";
  std::vector<const std::pair<const Expt, Cyclotomic>*> order;
  order.reserve(terms_.size());
  for (auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
    int da = 0, db = 0;
    for (int x : a->first) da += x;
    for (int x : b->first) db += x;
    if (da != db) return da > db;
    return a->first < b->first;
  });
  std::ostringstream os;
  bool first = true;
  for (auto* t : order) {
    std::string m = render_monomial(vars_, t->first, t->second);
    if (first) {
      os << m;
      first = false;
    } else if (!m.empty() && m[0] == '-') {
      os << " - " << m.substr(1);
    } else {
      os << " + " << m;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// TruncSeries

TruncSeries::TruncSeries(std::string vars, std::vector<int> bounds)
    : vars_(std::move(vars)), bounds_(std::move(bounds)) {
  check_vars(vars_);
  if (bounds_.size() != vars_.size()) throw ParseError("bounds arity mismatch");
}

TruncSeries TruncSeries::from_poly(const MultiPoly& p, std::vector<int> bounds) {
  TruncSeries s(p.vars(), std::move(bounds));
  for (auto& [e, c] : p.terms()) s.add_term(e, c);
  return s;
}

void TruncSeries::add_term(const Expt& e, const Cyclotomic& c) {
  for (size_t i = 0; i < e.size(); ++i)
    if (e[i] > bounds_[i]) return;
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    Cyclotomic v = it->second + c;
    if (v.is_zero())
      terms_.erase(it);
    else
      it->second = std::move(v);
  }
}

Cyclotomic TruncSeries::coefficient(const Expt& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Cyclotomic() : it->second;
}

static std::vector<int> bounds_intersect(const std::string& va, const std::vector<int>& ba,
                                         const std::string& vb, const std::vector<int>& bb,
                                         const std::string& u) {
  std::vector<int> out(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    int v = INT32_MAX;
    size_t pa = va.find(u[i]);
    size_t pb = vb.find(u[i]);
    if (pa != std::string::npos) v = std::min(v, ba[pa]);
    if (pb != std::string::npos) v = std::min(v, bb[pb]);
    out[i] = v;
  }
  return out;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
  std::string u = var_union(vars_, o.vars_);
  TruncSeries out(u, bounds_intersect(vars_, bounds_, o.vars_, o.bounds_, u));
  MultiPoly a = to_poly().aligned(u), b = o.to_poly().aligned(u);
  for (auto& [e, c] : a.terms()) out.add_term(e, c);
  for (auto& [e, c] : b.terms()) out.add_term(e, c);
  return out;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
  std::string u = var_union(vars_, o.vars_);
  TruncSeries out(u, bounds_intersect(vars_, bounds_, o.vars_, o.bounds_, u));
  MultiPoly a = to_poly().aligned(u), b = o.to_poly().aligned(u);
  for (auto& [ea, ca] : a.terms()) {
    for (auto& [eb, cb] : b.terms()) {
      Expt e(ea.size());
      bool ok = true;
      for (size_t i = 0; i < e.size(); ++i) {
        e[i] = ea[i] + eb[i];
        if (e[i] > out.bounds_[i]) {
          ok = false;
          break;
        }
      }
      if (ok) out.add_term(e, ca * cb);
    }
  }
  return out;
}

TruncSeries TruncSeries::scaled(const Cyclotomic& c) const {
  TruncSeries out(vars_, bounds_);
  if (c.is_zero()) return out;
  for (auto& [e, v] : terms_) {
    Cyclotomic p = v * c;
    if (!p.is_zero()) out.terms_.emplace(e, std::move(p));
  }
  return out;
}

TruncSeries TruncSeries::inverted() const {
  Expt zero(vars_.size(), 0);
  Cyclotomic c0 = coefficient(zero);
  if (c0.is_zero()) throw Error("series inverse needs invertible constant term");
  Cyclotomic c0i = c0.inverse();
  // f = c0 (1 - g), 1/f = (1/c0) sum g^k; g strictly raises total degree
  TruncSeries g(vars_, bounds_);
  for (auto& [e, c] : terms_) {
    if (e == zero) continue;
    g.add_term(e, -(c * c0i));
  }
  int maxdeg = 0;
  for (int b : bounds_) maxdeg += b;
  TruncSeries acc(vars_, bounds_);
  acc.add_term(zero, Cyclotomic::one(c0.conductor()));
  TruncSeries pw = acc;
  for (int k = 1; k <= maxdeg; ++k) {
    pw = pw * g;
    if (pw.terms_.empty()) break;
    acc = acc + pw;
  }
  return acc.scaled(c0i);
}

bool TruncSeries::operator==(const TruncSeries& o) const {
  return to_poly() == o.to_poly();
}

MultiPoly TruncSeries::to_poly() const {
  MultiPoly p(vars_);
  for (auto& [e, c] : terms_) p.add_term(e, c);
  return p;
}

// ---------------------------------------------------------------------------
// UniRational

UniRational::UniRational(UPoly n, UPoly d) : num(std::move(n)), den(std::move(d)) {
  upoly_trim(num);
  upoly_trim(den);
  if (den.empty()) throw DivideByZero();
  if (!den[0].is_zero()) {
    Cyclotomic inv = den[0].inverse();
    for (auto& c : num) c = c * inv;
    for (auto& c : den) c = c * inv;
  }
}

UniRational& UniRational::operator+=(const UniRational& o) {
  UPoly n = upoly_add(upoly_mul(num, o.den), upoly_mul(o.num, den));
  UPoly d = upoly_mul(den, o.den);
  *this = UniRational(std::move(n), std::move(d));
  return *this;
}

int pole_order_at_one(const UniRational& f) {
  return upoly_mult_at_one(f.den) - upoly_mult_at_one(f.num);
}

// ---------------------------------------------------------------------------
// degree extraction

std::vector<int> extract_factor_degrees(const std::vector<Rational>& series,
                                        const BigInt& group_order, int degree_bound) {
  std::vector<Rational> run(series.begin(),
                            series.begin() + std::min<size_t>(series.size(), degree_bound + 1));
  if (run.empty() || run[0] != 1)
    throw StructureError("not a polynomial invariant ring: constant term != 1");
  std::vector<int> degrees;
  BigInt prod(1);
  for (;;) {
    int j = 0;
    for (int i = 1; i < (int)run.size(); ++i) {
      if (run[i] != 0) {
        j = i;
        break;
      }
    }
    if (j == 0) break;  // running product is 1 up to the bound
    if (run[j] < 0)
      throw StructureError("not a polynomial invariant ring: negative deviation at degree " +
                           std::to_string(j));
    degrees.push_back(j);
    prod *= j;
    if (prod > group_order)
      throw StructureError("not a polynomial invariant ring: degree product exceeds group order");
    // run *= (1 - x^j)
    for (int i = (int)run.size() - 1; i >= j; --i) run[i] -= run[i - j];
  }
  if (prod != group_order)
    throw StructureError("not a polynomial invariant ring: degree product != group order");
  return degrees;
}

std::vector<Rational> to_rational_series(const TruncSeries& s, int bound) {
  if (s.vars().size() != 1) throw Error("univariate series expected");
  std::vector<Rational> out(bound + 1, Rational(0));
  for (auto& [e, c] : s.terms()) {
    if (e[0] > bound) continue;
    if (!c.is_rational())
      throw StructureError("series coefficient not rational: " + c.render());
    out[e[0]] = c.rational_value();
  }
  return out;
}

std::vector<int> extract_factor_degrees(const TruncSeries& molien,
                                        const BigInt& group_order, int degree_bound) {
  return extract_factor_degrees(to_rational_series(molien, degree_bound), group_order,
                                degree_bound);
}

}  // namespace crg
