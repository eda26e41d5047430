#include "crg/group.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "crg/errors.hpp"
#include "json.hpp"

namespace crg {

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec GroupSpec::imprimitive(uint32_t m, uint32_t p, uint32_t r) {
  if (m == 0 || r == 0 || p == 0 || m % p != 0)
    throw ParseError("imprimitive spec needs m,r >= 1 and p | m");
  GroupSpec s;
  s.kind = Kind::Imprimitive;
  s.m = m;
  s.p = p;
  s.r = r;
  return s;
}

GroupSpec GroupSpec::exceptional(int st) {
  GroupSpec s;
  s.kind = Kind::Exceptional;
  s.st = st;
  return s;
}

GroupSpec GroupSpec::explicit_group(std::vector<CycMatrix> gens, std::string label) {
  if (gens.empty()) throw ParseError("explicit group needs at least one generator");
  GroupSpec s;
  s.kind = Kind::Explicit;
  s.generators = std::move(gens);
  s.label = std::move(label);
  return s;
}

GroupSpec GroupSpec::parse(const std::string& text) {
  if (text.size() > 2 && (text[0] == 'S' || text[0] == 's') && (text[1] == 'T' || text[1] == 't')) {
    int st = std::stoi(text.substr(2));
    return exceptional(st);
  }
  if (!text.empty() && (text[0] == 'G' || text[0] == 'g')) {
    unsigned m, p, r;
    if (std::sscanf(text.c_str() + 1, "(%u,%u,%u)", &m, &p, &r) == 3)
      return imprimitive(m, p, r);
  }
  throw ParseError("cannot parse group spec '" + text + "' (expected G(m,p,r) or ST<n>)");
}

std::string GroupSpec::format() const {
  switch (kind) {
    case Kind::Imprimitive: {
      std::ostringstream os;
      os << "G(" << m << "," << p << "," << r << ")";
      return os.str();
    }
    case Kind::Exceptional:
      return "ST" + std::to_string(st);
    case Kind::Explicit:
      return label.empty() ? "<explicit>" : label;
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::identity(uint32_t rank) {
  Monomial g;
  g.r = (uint8_t)rank;
  for (uint32_t i = 0; i < rank; ++i) g.perm[i] = (uint8_t)i;
  return g;
}

Monomial Monomial::compose(const Monomial& rhs, uint32_t m) const {
  // (this * rhs): rhs sends e_j to zeta^rhs.phase[j] e_{rhs.perm[j]}
  Monomial out;
  out.r = r;
  for (uint32_t j = 0; j < r; ++j) {
    uint32_t k = rhs.perm[j];
    out.perm[j] = perm[k];
    out.phase[j] = (uint16_t)((rhs.phase[j] + phase[k]) % m);
  }
  return out;
}

Monomial Monomial::inverse(uint32_t m) const {
  Monomial out;
  out.r = r;
  for (uint32_t j = 0; j < r; ++j) {
    out.perm[perm[j]] = (uint8_t)j;
    out.phase[perm[j]] = (uint16_t)(phase[j] == 0 ? 0 : m - phase[j]);
  }
  return out;
}

bool Monomial::is_identity() const {
  for (uint32_t i = 0; i < r; ++i)
    if (perm[i] != i || phase[i] != 0) return false;
  return true;
}

bool Monomial::operator==(const Monomial& o) const {
  if (r != o.r) return false;
  for (uint32_t i = 0; i < r; ++i)
    if (perm[i] != o.perm[i] || phase[i] != o.phase[i]) return false;
  return true;
}

bool Monomial::operator<(const Monomial& o) const {
  if (r != o.r) return r < o.r;
  for (uint32_t i = 0; i < r; ++i) {
    if (perm[i] != o.perm[i]) return perm[i] < o.perm[i];
    if (phase[i] != o.phase[i]) return phase[i] < o.phase[i];
  }
  return false;
}

std::size_t MonomialHash::operator()(const Monomial& g) const {
  std::size_t h = g.r;
  for (uint32_t i = 0; i < g.r; ++i) {
    hash_mix(h, g.perm[i]);
    hash_mix(h, g.phase[i]);
  }
  return h;
}

namespace {

struct Cycle {
  uint32_t length;
  uint32_t phase_sum;  // mod m
};

std::vector<Cycle> cycle_decomposition(const Monomial& g, uint32_t m) {
  std::vector<Cycle> out;
  bool seen[Monomial::kMaxRank] = {};
  for (uint32_t s = 0; s < g.r; ++s) {
    if (seen[s]) continue;
    uint32_t len = 0, sum = 0, j = s;
    do {
      seen[j] = true;
      sum += g.phase[j];
      j = g.perm[j];
      ++len;
    } while (j != s);
    out.push_back({len, sum % m});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// exceptional data

namespace {

const char* kExceptionalJson[] = {
#include "exceptional_data.inc"
};

struct ExceptionalData {
  int st;
  uint32_t conductor, rank;
  uint64_t order;
  std::vector<int> degrees;
  uint32_t reflections;
  std::vector<CycMatrix> generators;
};

const std::map<int, ExceptionalData>& exceptional_table() {
  static std::map<int, ExceptionalData> table = [] {
    std::map<int, ExceptionalData> t;
    for (const char* text : kExceptionalJson) {
      if (text == nullptr) continue;
      auto j = nlohmann::json::parse(text);
      ExceptionalData d;
      d.st = j.at("st").get<int>();
      d.conductor = j.at("conductor").get<uint32_t>();
      d.rank = j.at("rank").get<uint32_t>();
      d.order = j.at("order").get<uint64_t>();
      d.degrees = j.at("degrees").get<std::vector<int>>();
      d.reflections = j.at("reflections").get<uint32_t>();
      long den = j.at("denominator").get<long>();
      for (auto& jg : j.at("generators")) {
        CycMatrix g(d.rank, d.rank, d.conductor);
        for (uint32_t i = 0; i < d.rank; ++i) {
          for (uint32_t c = 0; c < d.rank; ++c) {
            std::vector<Cyclotomic::Term> terms;
            auto coeffs = jg.at(i).at(c).get<std::vector<long>>();
            for (uint32_t e = 0; e < coeffs.size(); ++e)
              if (coeffs[e] != 0) terms.emplace_back(e, rat(coeffs[e], den));
            g.set(i, c, Cyclotomic::from_terms(d.conductor, std::move(terms)));
          }
        }
        d.generators.push_back(std::move(g));
      }
      t[d.st] = std::move(d);
    }
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<int>& supported_st_numbers() {
  static std::vector<int> v = [] {
    std::vector<int> out;
    for (auto& [st, d] : exceptional_table()) out.push_back(st);
    return out;
  }();
  return v;
}

// ---------------------------------------------------------------------------
// ReflectionGroup

struct ReflectionGroup::LazyCaches {
  std::mutex mu;
  std::vector<std::vector<std::pair<uint32_t, int>>> eigen;  // empty = not computed
  std::optional<std::vector<std::vector<uint32_t>>> refl_classes;
  std::optional<std::vector<HyperplaneOrbit>> hyper;
  std::optional<bool> galois_stable;
  std::optional<std::vector<int>> degrees;
};

CycMatrix ReflectionGroup::matrix(uint32_t i) const {
  if (!monomial_backend_) return mats_[i];
  const Monomial& g = mono_[i];
  CycMatrix m(rank_, rank_, ambient_);
  uint32_t scale = ambient_ / conductor_m_;
  for (uint32_t j = 0; j < rank_; ++j)
    m.set(g.perm[j], j, Cyclotomic::root(ambient_, (long)g.phase[j] * scale));
  return m;
}

uint32_t ReflectionGroup::mul(uint32_t i, uint32_t j) const {
  if (monomial_backend_) {
    Monomial p = mono_[i].compose(mono_[j], conductor_m_);
    auto it = mono_index_.find(p);
    if (it == mono_index_.end()) throw StructureError("element set not closed under product");
    return it->second;
  }
  CycMatrix p = mats_[i] * mats_[j];
  auto it = mat_index_.find(p);
  if (it == mat_index_.end()) throw StructureError("element set not closed under product");
  return it->second;
}

uint32_t ReflectionGroup::conjugate(uint32_t g, uint32_t x) const {
  return mul(mul(g, x), inverse_[g]);
}

std::optional<uint32_t> ReflectionGroup::find(const CycMatrix& m) const {
  if (monomial_backend_) {
    // convert to monomial form if possible
    Monomial g;
    g.r = (uint8_t)rank_;
    uint32_t scale = ambient_ / conductor_m_;
    CycMatrix mm = m.conductor() == ambient_ ? m : m.embed(ambient_);
    for (uint32_t j = 0; j < rank_; ++j) {
      int found = -1;
      for (uint32_t i = 0; i < rank_; ++i) {
        if (mm.at(i, j).is_zero()) continue;
        if (found >= 0) return std::nullopt;
        found = (int)i;
      }
      if (found < 0) return std::nullopt;
      auto ord = mm.at(found, j).root_order();
      if (!ord) return std::nullopt;
      // must be zeta_ambient^(t*scale)
      bool ok = false;
      for (uint32_t t = 0; t < conductor_m_; ++t) {
        if (Cyclotomic::root(ambient_, (long)t * scale) == mm.at((uint32_t)found, j)) {
          g.perm[j] = (uint8_t)found;
          g.phase[j] = (uint16_t)t;
          ok = true;
          break;
        }
      }
      if (!ok) return std::nullopt;
    }
    return find_monomial(g);
  }
  CycMatrix mm = m.conductor() == ambient_ ? m : m.embed(ambient_);
  auto it = mat_index_.find(mm);
  if (it == mat_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<uint32_t> ReflectionGroup::find_monomial(const Monomial& m) const {
  auto it = mono_index_.find(m);
  if (it == mono_index_.end()) return std::nullopt;
  return it->second;
}

UPoly char_poly_of_cycles(const std::vector<Cycle>& cycles, uint32_t m, uint32_t ambient) {
  // det(1 - x g) = prod over cycles (1 - zeta_m^s x^L)
  uint32_t scale = ambient / m;
  UPoly acc{Cyclotomic::one(ambient)};
  for (auto& c : cycles) {
    UPoly f((size_t)c.length + 1, Cyclotomic::zero(ambient));
    f[0] = Cyclotomic::one(ambient);
    f[c.length] = -Cyclotomic::root(ambient, (long)c.phase_sum * scale);
    acc = upoly_mul(acc, f);
  }
  return acc;
}

UPoly ReflectionGroup::char_poly(uint32_t i) const {
  if (monomial_backend_)
    return char_poly_of_cycles(cycle_decomposition(mono_[i], conductor_m_), conductor_m_,
                               ambient_);
  return det_one_minus_xg(mats_[i]);
}

const std::vector<std::pair<uint32_t, int>>& ReflectionGroup::eigen_exponents(uint32_t i) const {
  std::lock_guard<std::mutex> g(lazy_->mu);
  if (lazy_->eigen.empty()) lazy_->eigen.resize(size_);
  auto& slot = lazy_->eigen[i];
  if (!slot.empty() || rank_ == 0) return slot;
  std::map<uint32_t, int> acc;
  if (monomial_backend_) {
    uint32_t scale = ambient_ / conductor_m_;
    for (auto& c : cycle_decomposition(mono_[i], conductor_m_)) {
      // solve L*t = s*scale (mod ambient); exactly L solutions
      uint64_t L = c.length, A = ambient_, cc = (uint64_t)c.phase_sum * scale % A;
      uint64_t g0 = std::gcd(L, A);
      if (cc % g0 != 0) throw StructureError("eigenvalue congruence unsolvable");
      uint64_t Ap = A / g0, Lp = L / g0, cp = (cc / g0) % Ap;
      // inverse of Lp mod Ap
      long x0 = 1, x1 = 0;
      long r0 = (long)(Lp % Ap), r1 = (long)Ap;
      while (r1) {
        long q = r0 / r1;
        std::swap(r0 -= q * r1, r1);
        std::swap(x0 -= q * x1, x1);
      }
      uint64_t inv = (uint64_t)(((x0 % (long)Ap) + (long)Ap) % (long)Ap);
      uint64_t t0 = cp * inv % Ap;
      for (uint64_t j = 0; j < g0; ++j) acc[(uint32_t)((t0 + j * Ap) % A)] += 1;
    }
  } else {
    auto ev = eigenvalues(mats_[i], element_order(i));
    for (auto& [lam, mult] : ev) {
      bool found = false;
      for (uint32_t t = 0; t < ambient_; ++t) {
        if (Cyclotomic::root(ambient_, t) == lam) {
          acc[t] += mult;
          found = true;
          break;
        }
      }
      if (!found) throw StructureError("eigenvalue not a power of the ambient root");
    }
  }
  slot.assign(acc.begin(), acc.end());
  return slot;
}

void ReflectionGroup::build_monomial_list(uint64_t cap) {
  uint32_t m = spec_.m, p = spec_.p, r = spec_.r;
  if (r > Monomial::kMaxRank) throw CapExceeded("rank exceeds monomial backend limit");
  BigInt count = 1;
  for (uint32_t i = 0; i < r; ++i) count *= m;
  count /= p;
  count *= factorial(r);
  if (count > (long)cap)
    throw CapExceeded("group order " + count.get_str() + " exceeds element cap " +
                      std::to_string(cap));
  rank_ = r;
  conductor_m_ = m;
  monomial_backend_ = true;
  std::vector<uint8_t> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // phases: first r-1 free, the last constrained to sum = 0 mod p
    std::vector<uint16_t> ph(r, 0);
    for (;;) {
      uint32_t partial = 0;
      for (uint32_t i = 0; i + 1 < r; ++i) partial += ph[i];
      uint32_t residue = (p - partial % p) % p;
      for (uint32_t last = residue; last < m; last += p) {
        Monomial g;
        g.r = (uint8_t)r;
        for (uint32_t i = 0; i < r; ++i) g.perm[i] = perm[i];
        for (uint32_t i = 0; i + 1 < r; ++i) g.phase[i] = ph[i];
        g.phase[r - 1] = (uint16_t)last;
        mono_.push_back(g);
      }
      // odometer over the first r-1 digits
      uint32_t i = 0;
      for (; i + 1 < r; ++i) {
        if (++ph[i] < m) break;
        ph[i] = 0;
      }
      if (i + 1 >= r) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

void ReflectionGroup::closure_from_generators(const std::vector<CycMatrix>& gens, uint64_t cap) {
  if (gens.empty()) throw ParseError("closure needs generators");
  rank_ = gens[0].rows();
  monomial_backend_ = false;
  uint32_t n = gens[0].conductor();
  for (auto& g : gens) n = (uint32_t)lcm_u64(n, g.conductor());
  std::vector<CycMatrix> gg;
  for (auto& g : gens) gg.push_back(g.conductor() == n ? g : g.embed(n));
  std::unordered_map<CycMatrix, uint32_t, CycMatrixHash> seen;
  std::vector<CycMatrix> list;
  list.push_back(CycMatrix::identity(rank_, n));
  seen.emplace(list[0], 0);
  for (size_t head = 0; head < list.size(); ++head) {
    for (auto& g : gg) {
      CycMatrix p = list[head] * g;
      if (seen.emplace(p, (uint32_t)list.size()).second) {
        list.push_back(std::move(p));
        if (list.size() > cap)
          throw CapExceeded("closure exceeds element cap " + std::to_string(cap));
      }
    }
  }
  mats_ = std::move(list);
}

void ReflectionGroup::finalize() {
  lazy_.reset(new LazyCaches);
  if (monomial_backend_) {
    std::sort(mono_.begin(), mono_.end());
    size_ = mono_.size();
    mono_index_.reserve(size_ * 2);
    for (uint32_t i = 0; i < size_; ++i) mono_index_.emplace(mono_[i], i);
    if (mono_index_.size() != size_) throw StructureError("duplicate elements");
    fix_.resize(size_);
    order_.resize(size_);
    inverse_.resize(size_);
    exponent_ = 1;
    for (uint32_t i = 0; i < size_; ++i) {
      auto cyc = cycle_decomposition(mono_[i], conductor_m_);
      int f = 0;
      uint64_t ord = 1;
      for (auto& c : cyc) {
        if (c.phase_sum == 0) ++f;
        uint64_t block = (uint64_t)c.length * (conductor_m_ / std::gcd(conductor_m_, c.phase_sum == 0 ? conductor_m_ : c.phase_sum));
        ord = lcm_u64(ord, block);
      }
      fix_[i] = f;
      order_[i] = ord;
      exponent_ = lcm_u64(exponent_, ord);
      auto it = mono_index_.find(mono_[i].inverse(conductor_m_));
      if (it == mono_index_.end()) throw StructureError("element set not closed under inverse");
      inverse_[i] = it->second;
      if (mono_[i].is_identity()) identity_ = i;
    }
    ambient_ = (uint32_t)lcm_u64(conductor_m_, exponent_);
  } else {
    uint32_t n0 = mats_.empty() ? 1 : mats_[0].conductor();
    size_ = mats_.size();
    // orders and exponent first: the ambient conductor depends on them
    exponent_ = 1;
    order_.resize(size_);
    for (uint32_t i = 0; i < size_; ++i) {
      uint64_t ord = 1;
      CycMatrix p = mats_[i];
      while (!p.is_identity()) {
        p = p * mats_[i];
        if (++ord > size_) throw StructureError("element order exceeds group order");
      }
      order_[i] = ord;
      exponent_ = lcm_u64(exponent_, ord);
    }
    ambient_ = (uint32_t)lcm_u64(n0, exponent_);
    if (ambient_ != n0) {
      for (auto& m : mats_) m = m.embed(ambient_);
    }
    std::vector<uint32_t> by_key(size_);
    std::iota(by_key.begin(), by_key.end(), 0);
    std::sort(by_key.begin(), by_key.end(),
              [&](uint32_t a, uint32_t b) { return mats_[a] < mats_[b]; });
    {
      std::vector<CycMatrix> sm(size_);
      std::vector<uint64_t> so(size_);
      for (uint32_t i = 0; i < size_; ++i) {
        sm[i] = std::move(mats_[by_key[i]]);
        so[i] = order_[by_key[i]];
      }
      mats_ = std::move(sm);
      order_ = std::move(so);
    }
    mat_index_.reserve(size_ * 2);
    for (uint32_t i = 0; i < size_; ++i) mat_index_.emplace(mats_[i], i);
    if (mat_index_.size() != size_) throw StructureError("duplicate elements");
    fix_.resize(size_);
    inverse_.resize(size_);
    for (uint32_t i = 0; i < size_; ++i) {
      fix_[i] = fixed_space_dim(mats_[i]);
      auto it = mat_index_.find(mats_[i].inverse());
      if (it == mat_index_.end()) throw StructureError("element set not closed under inverse");
      inverse_[i] = it->second;
      if (mats_[i].is_identity()) identity_ = i;
    }
  }
  // reflections
  reflections_.clear();
  for (uint32_t i = 0; i < size_; ++i) {
    if (i != identity_ && fix_[i] == (int)rank_ - 1) reflections_.push_back(i);
  }
}

GroupPtr ReflectionGroup::build(const GroupSpec& spec, uint64_t cap) {
  std::shared_ptr<ReflectionGroup> g(new ReflectionGroup);
  g->spec_ = spec;
  switch (spec.kind) {
    case GroupSpec::Kind::Imprimitive: {
      g->build_monomial_list(cap);
      g->finalize();
      // standard generators
      std::vector<Monomial> gens;
      uint32_t m = spec.m, p = spec.p, r = spec.r;
      for (uint32_t i = 0; i + 1 < r; ++i) {
        Monomial t = Monomial::identity(r);
        std::swap(t.perm[i], t.perm[i + 1]);
        gens.push_back(t);
      }
      if (p < m) {
        Monomial d = Monomial::identity(r);
        d.phase[0] = (uint16_t)p;
        gens.push_back(d);
      }
      if (p > 1 && r >= 2) {
        Monomial t = Monomial::identity(r);
        std::swap(t.perm[0], t.perm[1]);
        t.phase[0] = 1;
        t.phase[1] = (uint16_t)(m - 1);
        gens.push_back(t);
      }
      if (gens.empty()) gens.push_back(Monomial::identity(r));
      for (auto& mg : gens) g->gens_.push_back(*g->find_monomial(mg));
      break;
    }
    case GroupSpec::Kind::Exceptional: {
      auto& table = exceptional_table();
      auto it = table.find(spec.st);
      if (it == table.end())
        throw ParseError("unsupported exceptional group ST" + std::to_string(spec.st));
      const ExceptionalData& d = it->second;
      g->closure_from_generators(d.generators, cap);
      g->finalize();
      if (g->size_ != d.order)
        throw StructureError("exceptional data: closure order mismatch for ST" +
                             std::to_string(spec.st));
      if (g->reflections_.size() != d.reflections)
        throw StructureError("exceptional data: reflection count mismatch for ST" +
                             std::to_string(spec.st));
      // degree check through the fixed-space polynomial:
      // sum_g q^fix(g) must equal prod_i (q + d_i - 1)
      {
        std::vector<BigInt> lhs(g->rank_ + 1);
        for (uint32_t i = 0; i < g->size_; ++i) lhs[g->fix_[i]] += 1;
        std::vector<BigInt> rhs{1};
        for (int deg : d.degrees) {
          std::vector<BigInt> nxt(rhs.size() + 1);
          for (size_t i = 0; i < rhs.size(); ++i) {
            nxt[i + 1] += rhs[i];
            nxt[i] += rhs[i] * (deg - 1);
          }
          rhs = std::move(nxt);
        }
        if (lhs != rhs)
          throw StructureError("exceptional data: degree multiset mismatch for ST" +
                               std::to_string(spec.st));
      }
      Expected e;
      e.order = d.order;
      e.degrees = d.degrees;
      e.reflections = d.reflections;
      g->expected_ = e;
      for (auto& gm : d.generators) {
        auto idx = g->find(gm);
        if (!idx) throw StructureError("generator missing from closure");
        g->gens_.push_back(*idx);
      }
      break;
    }
    case GroupSpec::Kind::Explicit: {
      g->closure_from_generators(spec.generators, cap);
      g->finalize();
      for (auto& gm : spec.generators) {
        auto idx = g->find(gm);
        if (!idx) throw StructureError("generator missing from closure");
        g->gens_.push_back(*idx);
      }
      break;
    }
  }
  return g;
}

GroupPtr ReflectionGroup::subgroup(const ReflectionGroup& parent, std::vector<uint32_t> indices,
                                   std::string label) {
  std::shared_ptr<ReflectionGroup> g(new ReflectionGroup);
  g->spec_ = GroupSpec();
  g->spec_.kind = GroupSpec::Kind::Explicit;
  g->spec_.label = std::move(label);
  g->rank_ = parent.rank_;
  if (parent.monomial_backend_) {
    g->monomial_backend_ = true;
    g->conductor_m_ = parent.conductor_m_;
    for (uint32_t i : indices) g->mono_.push_back(parent.mono_[i]);
  } else {
    for (uint32_t i : indices) g->mats_.push_back(parent.mats_[i]);
  }
  g->finalize();
  // keep the ambient context of the parent
  g->ambient_ = parent.ambient_;
  if (!parent.monomial_backend_ && !g->mats_.empty() &&
      g->mats_[0].conductor() != parent.ambient_) {
    // elements were copied at the parent ambient already
  }
  // greedy small generating set, preferring reflections
  std::vector<uint32_t> cand = g->reflections_;
  for (uint32_t i = 0; i < g->size_; ++i) cand.push_back(i);
  std::vector<uint32_t> gens;
  std::vector<uint32_t> closed{g->identity_};
  for (uint32_t c : cand) {
    if (std::binary_search(closed.begin(), closed.end(), c)) continue;
    gens.push_back(c);
    closed = g->close_subgroup(gens);
    if (closed.size() == g->size_) break;
  }
  if (closed.size() != g->size_) throw StructureError("subgroup closure failed");
  g->gens_ = gens.empty() ? std::vector<uint32_t>{g->identity_} : gens;
  return g;
}

std::vector<uint32_t> ReflectionGroup::close_subgroup(std::vector<uint32_t> seed) const {
  std::vector<char> in(size_, 0);
  std::vector<uint32_t> list;
  auto push = [&](uint32_t i) {
    if (!in[i]) {
      in[i] = 1;
      list.push_back(i);
    }
  };
  push(identity_);
  for (uint32_t s : seed) push(s);
  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
  for (size_t head = 0; head < list.size(); ++head) {
    for (uint32_t s : seed) push(mul(list[head], s));
  }
  std::sort(list.begin(), list.end());
  return list;
}

bool ReflectionGroup::is_normal_subset(const std::vector<uint32_t>& sorted) const {
  for (uint32_t g : gens_) {
    for (uint32_t x : sorted) {
      if (!std::binary_search(sorted.begin(), sorted.end(), conjugate(g, x))) return false;
    }
  }
  return true;
}

const std::vector<std::vector<uint32_t>>& ReflectionGroup::reflection_classes() const {
  std::lock_guard<std::mutex> lk(lazy_->mu);
  if (lazy_->refl_classes) return *lazy_->refl_classes;
  std::vector<std::vector<uint32_t>> classes;
  std::vector<char> placed(size_, 0);
  for (uint32_t s : reflections_) {
    if (placed[s]) continue;
    std::vector<uint32_t> orbit{s};
    placed[s] = 1;
    for (size_t head = 0; head < orbit.size(); ++head) {
      for (uint32_t g : gens_) {
        uint32_t y = conjugate(g, orbit[head]);
        if (!placed[y]) {
          placed[y] = 1;
          orbit.push_back(y);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    classes.push_back(std::move(orbit));
  }
  // canonical order: size, then least element in the canonical element order
  std::sort(classes.begin(), classes.end(), [](auto& a, auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a[0] < b[0];
  });
  lazy_->refl_classes = std::move(classes);
  return *lazy_->refl_classes;
}

const std::vector<ReflectionGroup::HyperplaneOrbit>& ReflectionGroup::hyperplane_orbits() const {
  {
    std::lock_guard<std::mutex> lk(lazy_->mu);
    if (lazy_->hyper) return *lazy_->hyper;
  }
  // normalized defining covector of the reflecting hyperplane: first nonzero
  // row of (1 - s), scaled so its first nonzero coordinate is 1
  auto covector = [&](uint32_t s) {
    CycMatrix d = CycMatrix::identity(rank_, ambient_) - matrix(s);
    for (uint32_t i = 0; i < rank_; ++i) {
      int first = -1;
      for (uint32_t j = 0; j < rank_; ++j) {
        if (!d.at(i, j).is_zero()) {
          first = (int)j;
          break;
        }
      }
      if (first < 0) continue;
      std::vector<Cyclotomic> row(rank_, Cyclotomic::zero(ambient_));
      row[first] = Cyclotomic::one(ambient_);
      if ((uint32_t)first + 1 < rank_) {
        Cyclotomic inv = d.at(i, (uint32_t)first).inverse();
        for (uint32_t j = first + 1; j < rank_; ++j) row[j] = d.at(i, j) * inv;
      }
      return row;
    }
    throw StructureError("not a reflection");
  };
  std::map<std::vector<Cyclotomic>, uint32_t> hyp_ids;
  std::vector<uint32_t> refl_hyp(reflections_.size());
  std::unordered_map<uint32_t, uint32_t> refl_pos;
  for (uint32_t k = 0; k < reflections_.size(); ++k) refl_pos[reflections_[k]] = k;
  for (uint32_t k = 0; k < reflections_.size(); ++k) {
    auto cov = covector(reflections_[k]);
    auto it = hyp_ids.emplace(std::move(cov), (uint32_t)hyp_ids.size());
    refl_hyp[k] = it.first->second;
  }
  // union hyperplanes along conjugation by generators
  std::vector<uint32_t> parent(hyp_ids.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<uint32_t(uint32_t)> find_root = [&](uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (uint32_t k = 0; k < reflections_.size(); ++k) {
    for (uint32_t g : gens_) {
      uint32_t y = conjugate(g, reflections_[k]);
      uint32_t a = find_root(refl_hyp[k]);
      uint32_t b = find_root(refl_hyp[refl_pos.at(y)]);
      if (a != b) parent[a] = b;
    }
  }
  std::map<uint32_t, HyperplaneOrbit> comps;
  std::map<uint32_t, std::vector<char>> seen_hyp;
  for (uint32_t k = 0; k < reflections_.size(); ++k) {
    uint32_t root = find_root(refl_hyp[k]);
    auto& orbit = comps[root];
    orbit.reflections.push_back(reflections_[k]);
    auto& seen = seen_hyp[root];
    seen.resize(hyp_ids.size(), 0);
    if (!seen[refl_hyp[k]]) {
      seen[refl_hyp[k]] = 1;
      orbit.hyperplane_count += 1;
    }
  }
  std::vector<HyperplaneOrbit> orbits;
  for (auto& [root, o] : comps) orbits.push_back(std::move(o));
  std::sort(orbits.begin(), orbits.end(), [](auto& a, auto& b) {
    if (a.hyperplane_count != b.hyperplane_count) return a.hyperplane_count < b.hyperplane_count;
    return a.reflections[0] < b.reflections[0];
  });
  std::lock_guard<std::mutex> lk(lazy_->mu);
  if (!lazy_->hyper) lazy_->hyper = std::move(orbits);
  return *lazy_->hyper;
}

GroupPtr ReflectionGroup::twist(long k) const {
  long km = k % (long)ambient_;
  if (km < 0) km += ambient_;
  if (ambient_ > 1 && std::gcd((uint32_t)km, ambient_) != 1)
    throw ConductorError("twist parameter not coprime to conductor");
  std::shared_ptr<ReflectionGroup> g(new ReflectionGroup);
  g->spec_ = GroupSpec();
  g->spec_.kind = GroupSpec::Kind::Explicit;
  g->spec_.label = spec_.format() + "^sigma_" + std::to_string(km);
  g->rank_ = rank_;
  if (monomial_backend_) {
    g->monomial_backend_ = true;
    g->conductor_m_ = conductor_m_;
    g->mono_.reserve(size_);
    for (auto& m : mono_) {
      Monomial t = m;
      for (uint32_t j = 0; j < rank_; ++j)
        t.phase[j] = (uint16_t)((uint64_t)m.phase[j] * (uint64_t)km % conductor_m_);
      g->mono_.push_back(t);
    }
  } else {
    g->mats_.reserve(size_);
    for (auto& m : mats_) g->mats_.push_back(m.galois(km));
  }
  g->finalize();
  g->ambient_ = ambient_;
  if (g->size_ != size_) throw StructureError("twist changed the group order");
  for (uint32_t gi : gens_) {
    if (monomial_backend_) {
      Monomial t = mono_[gi];
      for (uint32_t j = 0; j < rank_; ++j)
        t.phase[j] = (uint16_t)((uint64_t)mono_[gi].phase[j] * (uint64_t)km % conductor_m_);
      g->gens_.push_back(*g->find_monomial(t));
    } else {
      g->gens_.push_back(*g->find(mats_[gi].galois(km)));
    }
  }
  return g;
}

bool ReflectionGroup::galois_stable() const {
  {
    std::lock_guard<std::mutex> lk(lazy_->mu);
    if (lazy_->galois_stable) return *lazy_->galois_stable;
  }
  bool stable = true;
  if (!monomial_backend_) {
    const CycContext& ctx = CycContext::get(ambient_);
    for (uint32_t k : ctx.unit_gens()) {
      for (uint32_t gi : gens_) {
        if (!find(mats_[gi].galois(k))) {
          stable = false;
          break;
        }
      }
      if (!stable) break;
    }
  }
  std::lock_guard<std::mutex> lk(lazy_->mu);
  lazy_->galois_stable = stable;
  return stable;
}

bool ReflectionGroup::same_element_set(const ReflectionGroup& o) const {
  if (size_ != o.size_ || rank_ != o.rank_) return false;
  if (monomial_backend_ && o.monomial_backend_ && conductor_m_ == o.conductor_m_)
    return mono_ == o.mono_;
  for (uint32_t i = 0; i < size_; ++i) {
    if (!o.find(matrix(i))) return false;
  }
  return true;
}

std::optional<std::vector<int>> ReflectionGroup::cached_degrees() const {
  std::lock_guard<std::mutex> lk(lazy_->mu);
  return lazy_->degrees;
}

void ReflectionGroup::cache_degrees(std::vector<int> d) const {
  std::lock_guard<std::mutex> lk(lazy_->mu);
  lazy_->degrees = std::move(d);
}

}  // namespace crg
