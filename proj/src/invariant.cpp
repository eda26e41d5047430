#include "crg/invariant.hpp"

#include <algorithm>
#include <deque>

#include "crg/errors.hpp"

namespace crg {

namespace {

// canonical comparison helpers for dedup keys

int cmp_cyc(const Cyclotomic& a, const Cyclotomic& b) {
  if (a == b) return 0;
  return a < b ? -1 : 1;
}

int cmp_upoly(const UPoly& a, const UPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i) {
    int c = cmp_cyc(a[i], b[i]);
    if (c) return c;
  }
  return 0;
}

int cmp_poly(const MultiPoly& a, const MultiPoly& b) {
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
    int c = cmp_cyc(ia->second, ib->second);
    if (c) return c;
  }
  if (ia != a.terms().end()) return 1;
  if (ib != b.terms().end()) return -1;
  return 0;
}

MultiPoly poly_galois(const MultiPoly& p, long k) {
  MultiPoly out(p.vars());
  for (auto& [e, c] : p.terms()) out.add_term(e, c.galois(k));
  return out;
}

struct ItemKey {
  // monomial backend: eigenstructure as sorted (cycle length, ambient phase)
  std::vector<std::pair<uint32_t, uint32_t>> cycles;
  // matrix backend: the characteristic polynomial itself
  UPoly den;
  MultiPoly weight;
  bool mono = false;

  bool operator<(const ItemKey& o) const {
    if (mono != o.mono) return mono < o.mono;
    if (cycles != o.cycles) return cycles < o.cycles;
    int c = cmp_upoly(den, o.den);
    if (c) return c < 0;
    return cmp_poly(weight, o.weight) < 0;
  }

  ItemKey galois(long k, uint32_t ambient) const {
    ItemKey out;
    out.mono = mono;
    if (mono) {
      out.cycles = cycles;
      for (auto& [L, t] : out.cycles) t = (uint32_t)((uint64_t)t * (uint64_t)k % ambient);
      std::sort(out.cycles.begin(), out.cycles.end());
    } else {
      out.den.reserve(den.size());
      for (auto& c : den) out.den.push_back(c.galois(k));
    }
    out.weight = poly_galois(weight, k);
    return out;
  }
};

struct ItemData {
  uint64_t count = 0;
  uint32_t rep = 0;
};

// cycle structure with phases converted to ambient-conductor exponents
std::vector<std::pair<uint32_t, uint32_t>> monomial_cycles(const ReflectionGroup& G,
                                                           uint32_t i) {
  const Monomial& g = G.monomial(i);
  uint32_t m = G.phase_modulus();
  uint32_t scale = G.conductor() / m;
  std::vector<std::pair<uint32_t, uint32_t>> out;
  bool seen[Monomial::kMaxRank] = {};
  for (uint32_t s = 0; s < g.r; ++s) {
    if (seen[s]) continue;
    uint32_t len = 0;
    uint64_t sum = 0;
    uint32_t j = s;
    do {
      seen[j] = true;
      sum += g.phase[j];
      j = g.perm[j];
      ++len;
    } while (j != s);
    out.emplace_back(len, (uint32_t)(sum % m) * scale);
  }
  std::sort(out.begin(), out.end());
  return out;
}

UPoly den_from_cycles(const std::vector<std::pair<uint32_t, uint32_t>>& cycles,
                      uint32_t ambient) {
  UPoly acc{Cyclotomic::one(ambient)};
  for (auto& [L, t] : cycles) {
    UPoly f((size_t)L + 1, Cyclotomic::zero(ambient));
    f[0] = Cyclotomic::one(ambient);
    f[L] = -Cyclotomic::root(ambient, (long)t);
    acc = upoly_mul(acc, f);
  }
  return acc;
}

}  // namespace

TruncSeries GradedSum::to_series() const {
  std::string vars;
  std::vector<int> bounds;
  size_t x_pos = 0;
  {
    std::string all = "x" + aux_vars;
    for (const char* v = kVarAlphabet; *v; ++v)
      if (all.find(*v) != std::string::npos) vars += *v;
    x_pos = vars.find('x');
  }
  std::vector<int> auxmax(aux_vars.size(), 0);
  for (auto& [e, s] : slices)
    for (size_t i = 0; i < e.size(); ++i) auxmax[i] = std::max(auxmax[i], e[i]);
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i == x_pos) {
      bounds.push_back(xbound);
    } else {
      size_t ai = aux_vars.find(vars[i]);
      bounds.push_back(auxmax[ai]);
    }
  }
  TruncSeries out(vars, bounds);
  for (auto& [e, s] : slices) {
    for (int j = 0; j < (int)s.size(); ++j) {
      if (s[j].is_zero()) continue;
      Expt full(vars.size(), 0);
      for (size_t i = 0; i < vars.size(); ++i) {
        if (i == x_pos)
          full[i] = j;
        else
          full[i] = e[aux_vars.find(vars[i])];
      }
      out.add_term(full, s[j]);
    }
  }
  return out;
}

std::vector<Rational> GradedSum::rational_series() const {
  if (slices.empty()) return std::vector<Rational>(xbound + 1, Rational(0));
  if (slices.size() != 1 || !slices.begin()->first.empty())
    throw Error("rational_series needs a pure x-series");
  std::vector<Rational> out;
  out.reserve(xbound + 1);
  for (auto& c : slices.begin()->second) {
    if (!c.is_rational())
      throw StructureError("series coefficient not rational: " + c.render());
    out.push_back(c.rational_value());
  }
  return out;
}

GradedSum graded_character_sum(const ReflectionGroup& G, const std::vector<uint32_t>& elements,
                               const WeightFn& weight, std::string aux_vars, int xbound,
                               const Rational& scale, bool try_galois_orbits) {
  const uint32_t ambient = G.conductor();
  const MultiPoly unit_weight = MultiPoly::constant(aux_vars, Cyclotomic::one(1));

  std::map<ItemKey, ItemData> items;
  auto intake = [&](uint32_t i) {
    ItemKey key;
    key.mono = G.is_monomial();
    if (key.mono) {
      key.cycles = monomial_cycles(G, i);
    } else {
      key.den = G.char_poly(i);
    }
    const MultiPoly* w = weight ? weight(i) : nullptr;
    key.weight = w ? w->aligned(aux_vars) : unit_weight;
    auto [it, fresh] = items.try_emplace(std::move(key), ItemData{});
    it->second.count += 1;
    if (fresh) it->second.rep = i;
  };
  // cycle phases must be converted to ambient exponents before keying
  // (done in monomial_cycles below via the group's scale)
  if (elements.empty()) {
    for (uint32_t i = 0; i < G.order(); ++i) intake(i);
  } else {
    for (uint32_t i : elements) intake(i);
  }

  const CycContext& ctx = CycContext::get(ambient);
  bool accel = try_galois_orbits && ambient > 2 && !ctx.unit_gens().empty() &&
               G.galois_stable() && elements.empty();

  GradedSum out;
  out.aux_vars = aux_vars;
  out.xbound = xbound;

  auto accumulate = [&](const ItemKey& key, uint32_t rep, const Rational& factor,
                        bool traced) {
    UPoly den = key.mono ? den_from_cycles(key.cycles, ambient) : key.den;
    // sparse positive-degree terms of den
    std::vector<std::pair<size_t, Cyclotomic>> dterms;
    for (size_t i = 1; i < den.size(); ++i)
      if (!den[i].is_zero()) dterms.emplace_back(i, den[i]);
    size_t depth = den.size();
    std::vector<Cyclotomic> window(std::max<size_t>(depth, 1));
    for (int j = 0; j <= xbound; ++j) {
      Cyclotomic c;
      if (j == 0) {
        c = Cyclotomic::one(ambient);
      } else {
        Cyclotomic acc = Cyclotomic::zero(ambient);
        for (auto& [i, p] : dterms) {
          if ((int)i > j) break;
          acc = acc + p * window[(j - i) % window.size()];
        }
        c = -acc;
      }
      window[j % window.size()] = c;
      for (auto& [ae, w] : key.weight.terms()) {
        Cyclotomic v = w * c;
        if (v.is_zero()) continue;
        if (traced) v = Cyclotomic::from_rational(1, v.field_trace());
        v = v * factor;
        if (v.is_zero()) continue;
        auto& slice = out.slices[ae];
        if (slice.empty()) slice.assign(xbound + 1, Cyclotomic());
        slice[j] = slice[j] + v;
      }
    }
  };

  Rational inv_scale(1);
  inv_scale /= scale;

  if (accel) {
    std::map<ItemKey, char> visited;
    for (auto& [key, data] : items) {
      if (visited.count(key)) continue;
      // orbit BFS through the unit-group generators
      std::vector<const ItemKey*> orbit;
      std::map<ItemKey, char> inorbit;
      std::deque<const ItemKey*> work;
      auto seed = items.find(key);
      orbit.push_back(&seed->first);
      inorbit.emplace(key, 1);
      work.push_back(&seed->first);
      bool ok = true;
      while (!work.empty() && ok) {
        const ItemKey* cur = work.front();
        work.pop_front();
        for (uint32_t k : ctx.unit_gens()) {
          ItemKey img = cur->galois(k, ambient);
          auto it = items.find(img);
          if (it == items.end() || it->second.count != data.count) {
            ok = false;
            break;
          }
          if (inorbit.emplace(std::move(img), 1).second) {
            orbit.push_back(&it->first);
            work.push_back(&it->first);
          }
        }
      }
      if (!ok) {
        accel = false;
        break;
      }
      for (auto& [k2, v2] : inorbit) visited.emplace(k2, 1);
      // contribution: count * |orbit| / phi(n) * Tr(series(rep))
      Rational factor((long)data.count);
      factor *= Rational((long)orbit.size());
      factor /= Rational((long)ctx.phi());
      factor *= inv_scale;
      accumulate(key, data.rep, factor, /*traced=*/true);
    }
  }
  if (!accel) {
    out.slices.clear();
    for (auto& [key, data] : items) {
      Rational factor((long)data.count);
      factor *= inv_scale;
      accumulate(key, data.rep, factor, /*traced=*/false);
    }
  }
  for (auto& [e, s] : out.slices) {
    if (s.empty()) s.assign(xbound + 1, Cyclotomic());
  }
  return out;
}

// ---------------------------------------------------------------------------

TruncSeries molien(const ReflectionGroup& G, int bound) {
  if (bound < 1) throw Error("molien bound must be >= 1");
  GradedSum s = graded_character_sum(G, {}, nullptr, "", bound,
                                     Rational((long)G.order()), true);
  auto coeffs = s.rational_series();
  TruncSeries out("x", {bound});
  for (int j = 0; j <= bound; ++j) {
    if (coeffs[j] == 0) continue;
    if (!is_integer(coeffs[j]) || coeffs[j] < 0)
      throw StructureError("Molien coefficient at degree " + std::to_string(j) +
                           " is not a nonnegative integer: " + render(coeffs[j]));
    out.add_term({j}, Cyclotomic::from_rational(1, coeffs[j]));
  }
  return out;
}

const std::vector<int> degrees(const ReflectionGroup& G) {
  if (auto c = G.cached_degrees()) return *c;
  int bound = (int)G.reflections().size() + (int)G.rank();
  TruncSeries m = molien(G, bound);
  std::vector<int> degs = extract_factor_degrees(m, BigInt((long)G.order()), bound);
  if ((int)degs.size() != (int)G.rank())
    throw StructureError("expected " + std::to_string(G.rank()) + " invariant degrees, found " +
                         std::to_string(degs.size()));
  if (G.expected() && G.expected()->degrees != degs)
    throw StructureError("degree multiset differs from the catalog data for " +
                         G.spec().format());
  G.cache_degrees(degs);
  return degs;
}

int sum_of_degrees(const ReflectionGroup& G) {
  int s = 0;
  for (int d : degrees(G)) s += d;
  return s;
}

std::vector<int> fake_degrees(const ReflectionGroup& G,
                              const std::function<Cyclotomic(uint32_t)>& trace_of,
                              uint32_t dim) {
  std::vector<int> degs = degrees(G);
  int bound = 0;
  for (int d : degs) bound += d - 1;
  // weight(g) = trace(M(g^{-1}))
  std::deque<MultiPoly> storage;
  std::vector<const MultiPoly*> weights(G.order());
  for (uint32_t i = 0; i < G.order(); ++i) {
    storage.push_back(MultiPoly::constant("", trace_of(G.inv(i))));
    weights[i] = &storage.back();
  }
  GradedSum s = graded_character_sum(
      G, {}, [&](uint32_t i) { return weights[i]; }, "", bound, Rational((long)G.order()),
      true);
  std::vector<Rational> series = s.rational_series();
  // multiply by prod (1 - q^{d_i}) truncated at the bound
  std::vector<Rational> f = series;
  for (int d : degs) {
    for (int j = bound; j >= d; --j) f[j] -= f[j - d];
  }
  std::vector<int> out;
  Rational total(0);
  for (int j = 0; j <= bound; ++j) {
    if (f[j] == 0) continue;
    if (!is_integer(f[j]) || f[j] < 0)
      throw StructureError("fake degree coefficient at q^" + std::to_string(j) +
                           " is not a nonnegative integer: " + render(f[j]));
    total += f[j];
    long mult = (long)f[j].get_num().get_si();
    for (long k = 0; k < mult; ++k) out.push_back(j);
  }
  if (total != Rational((long)dim))
    throw StructureError("fake degree multiplicities sum to " + render(total) + ", expected " +
                         std::to_string(dim));
  return out;
}

std::vector<int> fake_degrees_V(const ReflectionGroup& G) {
  return fake_degrees(
      G, [&](uint32_t i) { return G.matrix(i).trace(); }, G.rank());
}

}  // namespace crg
