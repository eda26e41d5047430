#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "crg/errors.hpp"
#include "crg/invariant.hpp"

namespace crg {

// ---------------------------------------------------------------------------
// monomial tables

namespace {

struct MonTable {
  std::vector<XExp> list;
  std::map<XExp, int> index;
};

const MonTable& montable(uint32_t r, int d) {
  static std::map<std::pair<uint32_t, int>, MonTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(r, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  MonTable t;
  XExp cur(r, 0);
  // lexicographic enumeration of all exponent vectors with sum d
  std::function<void(uint32_t, int)> rec = [&](uint32_t pos, int rem) {
    if (pos + 1 == r) {
      cur[pos] = rem;
      t.index.emplace(cur, (int)t.list.size());
      t.list.push_back(cur);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      cur[pos] = v;
      rec(pos + 1, rem - v);
    }
  };
  if (r == 0) {
    if (d == 0) t.list.push_back({});
  } else {
    rec(0, d);
  }
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace

const std::vector<XExp>& monomials_of_degree(uint32_t r, int d) { return montable(r, d).list; }

int monomial_index(uint32_t r, int d, const XExp& e) {
  auto& t = montable(r, d);
  auto it = t.index.find(e);
  if (it == t.index.end()) throw Error("monomial outside its degree table");
  return it->second;
}

// ---------------------------------------------------------------------------
// XPoly

XPoly xpoly_mul(const XPoly& a, const XPoly& b) {
  XPoly out;
  for (auto& [ea, ca] : a) {
    for (auto& [eb, cb] : b) {
      XExp e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      Cyclotomic v = ca * cb;
      if (v.is_zero()) continue;
      auto it = out.find(e);
      if (it == out.end()) {
        out.emplace(std::move(e), std::move(v));
      } else {
        it->second = it->second + v;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

void xpoly_add_scaled(XPoly& acc, const XPoly& f, const Cyclotomic& c) {
  if (c.is_zero()) return;
  for (auto& [e, v] : f) {
    Cyclotomic t = v * c;
    if (t.is_zero()) continue;
    auto it = acc.find(e);
    if (it == acc.end()) {
      acc.emplace(e, std::move(t));
    } else {
      it->second = it->second + t;
      if (it->second.is_zero()) acc.erase(it);
    }
  }
}

std::string xpoly_render(const XPoly& f) {
  if (f.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : f) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.render() << ")";
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      os << "*x" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

XPoly apply_element(const ReflectionGroup& G, uint32_t gi, const XPoly& f) {
  uint32_t r = G.rank();
  XPoly out;
  if (G.is_monomial()) {
    // (g^{-1} x)_i = zeta^{-s_i} x_{pi(i)}
    const Monomial& g = G.monomial(gi);
    uint32_t m = G.phase_modulus();
    uint32_t scale = G.conductor() / m;
    for (auto& [e, c] : f) {
      long tw = 0;
      XExp ne(r, 0);
      for (uint32_t i = 0; i < r; ++i) {
        if (e[i] == 0) continue;
        tw -= (long)g.phase[i] * e[i];
        ne[g.perm[i]] = e[i];
      }
      long t = tw % (long)m;
      if (t < 0) t += m;
      Cyclotomic v = c * Cyclotomic::root(G.conductor(), t * (long)scale);
      auto it = out.find(ne);
      if (it == out.end()) {
        out.emplace(std::move(ne), std::move(v));
      } else {
        it->second = it->second + v;
        if (it->second.is_zero()) out.erase(it);
      }
    }
    return out;
  }
  CycMatrix ginv = G.matrix(G.inv(gi));
  // linear forms: image of x_i is sum_j ginv[i][j] x_j
  std::vector<XPoly> forms(r);
  for (uint32_t i = 0; i < r; ++i) {
    for (uint32_t j = 0; j < r; ++j) {
      if (ginv.at(i, j).is_zero()) continue;
      XExp e(r, 0);
      e[j] = 1;
      forms[i].emplace(std::move(e), ginv.at(i, j));
    }
  }
  // per-variable power cache for this call
  std::vector<std::vector<XPoly>> powers(r);
  auto power = [&](uint32_t i, int k) -> const XPoly& {
    auto& pc = powers[i];
    if (pc.empty()) {
      XPoly one;
      one.emplace(XExp(r, 0), Cyclotomic::one(G.conductor()));
      pc.push_back(std::move(one));
    }
    while ((int)pc.size() <= k) pc.push_back(xpoly_mul(pc.back(), forms[i]));
    return pc[k];
  };
  for (auto& [e, c] : f) {
    XPoly prod;
    prod.emplace(XExp(r, 0), c);
    for (uint32_t i = 0; i < r; ++i) {
      if (e[i] > 0) prod = xpoly_mul(prod, power(i, e[i]));
    }
    for (auto& [ne, nc] : prod) {
      auto it = out.find(ne);
      if (it == out.end()) {
        out.emplace(ne, nc);
      } else {
        it->second = it->second + nc;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

CycMatrix degree_action_matrix(const ReflectionGroup& G, uint32_t gi, int d) {
  uint32_t r = G.rank();
  auto& mons = monomials_of_degree(r, d);
  uint32_t D = (uint32_t)mons.size();
  CycMatrix A(D, D, G.conductor());
  for (uint32_t j = 0; j < D; ++j) {
    XPoly mu;
    mu.emplace(mons[j], Cyclotomic::one(G.conductor()));
    XPoly img = apply_element(G, gi, mu);
    for (auto& [e, c] : img) A.set((uint32_t)monomial_index(r, d, e), j, c);
  }
  return A;
}

// ---------------------------------------------------------------------------
// invariant bases

namespace {

std::vector<Cyclotomic> flatten(const XPoly& f, uint32_t r, int d, uint32_t n) {
  std::vector<Cyclotomic> v(monomials_of_degree(r, d).size(), Cyclotomic::zero(n));
  for (auto& [e, c] : f) v[monomial_index(r, d, e)] = c;
  return v;
}

XPoly unflatten(const std::vector<Cyclotomic>& v, uint32_t r, int d) {
  auto& mons = monomials_of_degree(r, d);
  XPoly f;
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) f.emplace(mons[i], v[i]);
  return f;
}

std::vector<XPoly> rows_to_polys(std::vector<std::vector<Cyclotomic>>& rows, uint32_t r, int d) {
  row_echelon(rows);
  std::vector<XPoly> out;
  for (auto& row : rows) {
    XPoly f = unflatten(row, r, d);
    if (!f.empty()) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

InvariantSpace invariant_basis(const ReflectionGroup& N, int d) {
  uint32_t r = N.rank();
  uint32_t n = N.conductor();
  auto& mons = monomials_of_degree(r, d);
  uint32_t D = (uint32_t)mons.size();
  InvariantSpace out;
  out.degree = d;
  const auto& gens = N.generator_indices();
  if (N.is_monomial()) {
    // each monomial orbit carries at most one invariant line; propagate
    // coefficients along generator images and check consistency
    std::vector<char> placed(D, 0);
    for (uint32_t root = 0; root < D; ++root) {
      if (placed[root]) continue;
      std::map<int, Cyclotomic> coeff;
      coeff[root] = Cyclotomic::one(n);
      std::vector<int> work{(int)root};
      bool consistent = true;
      // traverse the whole orbit even when inconsistent, to mark it placed
      while (!work.empty()) {
        int cur = work.back();
        work.pop_back();
        XPoly mu;
        mu.emplace(mons[cur], coeff[cur]);
        for (uint32_t g : gens) {
          XPoly img = apply_element(N, g, mu);
          // single term for monomial groups
          auto& [e, c] = *img.begin();
          int idx = monomial_index(r, d, e);
          auto it = coeff.find(idx);
          if (it == coeff.end()) {
            coeff.emplace(idx, c);
            work.push_back(idx);
          } else if (it->second != c) {
            consistent = false;
          }
        }
      }
      for (auto& [idx, c] : coeff) placed[idx] = 1;
      if (consistent) {
        XPoly f;
        for (auto& [idx, c] : coeff) f.emplace(mons[idx], c);
        out.basis.push_back(std::move(f));
      }
    }
    return out;
  }
  // generic path: joint kernel of the generator actions
  std::vector<std::vector<Cyclotomic>> stacked;
  for (uint32_t g : gens) {
    CycMatrix A = degree_action_matrix(N, g, d);
    for (uint32_t i = 0; i < D; ++i) {
      std::vector<Cyclotomic> row(D, Cyclotomic::zero(n));
      for (uint32_t j = 0; j < D; ++j) row[j] = A.at(i, j);
      row[i] = row[i] - Cyclotomic::one(n);
      stacked.push_back(std::move(row));
    }
  }
  if (stacked.empty()) {
    // trivial group: everything is invariant
    for (uint32_t i = 0; i < D; ++i) {
      XPoly f;
      f.emplace(mons[i], Cyclotomic::one(n));
      out.basis.push_back(std::move(f));
    }
    return out;
  }
  CycMatrix M((uint32_t)stacked.size(), D, n);
  for (uint32_t i = 0; i < stacked.size(); ++i)
    for (uint32_t j = 0; j < D; ++j) M.set(i, j, stacked[i][j]);
  auto ker = kernel_basis(M);
  std::vector<std::vector<Cyclotomic>> rows(ker.begin(), ker.end());
  out.basis = rows_to_polys(rows, r, d);
  return out;
}

InvariantSpace reynolds_invariant_basis(const ReflectionGroup& N, int d) {
  uint32_t r = N.rank();
  uint32_t n = N.conductor();
  auto& mons = monomials_of_degree(r, d);
  Rational inv_order(1);
  inv_order /= Rational((long)N.order());
  std::vector<std::vector<Cyclotomic>> rows;
  for (auto& mon : mons) {
    XPoly mu;
    mu.emplace(mon, Cyclotomic::one(n));
    XPoly avg;
    for (uint32_t g = 0; g < N.order(); ++g) {
      XPoly img = apply_element(N, g, mu);
      xpoly_add_scaled(avg, img, Cyclotomic::one(n));
    }
    XPoly scaled;
    for (auto& [e, c] : avg) {
      Cyclotomic v = c * inv_order;
      if (!v.is_zero()) scaled.emplace(e, std::move(v));
    }
    if (!scaled.empty()) rows.push_back(flatten(scaled, r, d, n));
  }
  InvariantSpace out;
  out.degree = d;
  out.basis = rows_to_polys(rows, r, d);
  return out;
}

bool same_span(const InvariantSpace& a, const InvariantSpace& b) {
  if (a.degree != b.degree || a.basis.size() != b.basis.size()) return false;
  if (a.basis.empty()) return true;
  uint32_t r = (uint32_t)a.basis[0].begin()->first.size();
  uint32_t n = a.basis[0].begin()->second.conductor();
  std::vector<std::vector<Cyclotomic>> rows;
  for (auto& f : a.basis) rows.push_back(flatten(f, r, a.degree, n));
  size_t ra = row_echelon(rows).size();
  for (auto& f : b.basis) rows.push_back(flatten(f, r, a.degree, n));
  return row_echelon(rows).size() == ra && ra == a.basis.size();
}

// ---------------------------------------------------------------------------
// inner product and G-stable complements

namespace {

bool generators_unitary(const ReflectionGroup& G) {
  for (uint32_t g : G.generator_indices()) {
    CycMatrix m = G.matrix(g);
    if (!(m.conj_transpose() * m).is_identity()) return false;
  }
  return true;
}

// Fischer weights: <x^a, x^a> = a!
std::vector<Rational> fischer_weights(uint32_t r, int d) {
  auto& mons = monomials_of_degree(r, d);
  std::vector<Rational> w;
  w.reserve(mons.size());
  for (auto& e : mons) {
    BigInt f(1);
    for (int x : e) f *= factorial((unsigned)x);
    w.push_back(Rational(f));
  }
  return w;
}

// rows spanning the orthogonal complement of span(dec) inside span(inv),
// with respect to a G-invariant Hermitian form on the degree-d coefficients
std::vector<XPoly> stable_complement(const ReflectionGroup& G, int d,
                                     const std::vector<XPoly>& inv,
                                     const std::vector<XPoly>& dec) {
  if (dec.empty()) return inv;
  uint32_t r = G.rank();
  uint32_t n = G.conductor();
  uint32_t D = (uint32_t)monomials_of_degree(r, d).size();
  std::vector<std::vector<Cyclotomic>> B, T;
  for (auto& f : inv) B.push_back(flatten(f, r, d, n));
  for (auto& f : dec) T.push_back(flatten(f, r, d, n));
  // Gram pairings <t_k, b_j>
  CycMatrix M((uint32_t)T.size(), (uint32_t)B.size(), n);
  if (generators_unitary(G)) {
    auto w = fischer_weights(r, d);
    for (uint32_t k = 0; k < T.size(); ++k) {
      for (uint32_t j = 0; j < B.size(); ++j) {
        Cyclotomic acc = Cyclotomic::zero(n);
        for (uint32_t a = 0; a < D; ++a) {
          if (T[k][a].is_zero() || B[j][a].is_zero()) continue;
          acc = acc + T[k][a].conj() * B[j][a] * w[a];
        }
        M.set(k, j, acc);
      }
    }
  } else {
    // averaged form: W = (1/|G|) sum_g A(g)^H A(g)
    CycMatrix W(D, D, n);
    for (uint32_t g = 0; g < G.order(); ++g) {
      CycMatrix A = degree_action_matrix(G, g, d);
      W = W + A.conj_transpose() * A;
    }
    for (uint32_t k = 0; k < T.size(); ++k) {
      for (uint32_t j = 0; j < B.size(); ++j) {
        Cyclotomic acc = Cyclotomic::zero(n);
        for (uint32_t a = 0; a < D; ++a) {
          if (T[k][a].is_zero()) continue;
          for (uint32_t b = 0; b < D; ++b) {
            if (W.at(a, b).is_zero() || B[j][b].is_zero()) continue;
            acc = acc + T[k][a].conj() * W.at(a, b) * B[j][b];
          }
        }
        M.set(k, j, acc);
      }
    }
  }
  auto ker = kernel_basis(M);
  std::vector<std::vector<Cyclotomic>> rows;
  for (auto& c : ker) {
    std::vector<Cyclotomic> row(D, Cyclotomic::zero(n));
    for (size_t j = 0; j < c.size(); ++j) {
      if (c[j].is_zero()) continue;
      for (uint32_t a = 0; a < D; ++a) row[a] = row[a] + c[j] * B[j][a];
    }
    rows.push_back(std::move(row));
  }
  return rows_to_polys(rows, r, d);
}

}  // namespace

uint32_t FundamentalSpace::total_dim() const {
  uint32_t s = 0;
  for (auto& b : blocks) s += (uint32_t)b.basis.size();
  return s;
}

std::vector<Cyclotomic> solve_in_span(const std::vector<XPoly>& basis, const XPoly& image,
                                      uint32_t r, int degree, uint32_t conductor) {
  uint32_t D = (uint32_t)monomials_of_degree(r, degree).size();
  uint32_t k = (uint32_t)basis.size();
  // solve B^T c = y
  std::vector<std::vector<Cyclotomic>> aug(D);
  std::vector<std::vector<Cyclotomic>> B;
  for (auto& f : basis) B.push_back(flatten(f, r, degree, conductor));
  auto y = flatten(image, r, degree, conductor);
  for (uint32_t i = 0; i < D; ++i) {
    aug[i].assign(k + 1, Cyclotomic::zero(conductor));
    for (uint32_t j = 0; j < k; ++j) aug[i][j] = B[j][i];
    aug[i][k] = y[i];
  }
  auto pivots = row_echelon(aug);
  std::vector<Cyclotomic> coords(k, Cyclotomic::zero(conductor));
  for (size_t p = 0; p < pivots.size(); ++p) {
    if (pivots[p] == (int)k)
      throw StructureError("image leaves the span (inconsistent solve)");
    coords[pivots[p]] = aug[p][k];
  }
  // verify (guards rank-deficient bases)
  std::vector<Cyclotomic> check(D, Cyclotomic::zero(conductor));
  for (uint32_t j = 0; j < k; ++j) {
    if (coords[j].is_zero()) continue;
    for (uint32_t i = 0; i < D; ++i) check[i] = check[i] + coords[j] * B[j][i];
  }
  for (uint32_t i = 0; i < D; ++i) {
    if (check[i] != y[i]) throw StructureError("image leaves the span (residual nonzero)");
  }
  return coords;
}

FundamentalSpace fundamental_invariant_space(const ReflectionGroup& G,
                                             const ReflectionGroup& N) {
  FundamentalSpace out;
  out.degrees = degrees(N);
  uint32_t r = G.rank();
  std::vector<std::pair<XPoly, int>> chosen;  // basis polys with their degree
  std::vector<int> distinct;
  for (int d : out.degrees)
    if (distinct.empty() || distinct.back() != d) distinct.push_back(d);
  for (int d : distinct) {
    int mult = (int)std::count(out.degrees.begin(), out.degrees.end(), d);
    InvariantSpace inv = invariant_basis(N, d);
    // decomposables: products of at least two already-chosen invariants with
    // total degree d
    std::vector<XPoly> dec;
    std::function<void(size_t, int, int, const XPoly*)> gen = [&](size_t from, int deg,
                                                                  int factors,
                                                                  const XPoly* acc) {
      for (size_t i = from; i < chosen.size(); ++i) {
        int nd = deg + chosen[i].second;
        if (nd > d) continue;
        XPoly prod = acc ? xpoly_mul(*acc, chosen[i].first) : chosen[i].first;
        if (nd == d) {
          if (factors + 1 >= 2) dec.push_back(prod);
        } else {
          gen(i, nd, factors + 1, &prod);
        }
      }
    };
    gen(0, 0, 0, nullptr);
    std::vector<XPoly> comp = stable_complement(G, d, inv.basis, dec);
    if ((int)comp.size() != mult)
      throw StructureError("fundamental invariant block at degree " + std::to_string(d) +
                           " has dimension " + std::to_string(comp.size()) + ", expected " +
                           std::to_string(mult) +
                           " (is the subgroup normal and reflection-generated?)");
    InvariantSpace block;
    block.degree = d;
    block.basis = comp;
    out.blocks.push_back(block);
    for (auto& f : comp) chosen.emplace_back(f, d);
  }
  if (out.total_dim() != r) throw StructureError("fundamental invariant space is not r-dimensional");
  // G-stability of every block
  for (uint32_t g : G.generator_indices()) {
    for (auto& block : out.blocks) {
      for (auto& f : block.basis) {
        XPoly img = apply_element(G, g, f);
        solve_in_span(block.basis, img, r, block.degree, G.conductor());
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// bigraded engine

GradedSum bigraded_sum(const ReflectionGroup& G, const GradedBlockAction& blocks, int xbound,
                       int ybound, int ubound) {
  // per coset: prod_b det(1 + u y^{e_b} M_b) as a polynomial in (y, u)
  std::vector<MultiPoly> coset_weights;
  coset_weights.reserve(blocks.num_cosets);
  for (uint32_t c = 0; c < blocks.num_cosets; ++c) {
    MultiPoly w = MultiPoly::constant("yu", Cyclotomic::one(G.conductor()));
    for (size_t b = 0; b < blocks.y_exponents.size(); ++b) {
      const CycMatrix& M = blocks.coset_matrices[b][c];
      // det(1 + s M) = det(1 - s (-M))
      UPoly es = det_one_minus_xg(M.scaled(-Cyclotomic::one(M.conductor())));
      MultiPoly factor("yu");
      for (size_t p = 0; p < es.size(); ++p) {
        if (es[p].is_zero()) continue;
        factor.add_term({blocks.y_exponents[b] * (int)p, (int)p}, es[p]);
      }
      w = w * factor;
    }
    coset_weights.push_back(std::move(w));
  }
  GradedSum s = graded_character_sum(
      G, {}, [&](uint32_t i) { return &coset_weights[blocks.coset_of[i]]; }, "yu", xbound,
      Rational((long)G.order()), true);
  // clip slices beyond the requested bounds
  for (auto it = s.slices.begin(); it != s.slices.end();) {
    if (it->first[0] > ybound || it->first[1] > ubound)
      it = s.slices.erase(it);
    else
      ++it;
  }
  return s;
}

std::vector<std::pair<int, int>> extract_bigraded_pairs(const ReflectionGroup& G,
                                                        const GradedBlockAction& blocks,
                                                        bool check_full_expansion) {
  std::vector<int> degsG = degrees(G);
  uint32_t r = G.rank();
  int xbound = 0;
  for (int d : degsG) xbound += d;
  int ybound = 0;
  for (size_t b = 0; b < blocks.y_exponents.size(); ++b)
    ybound += blocks.y_exponents[b] * (int)blocks.coset_matrices[b][0].rows();
  int ubound = check_full_expansion ? (int)r : 1;
  GradedSum s = bigraded_sum(G, blocks, xbound, ybound, ubound);
  // multiply each slice by prod (1 - x^{d_i}) in place
  for (auto& [e, slice] : s.slices) {
    for (int d : degsG) {
      for (int j = xbound; j >= d; --j) slice[j] = slice[j] - slice[j - d];
    }
  }
  // the u^0 slice must collapse to 1
  {
    Expt zero{0, 0};
    auto it = s.slices.find(zero);
    if (it == s.slices.end()) throw StructureError("bigraded series has no constant slice");
    for (int j = 0; j <= xbound; ++j) {
      bool ok = j == 0 ? it->second[j].is_one() : it->second[j].is_zero();
      if (!ok)
        throw StructureError("u^0 slice of the bigraded series is not the Molien series");
    }
  }
  // collect the u^1 monomials
  std::vector<std::pair<int, int>> pairs;
  for (auto& [e, slice] : s.slices) {
    if (e[1] != 1) continue;
    int b = e[0];
    for (int a = 0; a <= xbound; ++a) {
      const Cyclotomic& c = slice[a];
      if (c.is_zero()) continue;
      if (!c.is_rational() || !is_integer(c.rational_value()) || c.rational_value() < 0)
        throw StructureError("u^1 coefficient is not a nonnegative integer: " + c.render());
      long mult = c.rational_value().get_num().get_si();
      for (long k = 0; k < mult; ++k) pairs.emplace_back(a, b);
    }
  }
  if (pairs.size() != r)
    throw StructureError("u^1 slice has " + std::to_string(pairs.size()) +
                         " monomials, expected " + std::to_string(r));
  std::sort(pairs.begin(), pairs.end());
  if (check_full_expansion) {
    // compare every slice against prod (1 + x^{a_i} y^{b_i} u)
    std::map<Expt, std::map<int, long>> want;  // (y,u) -> x -> coeff
    uint32_t subsets = 1u << r;
    for (uint32_t sset = 0; sset < subsets; ++sset) {
      int ax = 0, by = 0, u = 0;
      for (uint32_t i = 0; i < r; ++i) {
        if (sset & (1u << i)) {
          ax += pairs[i].first;
          by += pairs[i].second;
          ++u;
        }
      }
      if (by <= ybound && u <= ubound) want[{by, u}][ax] += 1;
    }
    for (auto& [e, slice] : s.slices) {
      auto wi = want.find(e);
      for (int j = 0; j <= xbound; ++j) {
        long expect = 0;
        if (wi != want.end()) {
          auto xi = wi->second.find(j);
          if (xi != wi->second.end()) expect = xi->second;
        }
        Cyclotomic want_c = Cyclotomic::from_rational(1, Rational(expect));
        uint32_t mm = (uint32_t)lcm_u64(want_c.conductor(), slice[j].conductor());
        if (slice[j].embed(mm) != want_c.embed(mm))
          throw StructureError("bigraded series mismatch at u^" + std::to_string(e[1]) +
                               " y^" + std::to_string(e[0]) + " x^" + std::to_string(j));
      }
    }
    // also check that every expected slice appeared
    for (auto& [e, xs] : want) {
      if (!s.slices.count(e)) {
        bool all_zero = true;
        for (auto& [x, c] : xs)
          if (c != 0) all_zero = false;
        if (!all_zero)
          throw StructureError("bigraded series missing expected slice");
      }
    }
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Orlik-Solomon spaces

OSSpace os_space(const ReflectionGroup& G, const ReflectionGroup& N, long sigma_k,
                 const std::vector<uint32_t>& coset_reps,
                 const std::vector<uint32_t>& coset_of) {
  uint32_t r = G.rank();
  uint32_t n = G.conductor();
  OSSpace out;
  out.degrees = fake_degrees(
      N, [&](uint32_t i) { return N.matrix(i).trace().galois(sigma_k); }, r);
  int maxdeg = out.degrees.empty() ? 0 : out.degrees.back();
  // twisted dual action matrices of the elements we need
  auto twisted_dual = [&](const ReflectionGroup& H, uint32_t i) {
    return H.matrix(H.inv(i)).galois(sigma_k).transpose();
  };
  // W_l = (S_l (x) (V^sigma)*)^N as flat rows of length D_l * r
  auto joint_kernel = [&](int l) {
    uint32_t D = (uint32_t)monomials_of_degree(r, l).size();
    std::vector<std::vector<Cyclotomic>> stacked;
    for (uint32_t g : N.generator_indices()) {
      CycMatrix A = degree_action_matrix(N, g, l);
      CycMatrix T = twisted_dual(N, g);
      // combined action (A (x) T) - I
      for (uint32_t i = 0; i < D; ++i) {
        for (uint32_t s = 0; s < r; ++s) {
          std::vector<Cyclotomic> row(D * r, Cyclotomic::zero(n));
          for (uint32_t j = 0; j < D; ++j) {
            if (A.at(i, j).is_zero()) continue;
            for (uint32_t t = 0; t < r; ++t) {
              if (T.at(s, t).is_zero()) continue;
              row[j * r + t] = row[j * r + t] + A.at(i, j) * T.at(s, t);
            }
          }
          row[i * r + s] = row[i * r + s] - Cyclotomic::one(n);
          stacked.push_back(std::move(row));
        }
      }
    }
    if (stacked.empty()) {
      std::vector<std::vector<Cyclotomic>> all;
      for (uint32_t i = 0; i < D * r; ++i) {
        std::vector<Cyclotomic> row(D * r, Cyclotomic::zero(n));
        row[i] = Cyclotomic::one(n);
        all.push_back(std::move(row));
      }
      return all;
    }
    CycMatrix M((uint32_t)stacked.size(), D * r, n);
    for (uint32_t i = 0; i < stacked.size(); ++i)
      for (uint32_t j = 0; j < D * r; ++j) M.set(i, j, stacked[i][j]);
    auto ker = kernel_basis(M);
    std::vector<std::vector<Cyclotomic>> rows(ker.begin(), ker.end());
    row_echelon(rows);
    return rows;
  };
  std::vector<std::vector<std::vector<Cyclotomic>>> W(maxdeg + 1);
  for (int l = 0; l <= maxdeg; ++l) W[l] = joint_kernel(l);

  bool unitary = generators_unitary(G);
  std::vector<int> distinct;
  for (int d : out.degrees)
    if (distinct.empty() || distinct.back() != d) distinct.push_back(d);

  out.blocks.coset_of = coset_of;
  out.blocks.num_cosets = (uint32_t)coset_reps.size();

  for (int l : distinct) {
    int mult = (int)std::count(out.degrees.begin(), out.degrees.end(), l);
    uint32_t D = (uint32_t)monomials_of_degree(r, l).size();
    // decomposables: p * w for invariant p of degree j >= 1, w in W_{l-j}
    std::vector<std::vector<Cyclotomic>> dec;
    for (int j = 1; j <= l; ++j) {
      InvariantSpace inv = invariant_basis(N, j);
      if (inv.basis.empty()) continue;
      auto& mons_low = monomials_of_degree(r, l - j);
      for (auto& p : inv.basis) {
        for (auto& w : W[l - j]) {
          std::vector<Cyclotomic> prod(D * r, Cyclotomic::zero(n));
          for (uint32_t mi = 0; mi < mons_low.size(); ++mi) {
            for (uint32_t s = 0; s < r; ++s) {
              const Cyclotomic& c = w[mi * r + s];
              if (c.is_zero()) continue;
              for (auto& [pe, pc] : p) {
                XExp e(pe);
                for (uint32_t v = 0; v < r; ++v) e[v] += mons_low[mi][v];
                prod[(uint32_t)monomial_index(r, l, e) * r + s] =
                    prod[(uint32_t)monomial_index(r, l, e) * r + s] + pc * c;
              }
            }
          }
          dec.push_back(std::move(prod));
        }
      }
    }
    // orthogonal complement inside W_l
    std::vector<std::vector<Cyclotomic>> U;
    if (dec.empty()) {
      U = W[l];
    } else {
      auto wts = fischer_weights(r, l);
      if (!unitary) throw StructureError("twisted generator spaces need unitary models");
      CycMatrix M((uint32_t)dec.size(), (uint32_t)W[l].size(), n);
      for (uint32_t k = 0; k < dec.size(); ++k) {
        for (uint32_t j = 0; j < W[l].size(); ++j) {
          Cyclotomic acc = Cyclotomic::zero(n);
          for (uint32_t a = 0; a < D * r; ++a) {
            if (dec[k][a].is_zero() || W[l][j][a].is_zero()) continue;
            acc = acc + dec[k][a].conj() * W[l][j][a] * wts[a / r];
          }
          M.set(k, j, acc);
        }
      }
      for (auto& c : kernel_basis(M)) {
        std::vector<Cyclotomic> row(D * r, Cyclotomic::zero(n));
        for (size_t j = 0; j < c.size(); ++j) {
          if (c[j].is_zero()) continue;
          for (uint32_t a = 0; a < D * r; ++a) row[a] = row[a] + c[j] * W[l][j][a];
        }
        U.push_back(std::move(row));
      }
      row_echelon(U);
      while (!U.empty() && std::all_of(U.back().begin(), U.back().end(),
                                       [](const Cyclotomic& c) { return c.is_zero(); }))
        U.pop_back();
    }
    if ((int)U.size() != mult)
      throw StructureError("twisted generator block at degree " + std::to_string(l) +
                           " has dimension " + std::to_string(U.size()) + ", expected " +
                           std::to_string(mult));
    // coset action on the block, then its dual
    auto act = [&](const ReflectionGroup& H, uint32_t gi, const std::vector<Cyclotomic>& v) {
      CycMatrix A = degree_action_matrix(H, gi, l);
      CycMatrix T = twisted_dual(H, gi);
      std::vector<Cyclotomic> img(D * r, Cyclotomic::zero(n));
      for (uint32_t j = 0; j < D; ++j) {
        for (uint32_t t = 0; t < r; ++t) {
          const Cyclotomic& c = v[j * r + t];
          if (c.is_zero()) continue;
          for (uint32_t i = 0; i < D; ++i) {
            if (A.at(i, j).is_zero()) continue;
            for (uint32_t s = 0; s < r; ++s) {
              if (T.at(s, t).is_zero()) continue;
              img[i * r + s] = img[i * r + s] + c * A.at(i, j) * T.at(s, t);
            }
          }
        }
      }
      return img;
    };
    // solver for coordinates in U
    uint32_t k = (uint32_t)U.size();
    auto solve_in_U = [&](const std::vector<Cyclotomic>& y) {
      std::vector<std::vector<Cyclotomic>> aug(D * r);
      for (uint32_t i = 0; i < D * r; ++i) {
        aug[i].assign(k + 1, Cyclotomic::zero(n));
        for (uint32_t j = 0; j < k; ++j) aug[i][j] = U[j][i];
        aug[i][k] = y[i];
      }
      auto pivots = row_echelon(aug);
      std::vector<Cyclotomic> coords(k, Cyclotomic::zero(n));
      for (size_t p = 0; p < pivots.size(); ++p) {
        if (pivots[p] == (int)k)
          throw StructureError("twisted block is not stable under the coset action");
        coords[pivots[p]] = aug[p][k];
      }
      return coords;
    };
    std::vector<CycMatrix> per_coset;
    for (uint32_t rep : coset_reps) {
      CycMatrix B(k, k, n);
      for (uint32_t j = 0; j < k; ++j) {
        auto coords = solve_in_U(act(rep, U[j]));
        for (uint32_t i = 0; i < k; ++i) B.set(i, j, coords[i]);
      }
      per_coset.push_back(B.inverse().transpose());  // dual action
    }
    // N acts trivially on the block
    for (uint32_t gN : N.generator_indices()) {
      CycMatrix BN(k, k, n);
      for (uint32_t j = 0; j < k; ++j) {
        auto coords = solve_in_U(act(gN, U[j]));
        for (uint32_t i = 0; i < k; ++i) BN.set(i, j, coords[i]);
      }
      if (!BN.is_identity())
        throw StructureError("the subgroup does not act trivially on its twisted generators");
    }
    out.blocks.y_exponents.push_back(l);
    out.blocks.coset_matrices.push_back(std::move(per_coset));
    std::vector<std::vector<XPoly>> block_polys;
    for (auto& row : U) {
      std::vector<XPoly> slots(r);
      for (uint32_t mi = 0; mi < D; ++mi) {
        for (uint32_t s = 0; s < r; ++s) {
          if (row[mi * r + s].is_zero()) continue;
          slots[s].emplace(monomials_of_degree(r, l)[mi], row[mi * r + s]);
        }
      }
      block_polys.push_back(std::move(slots));
    }
    out.basis.push_back(std::move(block_polys));
  }
  uint32_t total = 0;
  for (auto& b : out.basis) total += (uint32_t)b.size();
  if (total != r) throw StructureError("twisted generator space is not r-dimensional");
  return out;
}

}  // namespace crg
