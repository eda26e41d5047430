#pragma once

#include <functional>
#include <map>

#include "crg/group.hpp"
#include "crg/poly.hpp"

namespace crg {

// ---------------------------------------------------------------------------
// graded character sums
//
// Computes (1/scale) * sum_i count_i * weight_i / det(1 - x g_i) as exact
// truncated series, one dense x-series per monomial of the auxiliary
// variables appearing in the weights. Elements with equal characteristic
// polynomial and weight are merged; when the whole item multiset is stable
// under the Galois action (the common case for full-group averages), each
// orbit is summed through the field trace of a single representative.

struct GradedSum {
  std::string aux_vars;                            // subset of "qtyu"
  std::map<Expt, std::vector<Cyclotomic>> slices;  // aux exponent -> x-series
  int xbound = 0;

  // assemble into a TruncSeries over "x" + aux_vars
  TruncSeries to_series() const;
  // single-slice rational extraction (aux_vars empty)
  std::vector<Rational> rational_series() const;
};

using WeightFn = std::function<const MultiPoly*(uint32_t)>;  // nullptr = weight 1

GradedSum graded_character_sum(const ReflectionGroup& G,
                               const std::vector<uint32_t>& elements,  // empty = all of G
                               const WeightFn& weight, std::string aux_vars, int xbound,
                               const Rational& scale, bool try_galois_orbits);

// ---------------------------------------------------------------------------
// Molien series, degrees, fake degrees

TruncSeries molien(const ReflectionGroup& G, int bound);

// invariant degrees d_1 <= ... <= d_r extracted from the Molien series;
// cached on the group, and checked against prod d_i = |G|
const std::vector<int> degrees(const ReflectionGroup& G);
int sum_of_degrees(const ReflectionGroup& G);

// exponent multiset of the module M given by the trace of M at each element;
// asserts nonnegative integral coefficients summing to dim
std::vector<int> fake_degrees(const ReflectionGroup& G,
                              const std::function<Cyclotomic(uint32_t)>& trace_of,
                              uint32_t dim);
// fake degrees of the reflection representation V itself
std::vector<int> fake_degrees_V(const ReflectionGroup& G);

// ---------------------------------------------------------------------------
// polynomial spaces in x_1..x_r over Q(zeta)

using XExp = std::vector<int>;
using XPoly = std::map<XExp, Cyclotomic>;

const std::vector<XExp>& monomials_of_degree(uint32_t r, int d);
int monomial_index(uint32_t r, int d, const XExp& e);

XPoly xpoly_mul(const XPoly& a, const XPoly& b);
void xpoly_add_scaled(XPoly& acc, const XPoly& f, const Cyclotomic& c);
// action (g.f)(x) = f(g^{-1} x)
XPoly apply_element(const ReflectionGroup& G, uint32_t gi, const XPoly& f);
std::string xpoly_render(const XPoly& f);

// matrix of the action of element gi on the degree-d monomial basis
CycMatrix degree_action_matrix(const ReflectionGroup& G, uint32_t gi, int d);

struct InvariantSpace {
  int degree = 0;
  std::vector<XPoly> basis;  // row-reduced, linearly independent
};

// basis of N-invariant polynomials of the given degree (joint fixed space of
// the generator actions)
InvariantSpace invariant_basis(const ReflectionGroup& N, int d);
// independent construction by averaging the group action monomial by
// monomial; used as a cross-check oracle
InvariantSpace reynolds_invariant_basis(const ReflectionGroup& N, int d);
bool same_span(const InvariantSpace& a, const InvariantSpace& b);

// ---------------------------------------------------------------------------
// fundamental invariants of N with a G-stable span

struct FundamentalSpace {
  std::vector<int> degrees;               // degrees(N), with multiplicity
  std::vector<InvariantSpace> blocks;     // one per distinct degree, ascending
  uint32_t total_dim() const;
};

// G-stable graded complement of the decomposables inside the N-invariants,
// one block per invariant degree of N; requires N normal in G
FundamentalSpace fundamental_invariant_space(const ReflectionGroup& G,
                                             const ReflectionGroup& N);

// coordinates of (g . f) in the span of a block's basis; throws if the image
// leaves the span
std::vector<Cyclotomic> solve_in_span(const std::vector<XPoly>& basis, const XPoly& image,
                                      uint32_t r, int degree, uint32_t conductor);

// ---------------------------------------------------------------------------
// block data consumed by the bigraded series engine

struct GradedBlockAction {
  // one entry per graded block: the y-exponent of the block and, per coset,
  // the matrix of the coset acting on the dual of the block span
  std::vector<int> y_exponents;
  std::vector<std::vector<CycMatrix>> coset_matrices;  // [block][coset]
  std::vector<uint32_t> coset_of;                      // element -> coset index
  uint32_t num_cosets = 0;
};

// sum side of the bigraded Poincare series: slices over (y, u) of
// (1/|G|) sum_g prod_b det(1 + u y^{e_b} g|_b) / det(1 - x g|_V)
GradedSum bigraded_sum(const ReflectionGroup& G, const GradedBlockAction& blocks, int xbound,
                       int ybound, int ubound);

// coefficient of u^1 in the product of bigraded_sum with prod_i (1 - x^{d_i});
// must be exactly r monomials x^a y^b. Returns the (a_i, b_i) pairs sorted.
// When check_full_expansion is set, every u-slice is verified against
// prod_i (1 + x^{a_i} y^{b_i} u) / prod_i (1 - x^{d_i}).
std::vector<std::pair<int, int>> extract_bigraded_pairs(const ReflectionGroup& G,
                                                        const GradedBlockAction& blocks,
                                                        bool check_full_expansion = true);

// ---------------------------------------------------------------------------
// Orlik-Solomon space of a Galois twist

struct OSSpace {
  std::vector<int> degrees;  // fake degrees of V^sigma as N-module, with multiplicity
  // graded generator blocks with the coset action on the dual, ready for the
  // twisted bigraded engine
  GradedBlockAction blocks;
  // per block, the vector-valued generator basis (coefficients indexed by
  // monomial x tensor-slot)
  std::vector<std::vector<std::vector<XPoly>>> basis;  // [block][row][slot]
};

// U_N^sigma = generators of (S(V*) (x) (V^sigma)*)^N as a free module over
// the N-invariants, with the induced G-action; requires N normal in G
OSSpace os_space(const ReflectionGroup& G, const ReflectionGroup& N, long sigma_k,
                 const std::vector<uint32_t>& coset_reps,
                 const std::vector<uint32_t>& coset_of);

}  // namespace crg
