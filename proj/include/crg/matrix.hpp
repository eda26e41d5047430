#pragma once

#include <string>
#include <vector>

#include "crg/poly.hpp"

namespace crg {

// Dense matrix over Q(zeta_n); all entries share the conductor, and entries
// are kept canonical so matrices hash and order deterministically.
class CycMatrix {
 public:
  CycMatrix() : rows_(0), cols_(0), n_(1) {}
  CycMatrix(uint32_t rows, uint32_t cols, uint32_t n);
  static CycMatrix identity(uint32_t r, uint32_t n);

  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }
  uint32_t conductor() const { return n_; }

  const Cyclotomic& at(uint32_t i, uint32_t j) const { return e_[i * cols_ + j]; }
  void set(uint32_t i, uint32_t j, Cyclotomic v);

  CycMatrix operator*(const CycMatrix& o) const;
  CycMatrix operator+(const CycMatrix& o) const;
  CycMatrix operator-(const CycMatrix& o) const;
  CycMatrix scaled(const Cyclotomic& c) const;
  CycMatrix transpose() const;
  CycMatrix conj_transpose() const;
  CycMatrix galois(long k) const;
  CycMatrix embed(uint32_t m) const;
  CycMatrix inverse() const;
  Cyclotomic trace() const;

  bool operator==(const CycMatrix& o) const { return e_ == o.e_ && rows_ == o.rows_; }
  bool operator!=(const CycMatrix& o) const { return !(*this == o); }
  bool operator<(const CycMatrix& o) const;
  bool is_identity() const;

  std::size_t hash() const;
  std::string render() const;

 private:
  uint32_t rows_, cols_, n_;
  std::vector<Cyclotomic> e_;
};

struct CycMatrixHash {
  std::size_t operator()(const CycMatrix& m) const { return m.hash(); }
};

// in-place reduced row echelon form; returns the pivot columns
std::vector<int> row_echelon(std::vector<std::vector<Cyclotomic>>& rows);

// exact row reduction; returns rank
int rank(const CycMatrix& m);

// reduced basis of the null space, as coordinate vectors
std::vector<std::vector<Cyclotomic>> kernel_basis(const CycMatrix& m);

// dim ker(1 - g)
int fixed_space_dim(const CycMatrix& g);

// det(I - x g) as a dense univariate polynomial (constant term 1), computed
// by fraction-free elimination over the polynomial ring
UPoly det_one_minus_xg(const CycMatrix& g);

// eigenvalues as roots of unity with multiplicities; requires g^order_hint = 1
// with all eigenvalues representable at g's conductor
std::vector<std::pair<Cyclotomic, int>> eigenvalues(const CycMatrix& g, uint64_t order_hint);

}  // namespace crg
