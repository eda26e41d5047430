#include "crg/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "crg/errors.hpp"

namespace crg {

CycMatrix::CycMatrix(uint32_t rows, uint32_t cols, uint32_t n)
    : rows_(rows), cols_(cols), n_(n), e_(rows * cols, Cyclotomic::zero(n)) {}

CycMatrix CycMatrix::identity(uint32_t r, uint32_t n) {
  CycMatrix m(r, r, n);
  for (uint32_t i = 0; i < r; ++i) m.set(i, i, Cyclotomic::one(n));
  return m;
}

void CycMatrix::set(uint32_t i, uint32_t j, Cyclotomic v) {
  if (v.conductor() != n_) v = v.embed(n_);
  e_[i * cols_ + j] = std::move(v);
}

CycMatrix CycMatrix::operator*(const CycMatrix& o) const {
  if (cols_ != o.rows_) throw Error("matrix shape mismatch");
  CycMatrix out(rows_, o.cols_, n_);
  for (uint32_t i = 0; i < rows_; ++i) {
    for (uint32_t k = 0; k < cols_; ++k) {
      const Cyclotomic& a = at(i, k);
      if (a.is_zero()) continue;
      for (uint32_t j = 0; j < o.cols_; ++j) {
        const Cyclotomic& b = o.at(k, j);
        if (b.is_zero()) continue;
        out.e_[i * o.cols_ + j] = out.e_[i * o.cols_ + j] + a * b;
      }
    }
  }
  return out;
}

CycMatrix CycMatrix::operator+(const CycMatrix& o) const {
  CycMatrix out(rows_, cols_, n_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] + o.e_[i];
  return out;
}

CycMatrix CycMatrix::operator-(const CycMatrix& o) const {
  CycMatrix out(rows_, cols_, n_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] - o.e_[i];
  return out;
}

CycMatrix CycMatrix::scaled(const Cyclotomic& c) const {
  CycMatrix out(rows_, cols_, n_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] * c;
  return out;
}

CycMatrix CycMatrix::transpose() const {
  CycMatrix out(cols_, rows_, n_);
  for (uint32_t i = 0; i < rows_; ++i)
    for (uint32_t j = 0; j < cols_; ++j) out.e_[j * rows_ + i] = at(i, j);
  return out;
}

CycMatrix CycMatrix::conj_transpose() const {
  CycMatrix out(cols_, rows_, n_);
  for (uint32_t i = 0; i < rows_; ++i)
    for (uint32_t j = 0; j < cols_; ++j) out.e_[j * rows_ + i] = at(i, j).conj();
  return out;
}

CycMatrix CycMatrix::galois(long k) const {
  CycMatrix out(rows_, cols_, n_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i].galois(k);
  return out;
}

CycMatrix CycMatrix::embed(uint32_t m) const {
  CycMatrix out(rows_, cols_, m);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i].embed(m);
  return out;
}

CycMatrix CycMatrix::inverse() const {
  if (rows_ != cols_) throw Error("inverse needs a square matrix");
  uint32_t r = rows_;
  // eliminate on [M | I]
  std::vector<std::vector<Cyclotomic>> a(r);
  for (uint32_t i = 0; i < r; ++i) {
    a[i].assign(2 * r, Cyclotomic::zero(n_));
    for (uint32_t j = 0; j < r; ++j) a[i][j] = at(i, j);
    a[i][r + i] = Cyclotomic::one(n_);
  }
  for (uint32_t c = 0; c < r; ++c) {
    uint32_t piv = c;
    while (piv < r && a[piv][c].is_zero()) ++piv;
    if (piv == r) throw Error("singular matrix");
    std::swap(a[c], a[piv]);
    Cyclotomic inv = a[c][c].inverse();
    for (uint32_t j = 0; j < 2 * r; ++j) a[c][j] = a[c][j] * inv;
    for (uint32_t i = 0; i < r; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      Cyclotomic f = a[i][c];
      for (uint32_t j = c; j < 2 * r; ++j) a[i][j] = a[i][j] - f * a[c][j];
    }
  }
  CycMatrix out(r, r, n_);
  for (uint32_t i = 0; i < r; ++i)
    for (uint32_t j = 0; j < r; ++j) out.set(i, j, a[i][r + j]);
  return out;
}

Cyclotomic CycMatrix::trace() const {
  Cyclotomic t = Cyclotomic::zero(n_);
  for (uint32_t i = 0; i < rows_; ++i) t = t + at(i, i);
  return t;
}

bool CycMatrix::operator<(const CycMatrix& o) const {
  if (rows_ != o.rows_) return rows_ < o.rows_;
  if (cols_ != o.cols_) return cols_ < o.cols_;
  for (size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] != o.e_[i]) return e_[i] < o.e_[i];
  }
  return false;
}

bool CycMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (uint32_t i = 0; i < rows_; ++i)
    for (uint32_t j = 0; j < cols_; ++j) {
      if (i == j ? !at(i, j).is_one() : !at(i, j).is_zero()) return false;
    }
  return true;
}

std::size_t CycMatrix::hash() const {
  std::size_t h = rows_ * 31 + cols_;
  for (auto& c : e_) hash_mix(h, c.hash());
  return h;
}

std::string CycMatrix::render() const {
  std::ostringstream os;
  os << "[";
  for (uint32_t i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (uint32_t j = 0; j < cols_; ++j) {
      if (j) os << ", ";
      os << at(i, j).render();
    }
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------

// row echelon reduction in place; returns pivot columns
std::vector<int> row_echelon(std::vector<std::vector<Cyclotomic>>& a) {
  std::vector<int> pivots;
  size_t rows = a.size();
  if (rows == 0) return pivots;
  size_t cols = a[0].size();
  size_t rk = 0;
  for (size_t c = 0; c < cols && rk < rows; ++c) {
    size_t piv = SIZE_MAX;
    for (size_t i = rk; i < rows; ++i) {
      if (!a[i][c].is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv == SIZE_MAX) continue;
    std::swap(a[rk], a[piv]);
    Cyclotomic inv = a[rk][c].inverse();
    for (size_t j = c; j < cols; ++j) a[rk][j] = a[rk][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == rk || a[i][c].is_zero()) continue;
      Cyclotomic f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[rk][j];
    }
    pivots.push_back((int)c);
    ++rk;
  }
  return pivots;
}

namespace {

std::vector<std::vector<Cyclotomic>> to_rows(const CycMatrix& m) {
  std::vector<std::vector<Cyclotomic>> a(m.rows());
  for (uint32_t i = 0; i < m.rows(); ++i) {
    a[i].reserve(m.cols());
    for (uint32_t j = 0; j < m.cols(); ++j) a[i].push_back(m.at(i, j));
  }
  return a;
}

}  // namespace

int rank(const CycMatrix& m) {
  auto a = to_rows(m);
  return (int)row_echelon(a).size();
}

std::vector<std::vector<Cyclotomic>> kernel_basis(const CycMatrix& m) {
  auto a = to_rows(m);
  std::vector<int> pivots = row_echelon(a);
  uint32_t cols = m.cols();
  std::vector<char> is_pivot(cols, 0);
  for (int c : pivots) is_pivot[c] = 1;
  std::vector<std::vector<Cyclotomic>> basis;
  for (uint32_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Cyclotomic> v(cols, Cyclotomic::zero(m.conductor()));
    v[f] = Cyclotomic::one(m.conductor());
    for (size_t r = 0; r < pivots.size(); ++r) {
      // pivot row r has leading 1 at pivots[r]
      v[pivots[r]] = -a[r][f];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

int fixed_space_dim(const CycMatrix& g) {
  if (g.rows() != g.cols()) throw Error("fixed_space_dim needs a square matrix");
  CycMatrix d = CycMatrix::identity(g.rows(), g.conductor()) - g;
  return (int)g.rows() - rank(d);
}

UPoly det_one_minus_xg(const CycMatrix& g) {
  if (g.rows() != g.cols()) throw Error("det needs a square matrix");
  uint32_t r = g.rows();
  uint32_t n = g.conductor();
  if (r == 0) return {Cyclotomic::one(n)};
  // Bareiss fraction-free elimination over Q(zeta)[x]
  std::vector<std::vector<UPoly>> a(r, std::vector<UPoly>(r));
  for (uint32_t i = 0; i < r; ++i) {
    for (uint32_t j = 0; j < r; ++j) {
      UPoly p;
      Cyclotomic c0 = i == j ? Cyclotomic::one(n) : Cyclotomic::zero(n);
      Cyclotomic c1 = -g.at(i, j);
      p.push_back(std::move(c0));
      p.push_back(std::move(c1));
      upoly_trim(p);
      a[i][j] = std::move(p);
    }
  }
  UPoly prev = {Cyclotomic::one(n)};
  int sign = 1;
  for (uint32_t k = 0; k + 1 < r; ++k) {
    if (a[k][k].empty()) {
      uint32_t sw = k + 1;
      while (sw < r && a[sw][k].empty()) ++sw;
      if (sw == r) return {};  // singular: zero determinant
      std::swap(a[k], a[sw]);
      sign = -sign;
    }
    for (uint32_t i = k + 1; i < r; ++i) {
      for (uint32_t j = k + 1; j < r; ++j) {
        UPoly t = upoly_sub(upoly_mul(a[k][k], a[i][j]), upoly_mul(a[i][k], a[k][j]));
        a[i][j] = t.empty() ? t : upoly_div_exact(t, prev);
      }
      a[i][k].clear();
    }
    prev = a[k][k];
  }
  UPoly det = a[r - 1][r - 1];
  if (sign < 0) {
    for (auto& c : det) c = -c;
  }
  return det;
}

std::vector<std::pair<Cyclotomic, int>> eigenvalues(const CycMatrix& g, uint64_t order_hint) {
  if (g.rows() != g.cols()) throw Error("eigenvalues need a square matrix");
  uint32_t r = g.rows();
  uint32_t n = g.conductor();
  UPoly chi = det_one_minus_xg(g);
  // roots of unity in Q(zeta_n) form mu_N with N = n (n even) or 2n (n odd)
  uint64_t N = n % 2 == 0 ? n : 2ull * n;
  uint64_t gg = std::gcd<uint64_t>(N, order_hint);
  uint64_t step = N / gg;
  auto omega_pow = [&](long j) {
    // (primitive N-th root)^j
    if (n % 2 == 0) return Cyclotomic::root(n, j);
    Cyclotomic v = Cyclotomic::root(n, j);
    return (j % 2 != 0) ? -v : v;
  };
  std::vector<std::pair<Cyclotomic, int>> out;
  int total = 0;
  for (uint64_t j = 0; j < N; j += step) {
    Cyclotomic lam = omega_pow((long)j);
    // lam is an eigenvalue iff det(1 - x g) vanishes at x = lam^{-1}
    if (!upoly_eval(chi, omega_pow(-(long)j)).is_zero()) continue;
    CycMatrix d = g - CycMatrix::identity(r, n).scaled(lam);
    int mult = (int)r - rank(d);
    if (mult > 0) {
      out.emplace_back(std::move(lam), mult);
      total += mult;
    }
  }
  if (total != (int)r)
    throw StructureError("eigenvalue multiplicities sum to " + std::to_string(total) +
                         ", expected " + std::to_string(r) +
                         " (wrong order hint or non-semisimple input)");
  std::sort(out.begin(), out.end(),
            [](auto& x, auto& y) { return x.first < y.first; });
  return out;
}

}  // namespace crg
