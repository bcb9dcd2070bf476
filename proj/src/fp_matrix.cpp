#include "borel4/fp_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace borel4 {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

int fp_normalize(long long x, int p) {
  long long r = x % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int fp_add(int a, int b, int p) { return (a + b) % p; }
int fp_sub(int a, int b, int p) { return fp_normalize(a - b, p); }
int fp_mul(int a, int b, int p) { return fp_normalize(static_cast<long long>(a) * b, p); }
int fp_neg(int a, int p) { return a == 0 ? 0 : p - a; }

int fp_pow(int a, long long e, int p) {
  int r = 1 % p;
  int base = fp_normalize(a, p);
  while (e > 0) {
    if (e & 1) r = fp_mul(r, base, p);
    base = fp_mul(base, base, p);
    e >>= 1;
  }
  return r;
}

int fp_inv(int a, int p) {
  a = fp_normalize(a, p);
  if (a == 0) throw std::domain_error("fp_inv: zero is not invertible");
  // extended Euclid
  int t = 0, new_t = 1;
  int r = p, new_r = a;
  while (new_r != 0) {
    int q = r / new_r;
    int tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return fp_normalize(t, p);
}

FpVector fpvec_add(const FpVector& a, const FpVector& b, int p) {
  if (a.size() != b.size()) throw std::invalid_argument("fpvec_add: length mismatch");
  FpVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fp_add(a[i], b[i], p);
  return out;
}

FpVector fpvec_scale(const FpVector& a, int c, int p) {
  FpVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fp_mul(a[i], c, p);
  return out;
}

void fpvec_axpy(FpVector& acc, int c, const FpVector& v, int p) {
  if (acc.size() != v.size()) throw std::invalid_argument("fpvec_axpy: length mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] = fp_normalize(acc[i] + static_cast<long long>(c) * v[i], p);
}

bool fpvec_is_zero(const FpVector& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

FpMatrix::FpMatrix(int p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), e_(rows * cols, 0) {
  if (!is_prime(p)) throw std::invalid_argument("FpMatrix: modulus must be prime");
}

FpMatrix FpMatrix::identity(int p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FpMatrix FpMatrix::from_rows(int p, std::size_t cols, const std::vector<FpVector>& rows) {
  FpMatrix m(p, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("from_rows: row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

void FpMatrix::set(std::size_t i, std::size_t j, long long v) {
  e_[i * cols_ + j] = fp_normalize(v, p_);
}

FpVector FpMatrix::row(std::size_t i) const {
  return FpVector(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_);
}

FpMatrix FpMatrix::transposed() const {
  FpMatrix t(p_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.set(j, i, (*this)(i, j));
  return t;
}

FpVector FpMatrix::apply(const FpVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
  FpVector out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    long long acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) acc += static_cast<long long>((*this)(i, j)) * v[j];
    out[i] = fp_normalize(acc, p_);
  }
  return out;
}

FpMatrix FpMatrix::multiply(const FpMatrix& rhs) const {
  if (p_ != rhs.p_) throw std::invalid_argument("multiply: modulus mismatch");
  if (cols_ != rhs.rows_) throw std::invalid_argument("multiply: dimension mismatch");
  FpMatrix out(p_, rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      int a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        out.set(i, j, out(i, j) + static_cast<long long>(a) * rhs(k, j));
    }
  return out;
}

bool FpMatrix::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](int x) { return x == 0; });
}

FpMatrix rref(const FpMatrix& m) {
  FpMatrix a = m;
  const int p = a.p();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < a.rows() && a(sel, col) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != pivot_row)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        int tmp = a(pivot_row, j);
        a.set(pivot_row, j, a(sel, j));
        a.set(sel, j, tmp);
      }
    int inv = fp_inv(a(pivot_row, col), p);
    for (std::size_t j = 0; j < a.cols(); ++j) a.set(pivot_row, j, fp_mul(a(pivot_row, j), inv, p));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == pivot_row) continue;
      int f = a(i, col);
      if (f == 0) continue;
      for (std::size_t j = 0; j < a.cols(); ++j)
        a.set(i, j, a(i, j) - static_cast<long long>(f) * a(pivot_row, j));
    }
    ++pivot_row;
  }
  return a;
}

int rank(const FpMatrix& m) {
  FpMatrix r = rref(m);
  int rk = 0;
  for (std::size_t i = 0; i < r.rows(); ++i)
    if (!fpvec_is_zero(r.row(i))) ++rk;
  return rk;
}

std::vector<FpVector> kernel_basis(const FpMatrix& m) {
  const int p = m.p();
  FpMatrix r = rref(m);
  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::size_t j = 0;
    while (j < r.cols() && r(i, j) == 0) ++j;
    if (j == r.cols()) break;
    pivot_col_of_row.push_back(static_cast<int>(j));
    is_pivot[j] = true;
  }
  std::vector<FpVector> basis;
  for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    FpVector v(m.cols(), 0);
    v[free_col] = 1;
    for (std::size_t i = 0; i < pivot_col_of_row.size(); ++i)
      v[pivot_col_of_row[i]] = fp_neg(r(i, free_col), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

int image_dim(const FpMatrix& m) { return rank(m); }

int quotient_dim(int ambient, int sub) {
  if (sub > ambient)
    throw std::invalid_argument("quotient_dim: subspace dimension exceeds ambient dimension");
  return ambient - sub;
}

EchelonSpan::EchelonSpan(int p, std::size_t width) : p_(p), width_(width) {
  if (!is_prime(p)) throw std::invalid_argument("EchelonSpan: modulus must be prime");
}

static int leading_index(const FpVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return static_cast<int>(i);
  return -1;
}

FpVector EchelonSpan::reduce(FpVector v) const {
  if (v.size() != width_) throw std::invalid_argument("EchelonSpan: width mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int c = v[pivot_of_row_[i]];
    if (c != 0) fpvec_axpy(v, fp_neg(c, p_), rows_[i], p_);
  }
  return v;
}

bool EchelonSpan::insert(FpVector v) {
  v = reduce(std::move(v));
  int piv = leading_index(v);
  if (piv < 0) return false;
  int inv = fp_inv(v[piv], p_);
  v = fpvec_scale(v, inv, p_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int c = rows_[i][piv];
    if (c != 0) fpvec_axpy(rows_[i], fp_neg(c, p_), v, p_);
  }
  rows_.push_back(std::move(v));
  pivot_of_row_.push_back(piv);
  return true;
}

bool EchelonSpan::contains(FpVector v) const { return fpvec_is_zero(reduce(std::move(v))); }

std::vector<FpVector> EchelonSpan::rows() const {
  std::vector<std::size_t> order(rows_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pivot_of_row_[a] < pivot_of_row_[b]; });
  std::vector<FpVector> out;
  out.reserve(rows_.size());
  for (std::size_t i : order) out.push_back(rows_[i]);
  return out;
}

LinearExtension::LinearExtension(int p, std::size_t src_width, std::size_t dst_width)
    : p_(p), src_width_(src_width), dst_width_(dst_width) {
  if (!is_prime(p)) throw std::invalid_argument("LinearExtension: modulus must be prime");
}

LinearExtension::Insert LinearExtension::insert(FpVector v, FpVector value) {
  if (v.size() != src_width_ || value.size() != dst_width_)
    throw std::invalid_argument("LinearExtension: width mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int piv = leading_index(rows_[i]);
    int c = v[piv];
    if (c != 0) {
      fpvec_axpy(v, fp_neg(c, p_), rows_[i], p_);
      fpvec_axpy(value, fp_neg(c, p_), values_[i], p_);
    }
  }
  if (fpvec_is_zero(v)) return fpvec_is_zero(value) ? Insert::Consistent : Insert::Conflict;
  int piv = leading_index(v);
  int inv = fp_inv(v[piv], p_);
  v = fpvec_scale(v, inv, p_);
  value = fpvec_scale(value, inv, p_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int c = rows_[i][piv];
    if (c != 0) {
      fpvec_axpy(rows_[i], fp_neg(c, p_), v, p_);
      fpvec_axpy(values_[i], fp_neg(c, p_), value, p_);
    }
  }
  rows_.push_back(std::move(v));
  values_.push_back(std::move(value));
  return Insert::NewPivot;
}

std::optional<FpVector> LinearExtension::eval(FpVector v) const {
  if (v.size() != src_width_) throw std::invalid_argument("LinearExtension: width mismatch");
  FpVector acc(dst_width_, 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int piv = leading_index(rows_[i]);
    int c = v[piv];
    if (c != 0) {
      fpvec_axpy(v, fp_neg(c, p_), rows_[i], p_);
      fpvec_axpy(acc, c, values_[i], p_);
    }
  }
  if (!fpvec_is_zero(v)) return std::nullopt;
  return acc;
}

std::optional<FpVector> coordinates_in(const std::vector<FpVector>& basis, const FpVector& v,
                                       int p) {
  if (basis.empty()) {
    if (fpvec_is_zero(v)) return FpVector{};
    return std::nullopt;
  }
  LinearExtension ext(p, basis[0].size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    FpVector unit(basis.size(), 0);
    unit[i] = 1;
    ext.insert(basis[i], std::move(unit));
  }
  return ext.eval(v);
}

}  // namespace borel4
