#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace borel4 {

/// Residue arithmetic in the prime field F_p. Values are kept in [0, p).
bool is_prime(int p);
int fp_normalize(long long x, int p);
int fp_add(int a, int b, int p);
int fp_sub(int a, int b, int p);
int fp_mul(int a, int b, int p);
int fp_neg(int a, int p);
int fp_inv(int a, int p);
int fp_pow(int a, long long e, int p);

/// Coordinate vector with entries already reduced mod p. The modulus is
/// carried by the containers that own the vector.
using FpVector = std::vector<int>;

FpVector fpvec_add(const FpVector& a, const FpVector& b, int p);
FpVector fpvec_scale(const FpVector& a, int c, int p);
void fpvec_axpy(FpVector& acc, int c, const FpVector& v, int p); // acc += c*v
bool fpvec_is_zero(const FpVector& v);

/// Dense matrix over F_p, row major. Every operation checks that the
/// moduli of its operands agree; mixing moduli throws.
class FpMatrix {
 public:
  FpMatrix(int p, std::size_t rows, std::size_t cols);
  static FpMatrix identity(int p, std::size_t n);
  static FpMatrix from_rows(int p, std::size_t cols, const std::vector<FpVector>& rows);

  int p() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  int operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, long long v);

  FpVector row(std::size_t i) const;
  FpMatrix transposed() const;

  /// Matrix-vector and matrix-matrix products.
  FpVector apply(const FpVector& v) const;          // length rows(), v has length cols()
  FpMatrix multiply(const FpMatrix& rhs) const;

  bool is_zero() const;
  bool operator==(const FpMatrix& o) const = default;

 private:
  int p_;
  std::size_t rows_, cols_;
  std::vector<int> e_;
};

int rank(const FpMatrix& m);
FpMatrix rref(const FpMatrix& m);

/// Basis of the right null space {v : m v = 0}, one vector per free
/// column of the reduced echelon form, ordered by free column index.
std::vector<FpVector> kernel_basis(const FpMatrix& m);

int image_dim(const FpMatrix& m);

/// ambient - sub; throws std::invalid_argument when sub > ambient.
int quotient_dim(int ambient, int sub);

/// Growable span of row vectors kept in reduced echelon form. The rows
/// returned by rows() are the canonical RREF basis of the span, so two
/// spans are equal iff their rows compare equal.
class EchelonSpan {
 public:
  EchelonSpan(int p, std::size_t width);

  /// Reduce v against the span and adjoin the residual if non-zero.
  /// Returns true when the span grew.
  bool insert(FpVector v);
  bool contains(FpVector v) const;
  FpVector reduce(FpVector v) const;

  int dim() const { return static_cast<int>(rows_.size()); }
  std::size_t width() const { return width_; }
  int p() const { return p_; }
  std::vector<FpVector> rows() const;  // sorted by pivot column

 private:
  int p_;
  std::size_t width_;
  std::vector<int> pivot_of_row_;      // parallel to rows_, strictly handled via sort on demand
  std::vector<FpVector> rows_;         // each with leading 1, mutually reduced
};

/// Partial linear map given by (vector, value) samples, extended by
/// linearity. Detects samples that contradict earlier ones, which is how
/// ill-posed differential specifications surface.
class LinearExtension {
 public:
  enum class Insert { NewPivot, Consistent, Conflict };

  LinearExtension(int p, std::size_t src_width, std::size_t dst_width);

  Insert insert(FpVector v, FpVector value);

  /// Value of the extension at v, or nullopt when v is outside the span
  /// of the inserted samples.
  std::optional<FpVector> eval(FpVector v) const;

  int dim() const { return static_cast<int>(rows_.size()); }

 private:
  int p_;
  std::size_t src_width_, dst_width_;
  std::vector<FpVector> rows_, values_;
};

/// Coordinates of v in the given spanning list, or nullopt when v is not
/// in the span. Basis vectors need not be independent; any valid
/// coordinate vector is returned (deterministically).
std::optional<FpVector> coordinates_in(const std::vector<FpVector>& basis, const FpVector& v,
                                       int p);

}  // namespace borel4
