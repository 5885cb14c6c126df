#pragma once

// Exact linear algebra over the rationals and prime fields.
//
// Matrices act on column vectors: an m x n matrix is a map from an
// n-dimensional space to an m-dimensional one. Storage is sparse by rows.
// Entries are rationals; over F_p every entry must be a canonical
// representative 0..p-1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace aqlab {

using Scalar = mpq_class;
using Vector = std::vector<Scalar>;

class FieldSpec {
 public:
  /// Characteristic 0 (the rationals) or a prime below 2^31.
  explicit FieldSpec(std::uint32_t characteristic = 0);

  static FieldSpec rationals() { return FieldSpec(0); }
  static FieldSpec prime(std::uint32_t p) { return FieldSpec(p); }

  std::uint32_t characteristic() const { return characteristic_; }
  bool is_rational() const { return characteristic_ == 0; }
  std::string name() const;

  /// Canonical image of an arbitrary rational (throws if the denominator is
  /// divisible by p).
  Scalar reduce(const Scalar& value) const;
  Scalar reduce(std::int64_t value) const;
  bool is_canonical(const Scalar& value) const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.characteristic_ == b.characteristic_;
  }
  friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return !(a == b); }

 private:
  std::uint32_t characteristic_;
};

bool is_prime(std::uint64_t n);

class Matrix {
 public:
  using Entry = std::pair<std::uint32_t, Scalar>;
  using Row = std::vector<Entry>;  // sorted by column, no explicit zeros

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  static Matrix identity(std::size_t n);
  static Matrix from_dense(const std::vector<std::vector<Scalar>>& rows, std::size_t cols);
  static Matrix from_dense(const std::vector<std::vector<long>>& rows);
  /// Builds a matrix from sparse columns (each sorted or not; duplicates summed).
  static Matrix from_columns(std::size_t rows, const std::vector<Row>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const;
  bool is_zero() const { return nonzeros() == 0; }

  const Row& row(std::size_t i) const { return data_[i]; }
  Scalar at(std::size_t i, std::size_t j) const;
  /// Replaces row i; entries are sorted and zeros dropped.
  void set_row(std::size_t i, Row row);

  Matrix transpose() const;
  std::vector<std::vector<Scalar>> to_dense() const;
  Vector column(std::size_t j) const;
  Vector apply(const Vector& x, const FieldSpec& field) const;

  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

/// Product a * b with entries reduced into the field.
Matrix multiply(const Matrix& a, const Matrix& b, const FieldSpec& field);
/// Sum a + coeff * b, reduced into the field.
Matrix add_scaled(const Matrix& a, const Matrix& b, const Scalar& coeff, const FieldSpec& field);
/// Block-diagonal sum.
Matrix direct_sum(const Matrix& a, const Matrix& b);
/// Kronecker product; basis (i, j) of the result is index i * b_dim + j.
Matrix kronecker(const Matrix& a, const Matrix& b, const FieldSpec& field);

/// Entrywise canonical image in the field (throws FieldMismatch on a
/// denominator divisible by p).
Matrix reduce_matrix(const Matrix& m, const FieldSpec& field);

/// Throws FieldMismatch when an entry is not canonical for the field.
void require_canonical(const Matrix& m, const FieldSpec& field);

std::size_t rank(const Matrix& m, const FieldSpec& field);

/// Columns span ker m; reduced-echelon construction, one column per free variable.
Matrix kernel_basis(const Matrix& m, const FieldSpec& field);

/// dim ker(d_out) - rank(d_in) for d_in: C_{n+1} -> C_n and d_out: C_n -> C_{n-1}.
/// Throws InvalidInput if the maps are not composable or d_out * d_in != 0.
std::size_t homology_dim(const Matrix& d_in, const Matrix& d_out, const FieldSpec& field);

/// Some x with a x = b, or nullopt when the system is inconsistent.
std::optional<Vector> solve(const Matrix& a, const Vector& b, const FieldSpec& field);

/// Indices (into `candidates`) of a maximal subset of candidate vectors that is
/// linearly independent modulo span(base). Greedy in the given order.
std::vector<std::size_t> independent_modulo(const std::vector<Vector>& base,
                                            const std::vector<Vector>& candidates,
                                            const FieldSpec& field);

/// Chosen cycles whose classes form a basis of H = ker(d_out) / im(d_in).
struct HomologyBasis {
  std::vector<Vector> cycles;
  Matrix boundaries;  // columns span im(d_in)
};

HomologyBasis homology_basis(const Matrix& d_in, const Matrix& d_out, const FieldSpec& field);

/// Coordinates of a cycle's class in the given homology basis.
Vector homology_coordinates(const HomologyBasis& basis, const Vector& cycle, const FieldSpec& field);

}  // namespace aqlab
