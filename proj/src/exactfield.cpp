#include "aqlab/exactfield.hpp"

#include <algorithm>
#include <map>

#include "aqlab/error.hpp"
#include "elimination.hpp"

namespace aqlab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldSpec::FieldSpec(std::uint32_t characteristic) : characteristic_(characteristic) {
  if (characteristic != 0 && (!is_prime(characteristic) || characteristic >= (1u << 31)))
    throw InvalidInput("field characteristic must be 0 or a prime below 2^31, got " +
                       std::to_string(characteristic));
}

std::string FieldSpec::name() const {
  return is_rational() ? "Q" : "F_" + std::to_string(characteristic_);
}

Scalar FieldSpec::reduce(const Scalar& value) const {
  if (is_rational()) return value;
  detail::PrimeOps ops{characteristic_};
  return detail::PrimeOps::to_scalar(ops.from_scalar(value));
}

Scalar FieldSpec::reduce(std::int64_t value) const {
  if (is_rational()) return Scalar(static_cast<long>(value));
  std::int64_t r = value % static_cast<std::int64_t>(characteristic_);
  if (r < 0) r += characteristic_;
  return Scalar(static_cast<long>(r));
}

bool FieldSpec::is_canonical(const Scalar& value) const {
  if (is_rational()) return true;
  return value.get_den() == 1 && sgn(value) >= 0 && value < characteristic_;
}

// ---------------------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(static_cast<std::uint32_t>(i), 1);
  return m;
}

Matrix Matrix::from_dense(const std::vector<std::vector<Scalar>>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InvalidInput("ragged dense matrix");
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(rows[i][j]) != 0) m.data_[i].emplace_back(static_cast<std::uint32_t>(j), rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_dense(const std::vector<std::vector<long>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<std::vector<Scalar>> q(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (long v : rows[i]) q[i].emplace_back(v);
  return from_dense(q, cols);
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Row>& columns) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [i, v] : columns[j]) {
      if (i >= rows) throw InvalidInput("column entry out of range");
      m.data_[i].emplace_back(static_cast<std::uint32_t>(j), v);
    }
  for (auto& r : m.data_) {
    // Columns are visited in increasing order, so rows are sorted; merge duplicates.
    Row merged;
    for (auto& e : r) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(std::move(e));
    }
    std::erase_if(merged, [](const Entry& e) { return sgn(e.second) == 0; });
    r = std::move(merged);
  }
  return m;
}

std::size_t Matrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const {
  const auto& r = data_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Entry& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) return it->second;
  return 0;
}

void Matrix::set_row(std::size_t i, Row row) {
  std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Row merged;
  for (auto& e : row) {
    if (e.first >= cols_) throw InvalidInput("row entry out of range");
    if (!merged.empty() && merged.back().first == e.first)
      merged.back().second += e.second;
    else
      merged.push_back(std::move(e));
  }
  std::erase_if(merged, [](const Entry& e) { return sgn(e.second) == 0; });
  data_.at(i) = std::move(merged);
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) t.data_[j].emplace_back(static_cast<std::uint32_t>(i), v);
  return t;
}

std::vector<std::vector<Scalar>> Matrix::to_dense() const {
  std::vector<std::vector<Scalar>> d(rows_, std::vector<Scalar>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) d[i][j] = v;
  return d;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

Vector Matrix::apply(const Vector& x, const FieldSpec& field) const {
  if (x.size() != cols_) throw InvalidInput("vector length does not match matrix columns");
  Vector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar acc = 0;
    for (const auto& [j, v] : data_[i]) acc += v * x[j];
    y[i] = field.reduce(acc);
  }
  return y;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Matrix multiply(const Matrix& a, const Matrix& b, const FieldSpec& field) {
  if (a.cols() != b.rows()) throw InvalidInput("matrix product: shapes do not compose");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::map<std::uint32_t, Scalar> acc;
    for (const auto& [k, v] : a.row(i))
      for (const auto& [j, w] : b.row(k)) acc[j] += v * w;
    Matrix::Row r;
    for (auto& [j, v] : acc) {
      Scalar red = field.reduce(v);
      if (sgn(red) != 0) r.emplace_back(j, red);
    }
    c.set_row(i, std::move(r));
  }
  return c;
}

Matrix add_scaled(const Matrix& a, const Matrix& b, const Scalar& coeff, const FieldSpec& field) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("matrix sum: shape mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::map<std::uint32_t, Scalar> acc;
    for (const auto& [j, v] : a.row(i)) acc[j] += v;
    for (const auto& [j, v] : b.row(i)) acc[j] += coeff * v;
    Matrix::Row r;
    for (auto& [j, v] : acc) {
      Scalar red = field.reduce(v);
      if (sgn(red) != 0) r.emplace_back(j, red);
    }
    c.set_row(i, std::move(r));
  }
  return c;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) c.set_row(i, a.row(i));
  for (std::size_t i = 0; i < b.rows(); ++i) {
    Matrix::Row r;
    for (const auto& [j, v] : b.row(i)) r.emplace_back(static_cast<std::uint32_t>(j + a.cols()), v);
    c.set_row(a.rows() + i, std::move(r));
  }
  return c;
}

Matrix kronecker(const Matrix& a, const Matrix& b, const FieldSpec& field) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < b.rows(); ++k) {
      Matrix::Row r;
      for (const auto& [j, v] : a.row(i))
        for (const auto& [l, w] : b.row(k))
          r.emplace_back(static_cast<std::uint32_t>(j * b.cols() + l), field.reduce(v * w));
      c.set_row(i * b.rows() + k, std::move(r));
    }
  return c;
}

Matrix reduce_matrix(const Matrix& m, const FieldSpec& field) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Matrix::Row r;
    for (const auto& [j, v] : m.row(i)) r.emplace_back(j, field.reduce(v));
    out.set_row(i, std::move(r));
  }
  return out;
}

void require_canonical(const Matrix& m, const FieldSpec& field) {
  if (field.is_rational()) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& [j, v] : m.row(i))
      if (!field.is_canonical(v))
        throw FieldMismatch("entry " + v.get_str() + " at (" + std::to_string(i) + "," +
                            std::to_string(j) + ") is not a canonical element of " + field.name());
}

// ---------------------------------------------------------------------------

namespace {

template <class Ops>
std::size_t rank_impl(const Ops& ops, const Matrix& m) {
  // Eliminate along the shorter side; rows sorted by sparsity (stable).
  const bool use_rows = m.rows() <= m.cols();
  Matrix src = use_rows ? m : m.transpose();
  std::vector<std::size_t> order(src.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return src.row(a).size() < src.row(b).size();
  });
  detail::Echelon<Ops> ech(ops, src.cols());
  for (std::size_t i : order) ech.insert(detail::convert_row(ops, src.row(i)));
  return ech.rank();
}

template <class Ops>
Matrix kernel_impl(const Ops& ops, const Matrix& m) {
  detail::Echelon<Ops> ech(ops, m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) ech.insert(detail::convert_row(ops, m.row(i)));
  ech.make_reduced();
  std::vector<Matrix::Row> columns;
  for (std::uint32_t free = 0; free < m.cols(); ++free) {
    if (ech.pivot_row(free) >= 0) continue;
    Matrix::Row col;
    col.emplace_back(free, 1);
    for (const auto& row : ech.rows()) {
      for (const auto& [c, v] : row) {
        if (c == free) {
          col.emplace_back(row.front().first, Ops::to_scalar(ops.neg(v)));
          break;
        }
        if (c > free) break;
      }
    }
    columns.push_back(std::move(col));
  }
  return Matrix::from_columns(m.cols(), columns);
}

template <class Ops>
std::optional<Vector> solve_impl(const Ops& ops, const Matrix& a, const Vector& b) {
  const auto rhs_col = static_cast<std::uint32_t>(a.cols());
  detail::Echelon<Ops> ech(ops, a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = detail::convert_row(ops, a.row(i));
    auto rhs = ops.from_scalar(b[i]);
    if (!Ops::is_zero(rhs)) row.emplace_back(rhs_col, rhs);
    ech.insert(std::move(row));
  }
  if (ech.pivot_row(rhs_col) >= 0) return std::nullopt;
  ech.make_reduced();
  Vector x(a.cols());
  for (const auto& row : ech.rows())
    if (row.back().first == rhs_col) x[row.front().first] = Ops::to_scalar(row.back().second);
  return x;
}

template <class Ops>
std::vector<std::size_t> independent_impl(const Ops& ops, const std::vector<Vector>& base,
                                          const std::vector<Vector>& candidates, std::size_t dim) {
  auto to_row = [&](const Vector& v) {
    detail::SparseRow<Ops> r;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto e = ops.from_scalar(v[i]);
      if (!Ops::is_zero(e)) r.emplace_back(static_cast<std::uint32_t>(i), e);
    }
    return r;
  };
  detail::Echelon<Ops> ech(ops, dim);
  for (const auto& v : base) ech.insert(to_row(v));
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (ech.insert(to_row(candidates[i]))) picked.push_back(i);
  return picked;
}

}  // namespace

std::size_t rank(const Matrix& m, const FieldSpec& field) {
  require_canonical(m, field);
  // Integral matrices: fraction-free path (rank over Z = rank over Q).
  const bool use_rows = m.rows() <= m.cols();
  const Matrix src = use_rows ? m : m.transpose();
  std::vector<detail::IntegerEchelon::Row> int_rows;
  bool integral = true;
  for (std::size_t i = 0; i < src.rows() && integral; ++i) {
    detail::IntegerEchelon::Row r;
    for (const auto& [j, v] : src.row(i)) {
      if (v.get_den() != 1 || !v.get_num().fits_slong_p()) {
        integral = false;
        break;
      }
      r.emplace_back(j, v.get_num().get_si());
    }
    int_rows.push_back(std::move(r));
  }
  if (integral) return detail::integer_rows_rank(field, std::move(int_rows), src.cols());
  return detail::with_ops(field, [&](auto ops) { return rank_impl(ops, m); });
}

Matrix kernel_basis(const Matrix& m, const FieldSpec& field) {
  require_canonical(m, field);
  return detail::with_ops(field, [&](auto ops) { return kernel_impl(ops, m); });
}

std::size_t homology_dim(const Matrix& d_in, const Matrix& d_out, const FieldSpec& field) {
  if (d_in.rows() != d_out.cols())
    throw InvalidInput("homology_dim: incoming map lands in dimension " + std::to_string(d_in.rows()) +
                       " but outgoing map starts from " + std::to_string(d_out.cols()));
  require_canonical(d_in, field);
  require_canonical(d_out, field);
  if (!multiply(d_out, d_in, field).is_zero()) throw InvalidInput("homology_dim: d o d != 0");
  return d_out.cols() - rank(d_out, field) - rank(d_in, field);
}

std::optional<Vector> solve(const Matrix& a, const Vector& b, const FieldSpec& field) {
  if (b.size() != a.rows()) throw InvalidInput("solve: right-hand side has wrong length");
  return detail::with_ops(field, [&](auto ops) { return solve_impl(ops, a, b); });
}

std::vector<std::size_t> independent_modulo(const std::vector<Vector>& base,
                                            const std::vector<Vector>& candidates,
                                            const FieldSpec& field) {
  std::size_t dim = 0;
  if (!base.empty()) dim = base.front().size();
  else if (!candidates.empty()) dim = candidates.front().size();
  return detail::with_ops(field,
                          [&](auto ops) { return independent_impl(ops, base, candidates, dim); });
}

HomologyBasis homology_basis(const Matrix& d_in, const Matrix& d_out, const FieldSpec& field) {
  if (d_in.rows() != d_out.cols()) throw InvalidInput("homology_basis: maps do not compose");
  Matrix z = kernel_basis(d_out, field);
  std::vector<Vector> boundary_cols, cycle_cols;
  for (std::size_t j = 0; j < d_in.cols(); ++j) boundary_cols.push_back(d_in.column(j));
  for (std::size_t j = 0; j < z.cols(); ++j) cycle_cols.push_back(z.column(j));
  HomologyBasis basis;
  for (std::size_t idx : independent_modulo(boundary_cols, cycle_cols, field))
    basis.cycles.push_back(cycle_cols[idx]);
  basis.boundaries = d_in;
  return basis;
}

Vector homology_coordinates(const HomologyBasis& basis, const Vector& cycle, const FieldSpec& field) {
  const std::size_t dim = cycle.size();
  const std::size_t h = basis.cycles.size();
  std::vector<Matrix::Row> cols;
  for (const auto& c : basis.cycles) {
    Matrix::Row r;
    for (std::size_t i = 0; i < dim; ++i)
      if (sgn(c[i]) != 0) r.emplace_back(static_cast<std::uint32_t>(i), c[i]);
    cols.push_back(std::move(r));
  }
  Matrix bt = basis.boundaries.transpose();
  for (std::size_t j = 0; j < bt.rows(); ++j) cols.push_back(bt.row(j));
  Matrix system = Matrix::from_columns(dim, cols);
  auto x = solve(system, cycle, field);
  if (!x) throw InvalidInput("homology_coordinates: vector is not a cycle in the span");
  return Vector(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(h));
}

}  // namespace aqlab
