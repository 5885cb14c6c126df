#pragma once

// Sparse Gaussian elimination templated on the field arithmetic.
//
// Pivot policy: rows are inserted in the order given; each incoming row is
// reduced on its leading entry only, against pivot rows normalized to a
// leading 1. The result is a deterministic function of the input order.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "aqlab/error.hpp"
#include "aqlab/exactfield.hpp"

namespace aqlab::detail {

struct PrimeOps {
  std::uint32_t p;
  using Elem = std::uint32_t;

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p ? s - p : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p);
  }
  Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
  Elem inv(Elem a) const {
    std::int64_t t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
      std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (t < 0) t += p;
    return static_cast<Elem>(t);
  }
  static bool is_zero(Elem a) { return a == 0; }
  static bool is_one(Elem a) { return a == 1; }
  Elem from_scalar(const Scalar& s) const {
    Elem num = static_cast<Elem>(mpz_fdiv_ui(s.get_num_mpz_t(), p));
    Elem den = static_cast<Elem>(mpz_fdiv_ui(s.get_den_mpz_t(), p));
    if (den == 0) throw FieldMismatch("denominator divisible by the characteristic");
    return den == 1 ? num : mul(num, inv(den));
  }
  static Scalar to_scalar(Elem e) { return Scalar(static_cast<unsigned long>(e)); }
  Elem from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    return static_cast<Elem>(r < 0 ? r + p : r);
  }
};

struct RationalOps {
  using Elem = mpq_class;

  static Elem add(const Elem& a, const Elem& b) { return a + b; }
  static Elem sub(const Elem& a, const Elem& b) { return a - b; }
  static Elem mul(const Elem& a, const Elem& b) { return a * b; }
  static Elem neg(const Elem& a) { return -a; }
  static Elem inv(const Elem& a) { return 1 / a; }
  static bool is_zero(const Elem& a) { return sgn(a) == 0; }
  static bool is_one(const Elem& a) { return a == 1; }
  static Elem from_scalar(const Scalar& s) { return s; }
  static Scalar to_scalar(const Elem& e) { return e; }
  static Elem from_int(std::int64_t v) { return Elem(mpz_class(static_cast<long>(v))); }
};

template <class Ops>
using SparseRow = std::vector<std::pair<std::uint32_t, typename Ops::Elem>>;

/// row <- row - c * pivot, both sorted by column.
template <class Ops>
SparseRow<Ops> axpy(const Ops& ops, const SparseRow<Ops>& row, const typename Ops::Elem& c,
                    const SparseRow<Ops>& pivot) {
  SparseRow<Ops> out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 0, j = 0;
  while (i < row.size() || j < pivot.size()) {
    if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
      out.push_back(row[i++]);
    } else if (i == row.size() || pivot[j].first < row[i].first) {
      out.emplace_back(pivot[j].first, ops.neg(ops.mul(c, pivot[j].second)));
      ++j;
    } else {
      auto v = ops.sub(row[i].second, ops.mul(c, pivot[j].second));
      if (!Ops::is_zero(v)) out.emplace_back(row[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class Ops>
class Echelon {
 public:
  using Elem = typename Ops::Elem;
  using Row = SparseRow<Ops>;

  Echelon(Ops ops, std::size_t cols) : ops_(std::move(ops)), pivot_of_col_(cols, -1) {}

  /// Leading-entry reduction against the current pivots.
  Row reduce(Row row) const {
    while (!row.empty()) {
      auto idx = pivot_of_col_[row.front().first];
      if (idx < 0) break;
      Elem c = row.front().second;
      row = axpy(ops_, row, c, rows_[static_cast<std::size_t>(idx)]);
    }
    return row;
  }

  /// Returns true when the row was independent of the current pivots.
  bool insert(Row row) {
    row = reduce(std::move(row));
    if (row.empty()) return false;
    Elem lead_inv = ops_.inv(row.front().second);
    if (!Ops::is_one(row.front().second))
      for (auto& e : row) e.second = ops_.mul(e.second, lead_inv);
    pivot_of_col_[row.front().first] = static_cast<std::int64_t>(rows_.size());
    rows_.push_back(std::move(row));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  std::int64_t pivot_row(std::uint32_t col) const { return pivot_of_col_[col]; }

  /// Clears every pivot column from every other row (reduced echelon form).
  void make_reduced() {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows_[a].front().first > rows_[b].front().first;
    });
    for (std::size_t idx : order) {
      Row& row = rows_[idx];
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t k = 1; k < row.size(); ++k) {
          auto p = pivot_of_col_[row[k].first];
          if (p >= 0 && static_cast<std::size_t>(p) != idx) {
            Elem c = row[k].second;
            row = axpy(ops_, row, c, rows_[static_cast<std::size_t>(p)]);
            changed = true;
            break;
          }
        }
      }
    }
  }

 private:
  Ops ops_;
  std::vector<Row> rows_;
  std::vector<std::int64_t> pivot_of_col_;
};

/// Fraction-free elimination over the integers for rank over Q. Rows are kept
/// primitive (content 1) with a positive leading entry. Throws IntegerOverflow
/// when an intermediate entry leaves int64; callers fall back to RationalOps.
struct IntegerOverflow {};

class IntegerEchelon {
 public:
  using Row = std::vector<std::pair<std::uint32_t, std::int64_t>>;

  explicit IntegerEchelon(std::size_t cols) : pivot_of_col_(cols, -1) {}

  bool insert(Row row) {
    while (!row.empty()) {
      auto idx = pivot_of_col_[row.front().first];
      if (idx < 0) break;
      row = combine(row, rows_[static_cast<std::size_t>(idx)]);
    }
    if (row.empty()) return false;
    make_primitive(row);
    pivot_of_col_[row.front().first] = static_cast<std::int64_t>(rows_.size());
    rows_.push_back(std::move(row));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw IntegerOverflow{};
    return out;
  }
  static std::int64_t sub(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_sub_overflow(a, b, &out)) throw IntegerOverflow{};
    return out;
  }
  static std::int64_t gcd(std::int64_t a, std::int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      std::int64_t t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  // lead(pivot) * row - lead(row) * pivot, divided by the gcd of the two leads.
  static Row combine(const Row& row, const Row& pivot) {
    std::int64_t a = pivot.front().second;
    std::int64_t b = row.front().second;
    const std::int64_t g = gcd(a, b);
    a /= g;
    b /= g;
    Row out;
    out.reserve(row.size() + pivot.size());
    std::size_t i = 0, j = 0;
    while (i < row.size() || j < pivot.size()) {
      if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
        out.emplace_back(row[i].first, mul(a, row[i].second));
        ++i;
      } else if (i == row.size() || pivot[j].first < row[i].first) {
        out.emplace_back(pivot[j].first, sub(0, mul(b, pivot[j].second)));
        ++j;
      } else {
        std::int64_t v = sub(mul(a, row[i].second), mul(b, pivot[j].second));
        if (v != 0) out.emplace_back(row[i].first, v);
        ++i;
        ++j;
      }
    }
    make_primitive(out);
    return out;
  }

  static void make_primitive(Row& row) {
    if (row.empty()) return;
    std::int64_t g = 0;
    for (const auto& e : row) {
      g = gcd(g, e.second);
      if (g == 1) break;
    }
    if (row.front().second < 0) g = -g;
    if (g != 1)
      for (auto& e : row) e.second /= g;
  }

  std::vector<Row> rows_;
  std::vector<std::int64_t> pivot_of_col_;
};

template <class Ops>
SparseRow<Ops> convert_row(const Ops& ops, const Matrix::Row& row) {
  SparseRow<Ops> out;
  out.reserve(row.size());
  for (const auto& [col, value] : row) {
    auto e = ops.from_scalar(value);
    if (!Ops::is_zero(e)) out.emplace_back(col, std::move(e));
  }
  return out;
}

/// Rank of a matrix with int64 entries given by sparse rows (sorted by column).
/// Rows are inserted shortest first (stable). Over Q the integer path is tried
/// first; on overflow the same rows are eliminated with rationals.
inline std::size_t integer_rows_rank(const FieldSpec& field, std::vector<IntegerEchelon::Row> rows, std::size_t cols) {
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  auto generic = [&](const auto& ops) {
    using Ops = std::decay_t<decltype(ops)>;
    Echelon<Ops> ech(ops, cols);
    for (const auto& r : rows) {
      SparseRow<Ops> row;
      row.reserve(r.size());
      for (const auto& [c, v] : r) {
        auto e = ops.from_int(v);
        if (!Ops::is_zero(e)) row.emplace_back(c, std::move(e));
      }
      ech.insert(std::move(row));
    }
    return ech.rank();
  };
  if (!field.is_rational()) return generic(PrimeOps{field.characteristic()});
  try {
    IntegerEchelon ech(cols);
    for (const auto& r : rows) ech.insert(r);
    return ech.rank();
  } catch (const IntegerOverflow&) {
    return generic(RationalOps{});
  }
}

/// Calls f(ops) with PrimeOps or RationalOps according to the field.
template <class F>
decltype(auto) with_ops(const FieldSpec& field, F&& f) {
  if (field.is_rational()) return f(RationalOps{});
  return f(PrimeOps{field.characteristic()});
}

}  // namespace aqlab::detail
