#include "aqlab/symalg.hpp"

#include <map>

#include "aqlab/error.hpp"

namespace aqlab {

namespace {

using Monomial = std::vector<std::uint32_t>;

std::vector<Monomial> monomials(std::size_t dim, int d) {
  std::vector<Monomial> out;
  Monomial cur;
  auto rec = [&](auto&& self, std::uint32_t start, int left) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t i = start; i < dim; ++i) {
      cur.push_back(i);
      self(self, i, left - 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, d);
  return out;
}

std::map<Monomial, std::size_t> index_of(const std::vector<Monomial>& basis) {
  std::map<Monomial, std::size_t> idx;
  for (std::size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], i);
  return idx;
}

// Sym^d of a linear map given by its matrix.
Matrix power_of_map(const Matrix& m, int d, const FieldSpec& field, const std::vector<Monomial>& source,
                    const std::map<Monomial, std::size_t>& target) {
  Matrix cols = m.transpose();
  std::vector<Matrix::Row> out_cols;
  out_cols.reserve(source.size());
  for (const Monomial& mono : source) {
    std::map<Monomial, Scalar> acc{{Monomial{}, Scalar(1)}};
    for (std::uint32_t factor : mono) {
      std::map<Monomial, Scalar> next;
      for (const auto& [partial, c] : acc)
        for (const auto& [r, v] : cols.row(factor)) {
          Monomial merged = partial;
          merged.insert(std::upper_bound(merged.begin(), merged.end(), r), r);
          next[merged] += c * v;
        }
      acc = std::move(next);
    }
    Matrix::Row col;
    for (const auto& [mono_out, c] : acc) {
      Scalar v = field.reduce(c);
      if (sgn(v) != 0) col.emplace_back(static_cast<std::uint32_t>(target.at(mono_out)), v);
    }
    out_cols.push_back(std::move(col));
  }
  (void)d;
  return Matrix::from_columns(target.size(), out_cols);
}

}  // namespace

SimplicialVectorSpace symmetric_power(const SimplicialVectorSpace& v, int d) {
  if (d < 0) throw InvalidInput("negative symmetric power");
  const int T = v.truncation();
  std::vector<std::vector<Monomial>> bases;
  std::vector<std::map<Monomial, std::size_t>> idx;
  std::vector<std::size_t> dims;
  for (int m = 0; m <= T; ++m) {
    bases.push_back(monomials(v.dim(m), d));
    idx.push_back(index_of(bases.back()));
    dims.push_back(bases.back().size());
  }
  std::vector<std::vector<Matrix>> faces(static_cast<std::size_t>(T + 1)), degens(static_cast<std::size_t>(T + 1));
  for (int m = 0; m <= T; ++m) {
    const auto um = static_cast<std::size_t>(m);
    if (m > 0)
      for (int i = 0; i <= m; ++i) faces[um].push_back(power_of_map(v.face(m, i), d, v.field(), bases[um], idx[um - 1]));
    if (m < T)
      for (int j = 0; j <= m; ++j)
        degens[um].push_back(power_of_map(v.degeneracy(m, j), d, v.field(), bases[um], idx[um + 1]));
  }
  return SimplicialVectorSpace(v.field(), std::move(dims), std::move(faces), std::move(degens));
}

Matrix symmetric_multiplication(std::size_t dim, int a, int b) {
  if (a < 0 || b < 0) throw InvalidInput("negative weight");
  auto ba = monomials(dim, a);
  auto bb = monomials(dim, b);
  auto target = index_of(monomials(dim, a + b));
  std::vector<Matrix::Row> cols;
  cols.reserve(ba.size() * bb.size());
  for (const auto& x : ba)
    for (const auto& y : bb) {
      Monomial merged;
      std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(merged));
      cols.push_back({{static_cast<std::uint32_t>(target.at(merged)), Scalar(1)}});
    }
  return Matrix::from_columns(target.size(), cols);
}

// ---------------------------------------------------------------------------

WeightGradedAlgebra::WeightGradedAlgebra(FieldSpec field, int truncation, int max_weight)
    : field_(field), truncation_(truncation), max_weight_(max_weight) {
  if (truncation < 0) throw InvalidInput("truncation must be nonnegative");
  if (max_weight < 1) throw InvalidInput("weight bound must be at least 1");
}

WeightGradedAlgebra WeightGradedAlgebra::on_cells(const FieldSpec& field, CellComplex cells, int truncation,
                                                  int max_weight) {
  WeightGradedAlgebra a(field, truncation, max_weight);
  for (const auto& c : cells.cells)
    if (c.weight != 1) throw InvalidInput("algebra generators must have weight 1");
  a.model_ = std::make_shared<SymmetricAlgebraModel>(field, std::move(cells));
  a.base_ = std::make_shared<SimplicialVectorSpace>(materialize(*a.model_, 1, 1, truncation));
  return a;
}

WeightGradedAlgebra WeightGradedAlgebra::on_space(SimplicialVectorSpace base, int max_weight) {
  WeightGradedAlgebra a(base.field(), base.truncation(), max_weight);
  a.base_ = std::make_shared<SimplicialVectorSpace>(std::move(base));
  return a;
}

const SimplicialVectorSpace& WeightGradedAlgebra::base() const { return *base_; }

SimplicialVectorSpace WeightGradedAlgebra::component(int d) const {
  if (d < 0) throw InvalidInput("negative weight");
  if (model_) {
    if (d == 0) return constant_object(field_, 1, truncation_);
    return materialize(*model_, d, d, truncation_);
  }
  return symmetric_power(*base_, d);
}

Matrix WeightGradedAlgebra::multiplication(int a, int b, int level) const {
  if (level < 0 || level > truncation_) throw InvalidInput("level outside the truncation");
  return symmetric_multiplication(base_->dim(level), a, b);
}

GradedDims WeightGradedAlgebra::weight_homotopy(int d, int top_degree) const {
  if (model_) return model_homotopy(*model_, d, top_degree);
  if (top_degree >= truncation_)
    throw InvalidInput("homotopy of a materialized algebra is only available below its truncation");
  auto h = homotopy_dims(symmetric_power(*base_, d)).dims;
  h.values.resize(static_cast<std::size_t>(top_degree + 1), 0);
  return h;
}

WeightGradedAlgebra sphere_algebra(const FieldSpec& field, std::size_t q, int n, int truncation, int max_weight) {
  if (n < 0) throw InvalidInput("sphere degree must be nonnegative");
  if (truncation < n) throw InvalidInput("truncation must be at least the sphere degree");
  return WeightGradedAlgebra::on_cells(field, CellComplex::sphere(q, n), truncation, max_weight);
}

// ---------------------------------------------------------------------------

int HomotopyReport::stable_through() const {
  int k = -1;
  while (k + 1 < static_cast<int>(weight_stable.size()) && weight_stable[static_cast<std::size_t>(k + 1)]) ++k;
  return k;
}

HomotopyReport algebra_homotopy(const WeightGradedAlgebra& a, int top_degree) {
  if (top_degree < 0) throw InvalidInput("negative degree");
  HomotopyReport r;
  r.field = a.field();
  r.truncation = a.truncation();
  r.max_weight = a.max_weight();
  r.certified_degree = top_degree;
  r.dims.values.assign(static_cast<std::size_t>(top_degree + 1), 0);
  for (int d = 0; d <= a.max_weight(); ++d) {
    GradedDims h = a.weight_homotopy(d, top_degree);
    for (std::size_t k = 0; k < r.dims.values.size(); ++k) r.dims.values[k] += h.at(k);
    r.by_weight.push_back(std::move(h));
  }
  GradedDims extra = a.weight_homotopy(a.max_weight() + 1, top_degree);
  bool ok = true;
  for (int k = 0; k <= top_degree; ++k) {
    ok = ok && extra.at(static_cast<std::size_t>(k)) == 0;
    r.weight_stable.push_back(ok);
  }
  return r;
}

HomotopyReport sphere_homotopy(const FieldSpec& field, std::size_t q, int n, int truncation, int max_weight) {
  auto a = sphere_algebra(field, q, n, truncation, max_weight);
  HomotopyReport r = algebra_homotopy(a, truncation);
  r.q = q;
  r.n = n;
  return r;
}

nlohmann::json to_json(const HomotopyReport& r) {
  nlohmann::json j;
  j["field"] = r.field.characteristic();
  j["q"] = r.q;
  j["n"] = r.n;
  j["T"] = r.truncation;
  j["W"] = r.max_weight;
  j["dims"] = r.dims.values;
  j["certified_degree"] = r.certified_degree;
  j["stable_flags"] = r.weight_stable;
  nlohmann::json bw = nlohmann::json::array();
  for (const auto& d : r.by_weight) bw.push_back(d.values);
  j["by_weight"] = std::move(bw);
  return j;
}

SimplicialVectorSpace indecomposables(const WeightGradedAlgebra& a) { return a.base(); }

// ---------------------------------------------------------------------------

namespace {

ChainComplex weight_chains(const WeightGradedAlgebra& a, int d, int top_level) {
  if (a.model()) return normalized_complex(*a.model(), d, top_level).chains;
  if (top_level > a.truncation()) throw InvalidInput("degree too large for a materialized algebra");
  return normalized_chains(a.component(d));
}

}  // namespace

std::vector<HurewiczMap> hurewicz(const WeightGradedAlgebra& a, int top_degree) {
  if (top_degree < 0) throw InvalidInput("negative degree");
  std::vector<ChainComplex> complexes;
  for (int d = 1; d <= a.max_weight(); ++d) complexes.push_back(weight_chains(a, d, top_degree + 1));
  std::vector<HurewiczMap> out;
  for (int s = 0; s <= top_degree; ++s) {
    if (s >= complexes.front().top_degree() + 1) break;
    HurewiczMap h;
    h.degree = s;
    HomologyBasis q_basis = complexes.front().homology_basis(s);
    std::vector<Matrix::Row> cols;
    for (std::size_t w = 0; w < complexes.size(); ++w) {
      HomologyBasis hb = complexes[w].homology_basis(s);
      h.source_by_weight.push_back(hb.cycles.size());
      for (const Vector& z : hb.cycles) {
        Matrix::Row col;
        if (w == 0) {
          // The projection is the identity on the weight-1 summand.
          Vector c = homology_coordinates(q_basis, z, a.field());
          for (std::size_t i = 0; i < c.size(); ++i)
            if (sgn(c[i]) != 0) col.emplace_back(static_cast<std::uint32_t>(i), c[i]);
        }
        cols.push_back(std::move(col));
      }
    }
    h.matrix = Matrix::from_columns(q_basis.cycles.size(), cols);
    h.rank = rank(h.matrix, a.field());
    if (s == 0 && h.matrix.cols() != 0) throw InvalidInput("hurewicz: algebra is not connected");
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace aqlab
