#include "aqlab/simplicial.hpp"

#include <algorithm>
#include <sstream>

#include "aqlab/error.hpp"
#include "aqlab/model.hpp"
#include "elimination.hpp"

namespace aqlab {

std::size_t GradedDims::total() const {
  std::size_t s = 0;
  for (auto v : values) s += v;
  return s;
}

GradedDims GradedDims::trimmed() const {
  GradedDims out = *this;
  while (!out.values.empty() && out.values.back() == 0) out.values.pop_back();
  return out;
}

GradedDims convolve(const GradedDims& a, const GradedDims& b, std::size_t max_degree) {
  GradedDims out;
  out.values.assign(max_degree + 1, 0);
  for (std::size_t i = 0; i < a.values.size() && i <= max_degree; ++i)
    for (std::size_t j = 0; j < b.values.size() && i + j <= max_degree; ++j) out.values[i + j] += a.values[i] * b.values[j];
  return out;
}

// ---------------------------------------------------------------------------

SimplicialVectorSpace::SimplicialVectorSpace(FieldSpec field, std::vector<std::size_t> level_dims,
                                             std::vector<std::vector<Matrix>> faces,
                                             std::vector<std::vector<Matrix>> degeneracies)
    : field_(field),
      level_dims_(std::move(level_dims)),
      faces_(std::move(faces)),
      degeneracies_(std::move(degeneracies)) {
  if (level_dims_.empty()) throw InvalidInput("a simplicial object needs at least level 0");
  const std::size_t levels = level_dims_.size();
  faces_.resize(levels);
  degeneracies_.resize(levels);
  for (std::size_t m = 0; m < levels; ++m) {
    const std::size_t want_faces = m == 0 ? 0 : m + 1;
    const std::size_t want_degens = m + 1 < levels ? m + 1 : 0;
    if (faces_[m].size() != want_faces || degeneracies_[m].size() != want_degens)
      throw InvalidInput("wrong number of structure maps at level " + std::to_string(m));
    for (const auto& f : faces_[m]) {
      if (f.rows() != level_dims_[m - 1] || f.cols() != level_dims_[m])
        throw InvalidInput("face matrix shape mismatch at level " + std::to_string(m));
      require_canonical(f, field_);
    }
    for (const auto& s : degeneracies_[m]) {
      if (s.rows() != level_dims_[m + 1] || s.cols() != level_dims_[m])
        throw InvalidInput("degeneracy matrix shape mismatch at level " + std::to_string(m));
      require_canonical(s, field_);
    }
  }
  std::string violation = identity_violation();
  if (!violation.empty()) throw InvalidInput("simplicial identity violated: " + violation);
}

const Matrix& SimplicialVectorSpace::face(int level, int i) const {
  return faces_.at(static_cast<std::size_t>(level)).at(static_cast<std::size_t>(i));
}

const Matrix& SimplicialVectorSpace::degeneracy(int level, int j) const {
  return degeneracies_.at(static_cast<std::size_t>(level)).at(static_cast<std::size_t>(j));
}

std::string SimplicialVectorSpace::identity_violation() const {
  const int T = truncation();
  auto describe = [](const char* what, int m, int i, int j) {
    std::ostringstream os;
    os << what << " at level " << m << " (i=" << i << ", j=" << j << ")";
    return os.str();
  };
  // d_i d_j = d_{j-1} d_i for i < j, on level m.
  for (int m = 2; m <= T; ++m)
    for (int j = 1; j <= m; ++j)
      for (int i = 0; i < j; ++i)
        if (multiply(face(m - 1, i), face(m, j), field_) != multiply(face(m - 1, j - 1), face(m, i), field_))
          return describe("d_i d_j = d_{j-1} d_i", m, i, j);
  // d_i s_j on level m (s_j : m -> m+1).
  for (int m = 0; m < T; ++m) {
    for (int j = 0; j <= m; ++j) {
      for (int i = 0; i <= m + 1; ++i) {
        Matrix lhs = multiply(face(m + 1, i), degeneracy(m, j), field_);
        Matrix rhs;
        if (i == j || i == j + 1) {
          rhs = Matrix::identity(dim(m));
        } else if (i < j) {
          rhs = multiply(degeneracy(m - 1, j - 1), face(m, i), field_);
        } else {
          rhs = multiply(degeneracy(m - 1, j), face(m, i - 1), field_);
        }
        if (lhs != rhs) return describe("d_i s_j", m, i, j);
      }
    }
  }
  // s_i s_j = s_{j+1} s_i for i <= j, on level m.
  for (int m = 0; m + 2 <= T; ++m)
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= j; ++i)
        if (multiply(degeneracy(m + 1, i), degeneracy(m, j), field_) !=
            multiply(degeneracy(m + 1, j + 1), degeneracy(m, i), field_))
          return describe("s_i s_j = s_{j+1} s_i", m, i, j);
  return {};
}

// ---------------------------------------------------------------------------

ChainComplex::ChainComplex(FieldSpec field, std::vector<std::size_t> dims, std::vector<Matrix> differentials)
    : field_(field), dims_(std::move(dims)), differentials_(std::move(differentials)) {
  if (differentials_.size() != dims_.size()) throw InvalidInput("one differential per degree is required");
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    const Matrix& d = differentials_[m];
    const std::size_t rows = m == 0 ? 0 : dims_[m - 1];
    if (d.rows() != rows || d.cols() != dims_[m])
      throw InvalidInput("differential shape mismatch in degree " + std::to_string(m));
    require_canonical(d, field_);
  }
  for (std::size_t m = 2; m < dims_.size(); ++m)
    if (!multiply(differentials_[m - 1], differentials_[m], field_).is_zero())
      throw InvalidInput("d o d != 0 in degree " + std::to_string(m));
}

const Matrix& ChainComplex::differential(int degree) const {
  return differentials_.at(static_cast<std::size_t>(degree));
}

GradedDims ChainComplex::homology(int through) const {
  GradedDims out;
  through = std::min(through, top_degree());
  std::vector<std::size_t> ranks(dims_.size() + 1, 0);
  for (std::size_t m = 1; m < dims_.size(); ++m) ranks[m] = rank(differentials_[m], field_);
  for (int k = 0; k <= through; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    out.values.push_back(dims_[uk] - ranks[uk] - ranks[uk + 1]);
  }
  return out;
}

HomologyBasis ChainComplex::homology_basis(int degree) const {
  const auto k = static_cast<std::size_t>(degree);
  if (degree < 0 || k >= dims_.size()) throw InvalidInput("degree outside the complex");
  Matrix d_in = k + 1 < dims_.size() ? differentials_[k + 1] : Matrix(dims_[k], 0);
  return aqlab::homology_basis(d_in, differentials_[k], field_);
}

// ---------------------------------------------------------------------------

namespace {

// Row-reduced basis of the degenerate subspace of one level, with the
// complementary coordinates (non-pivot columns) indexing the normalized basis.
template <class Ops>
struct DegenerateQuotient {
  detail::Echelon<Ops> ech;
  std::vector<std::uint32_t> complement;
  std::vector<std::int64_t> position;  // column -> index in complement, or -1

  DegenerateQuotient(const Ops& ops, std::size_t dim) : ech(ops, dim), position(dim, -1) {}

  detail::SparseRow<Ops> reduce_fully(const Ops& ops, detail::SparseRow<Ops> row) const {
    for (;;) {
      auto it = std::find_if(row.begin(), row.end(), [&](const auto& e) { return ech.pivot_row(e.first) >= 0; });
      if (it == row.end()) return row;
      auto c = it->second;
      const auto& pivot = ech.rows()[static_cast<std::size_t>(ech.pivot_row(it->first))];
      // Pivot rows are reduced, so subtracting one never reintroduces another pivot column.
      row = detail::axpy(ops, row, c, pivot);
    }
  }
};

template <class Ops>
ChainComplex normalized_impl(const Ops& ops, const SimplicialVectorSpace& v) {
  const int T = v.truncation();
  std::vector<DegenerateQuotient<Ops>> quotients;
  for (int m = 0; m <= T; ++m) {
    DegenerateQuotient<Ops> q(ops, v.dim(m));
    if (m > 0) {
      for (int j = 0; j < m; ++j) {
        Matrix cols = v.degeneracy(m - 1, j).transpose();
        for (std::size_t c = 0; c < cols.rows(); ++c) q.ech.insert(detail::convert_row(ops, cols.row(c)));
      }
      q.ech.make_reduced();
    }
    for (std::uint32_t c = 0; c < v.dim(m); ++c) {
      if (q.ech.pivot_row(c) < 0) {
        q.position[c] = static_cast<std::int64_t>(q.complement.size());
        q.complement.push_back(c);
      }
    }
    quotients.push_back(std::move(q));
  }
  std::vector<std::size_t> dims;
  std::vector<Matrix> diffs;
  for (int m = 0; m <= T; ++m) {
    const auto& q = quotients[static_cast<std::size_t>(m)];
    dims.push_back(q.complement.size());
    if (m == 0) {
      diffs.emplace_back(0, q.complement.size());
      continue;
    }
    // Alternating face sum, transposed so that rows are images of basis vectors.
    std::vector<Matrix> face_t;
    for (int i = 0; i <= m; ++i) face_t.push_back(v.face(m, i).transpose());
    const auto& below = quotients[static_cast<std::size_t>(m - 1)];
    std::vector<Matrix::Row> columns;
    for (std::uint32_t c : q.complement) {
      detail::SparseRow<Ops> image;
      for (int i = 0; i <= m; ++i) {
        auto r = detail::convert_row(ops, face_t[static_cast<std::size_t>(i)].row(c));
        auto sign = i % 2 == 0 ? ops.neg(ops.from_int(1)) : ops.from_int(1);
        image = detail::axpy(ops, image, sign, r);  // image - sign * r
      }
      image = below.reduce_fully(ops, std::move(image));
      Matrix::Row col;
      for (auto& [idx, e] : image) {
        auto pos = below.position[idx];
        if (pos < 0) throw InvariantViolation("normalized boundary left the complement");
        col.emplace_back(static_cast<std::uint32_t>(pos), Ops::to_scalar(e));
      }
      columns.push_back(std::move(col));
    }
    diffs.push_back(Matrix::from_columns(below.complement.size(), columns));
  }
  return ChainComplex(v.field(), std::move(dims), std::move(diffs));
}

}  // namespace

ChainComplex normalized_chains(const SimplicialVectorSpace& v) {
  return detail::with_ops(v.field(), [&](const auto& ops) { return normalized_impl(ops, v); });
}

ChainComplex unnormalized_chains(const SimplicialVectorSpace& v) {
  const FieldSpec& field = v.field();
  std::vector<std::size_t> dims(v.level_dims());
  std::vector<Matrix> diffs;
  diffs.emplace_back(0, v.dim(0));
  for (int m = 1; m <= v.truncation(); ++m) {
    Matrix d(v.dim(m - 1), v.dim(m));
    for (int i = 0; i <= m; ++i) d = add_scaled(d, v.face(m, i), Scalar(i % 2 == 0 ? 1 : -1), field);
    diffs.push_back(std::move(d));
  }
  return ChainComplex(field, std::move(dims), std::move(diffs));
}

CertifiedDims homotopy_dims(const SimplicialVectorSpace& v) {
  const int through = v.truncation() - 1;
  return {normalized_chains(v).homology(through), through};
}

CertifiedDims homotopy_dims_unnormalized(const SimplicialVectorSpace& v) {
  const int through = v.truncation() - 1;
  return {unnormalized_chains(v).homology(through), through};
}

SimplicialVectorSpace eilenberg_maclane(const FieldSpec& field, std::size_t q, int n, int truncation) {
  if (n < 0) throw InvalidInput("negative degree");
  if (truncation < n) throw InvalidInput("truncation must be at least the degree");
  SymmetricAlgebraModel model(field, CellComplex::sphere(q, n));
  return materialize(model, 1, 1, truncation);
}

SimplicialVectorSpace dold_kan(const FieldSpec& field, const std::vector<int>& cell_degrees,
                               const std::vector<std::vector<std::pair<std::size_t, long>>>& boundary,
                               int truncation) {
  if (boundary.size() != cell_degrees.size()) throw InvalidInput("one boundary list per cell is required");
  CellComplex cells;
  for (std::size_t c = 0; c < cell_degrees.size(); ++c) {
    CellComplex::Cell cell{cell_degrees[c], 1, {}};
    for (const auto& [target, coeff] : boundary[c]) cell.boundary.emplace_back(static_cast<std::uint32_t>(target), coeff);
    cells.cells.push_back(std::move(cell));
  }
  SymmetricAlgebraModel model(field, std::move(cells));
  return materialize(model, 1, 1, truncation);
}

SimplicialVectorSpace constant_object(const FieldSpec& field, std::size_t q, int truncation) {
  if (truncation < 0) throw InvalidInput("negative truncation");
  const auto levels = static_cast<std::size_t>(truncation) + 1;
  std::vector<std::vector<Matrix>> faces(levels), degens(levels);
  for (std::size_t m = 0; m < levels; ++m) {
    if (m > 0) faces[m].assign(m + 1, Matrix::identity(q));
    if (m + 1 < levels) degens[m].assign(m + 1, Matrix::identity(q));
  }
  return SimplicialVectorSpace(field, std::vector<std::size_t>(levels, q), std::move(faces), std::move(degens));
}

namespace {

template <class Combine>
SimplicialVectorSpace levelwise(const SimplicialVectorSpace& v, const SimplicialVectorSpace& w, Combine combine,
                                bool product_dims) {
  if (v.field() != w.field()) throw InvalidInput("field mismatch");
  if (v.truncation() != w.truncation()) throw InvalidInput("truncation mismatch");
  const int T = v.truncation();
  std::vector<std::size_t> dims;
  std::vector<std::vector<Matrix>> faces(static_cast<std::size_t>(T + 1)), degens(static_cast<std::size_t>(T + 1));
  for (int m = 0; m <= T; ++m) {
    dims.push_back(product_dims ? v.dim(m) * w.dim(m) : v.dim(m) + w.dim(m));
    if (m > 0)
      for (int i = 0; i <= m; ++i) faces[static_cast<std::size_t>(m)].push_back(combine(v.face(m, i), w.face(m, i)));
    if (m < T)
      for (int j = 0; j <= m; ++j)
        degens[static_cast<std::size_t>(m)].push_back(combine(v.degeneracy(m, j), w.degeneracy(m, j)));
  }
  return SimplicialVectorSpace(v.field(), std::move(dims), std::move(faces), std::move(degens));
}

}  // namespace

SimplicialVectorSpace tensor(const SimplicialVectorSpace& v, const SimplicialVectorSpace& w) {
  return levelwise(v, w, [&](const Matrix& a, const Matrix& b) { return kronecker(a, b, v.field()); }, true);
}

SimplicialVectorSpace direct_sum(const SimplicialVectorSpace& v, const SimplicialVectorSpace& w) {
  return levelwise(v, w, [](const Matrix& a, const Matrix& b) { return aqlab::direct_sum(a, b); }, false);
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json scalar_to_json(const Scalar& s) {
  if (s.get_den() == 1 && s.get_num().fits_slong_p()) return s.get_num().get_si();
  return s.get_str();
}

Scalar scalar_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Scalar(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    Scalar s;
    if (s.set_str(j.get<std::string>(), 10) != 0) throw InvalidInput("malformed rational: " + j.get<std::string>());
    s.canonicalize();
    return s;
  }
  throw InvalidInput("matrix entries must be integers or rational strings");
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : m.to_dense()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(scalar_to_json(e));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols, const FieldSpec& field) {
  if (!j.is_array() || j.size() != rows) throw InvalidInput("matrix has the wrong number of rows");
  std::vector<std::vector<Scalar>> dense;
  for (const auto& r : j) {
    if (!r.is_array() || r.size() != cols) throw InvalidInput("matrix row has the wrong length");
    std::vector<Scalar> row;
    for (const auto& e : r) row.push_back(scalar_from_json(e));
    dense.push_back(std::move(row));
  }
  Matrix m = Matrix::from_dense(dense, cols);
  require_canonical(m, field);
  return m;
}

}  // namespace

nlohmann::json to_json(const SimplicialVectorSpace& v) {
  nlohmann::json j;
  j["field"] = v.field().characteristic();
  j["truncation"] = v.truncation();
  j["level_dims"] = v.level_dims();
  nlohmann::json faces = nlohmann::json::array();
  nlohmann::json degens = nlohmann::json::array();
  for (int m = 0; m <= v.truncation(); ++m) {
    nlohmann::json fl = nlohmann::json::array();
    if (m > 0)
      for (int i = 0; i <= m; ++i) fl.push_back(matrix_to_json(v.face(m, i)));
    faces.push_back(std::move(fl));
    nlohmann::json dl = nlohmann::json::array();
    if (m < v.truncation())
      for (int i = 0; i <= m; ++i) dl.push_back(matrix_to_json(v.degeneracy(m, i)));
    degens.push_back(std::move(dl));
  }
  j["faces"] = std::move(faces);
  j["degeneracies"] = std::move(degens);
  return j;
}

SimplicialVectorSpace simplicial_from_json(const nlohmann::json& j) {
  try {
    FieldSpec field(j.at("field").get<std::uint32_t>());
    auto dims = j.at("level_dims").get<std::vector<std::size_t>>();
    if (dims.empty()) throw InvalidInput("level_dims must not be empty");
    const int T = static_cast<int>(dims.size()) - 1;
    if (j.contains("truncation") && j.at("truncation").get<int>() != T)
      throw InvalidInput("truncation disagrees with level_dims");
    const auto& jf = j.at("faces");
    const auto& jd = j.at("degeneracies");
    if (!jf.is_array() || jf.size() != dims.size() || !jd.is_array() || jd.size() != dims.size())
      throw InvalidInput("faces and degeneracies need one entry per level");
    std::vector<std::vector<Matrix>> faces(dims.size()), degens(dims.size());
    for (int m = 0; m <= T; ++m) {
      const auto um = static_cast<std::size_t>(m);
      const std::size_t nf = m == 0 ? 0 : um + 1;
      const std::size_t nd = m < T ? um + 1 : 0;
      if (jf[um].size() != nf || jd[um].size() != nd)
        throw InvalidInput("wrong number of structure maps at level " + std::to_string(m));
      for (std::size_t i = 0; i < nf; ++i) faces[um].push_back(matrix_from_json(jf[um][i], dims[um - 1], dims[um], field));
      for (std::size_t i = 0; i < nd; ++i) degens[um].push_back(matrix_from_json(jd[um][i], dims[um + 1], dims[um], field));
    }
    return SimplicialVectorSpace(field, std::move(dims), std::move(faces), std::move(degens));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed simplicial object: ") + e.what());
  }
}

nlohmann::json to_json(const GradedDims& d) { return d.values; }

}  // namespace aqlab
