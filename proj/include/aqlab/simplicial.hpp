#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqlab/exactfield.hpp"

namespace aqlab {

/// Finitely supported degree -> dimension table.
struct GradedDims {
  std::vector<std::size_t> values;

  std::size_t at(std::size_t degree) const { return degree < values.size() ? values[degree] : 0; }
  std::size_t total() const;
  /// Pads or trims trailing zeros for comparisons.
  GradedDims trimmed() const;

  friend bool operator==(const GradedDims& a, const GradedDims& b) {
    return a.trimmed().values == b.trimmed().values;
  }
};

/// Homotopy dimensions with the last degree they are certified for.
struct CertifiedDims {
  GradedDims dims;
  int certified_degree = -1;
};

/// Graded convolution (Kunneth count).
GradedDims convolve(const GradedDims& a, const GradedDims& b, std::size_t max_degree);

/// Finite-type simplicial vector space truncated at level T.
///
/// faces[m][i] : level m -> level m-1 (1 <= m <= T, 0 <= i <= m)
/// degeneracies[m][j] : level m -> level m+1 (0 <= m < T, 0 <= j <= m)
class SimplicialVectorSpace {
 public:
  SimplicialVectorSpace(FieldSpec field, std::vector<std::size_t> level_dims,
                        std::vector<std::vector<Matrix>> faces,
                        std::vector<std::vector<Matrix>> degeneracies);

  const FieldSpec& field() const { return field_; }
  int truncation() const { return static_cast<int>(level_dims_.size()) - 1; }
  const std::vector<std::size_t>& level_dims() const { return level_dims_; }
  std::size_t dim(int level) const { return level_dims_.at(static_cast<std::size_t>(level)); }
  const Matrix& face(int level, int i) const;
  const Matrix& degeneracy(int level, int j) const;

  /// First simplicial identity that fails, if any.
  std::string identity_violation() const;

 private:
  FieldSpec field_;
  std::vector<std::size_t> level_dims_;
  std::vector<std::vector<Matrix>> faces_;
  std::vector<std::vector<Matrix>> degeneracies_;
};

/// dims[m] = dimension in degree m; differentials[m] : C_m -> C_{m-1} for m >= 1
/// (differentials[0] is the zero map to the zero space).
class ChainComplex {
 public:
  ChainComplex(FieldSpec field, std::vector<std::size_t> dims, std::vector<Matrix> differentials);

  const FieldSpec& field() const { return field_; }
  int top_degree() const { return static_cast<int>(dims_.size()) - 1; }
  std::size_t dim(int degree) const { return dims_.at(static_cast<std::size_t>(degree)); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const Matrix& differential(int degree) const;

  /// Homology in degrees 0..through (requires through < top_degree for the top
  /// boundary to be present; degree top_degree is reported without it).
  GradedDims homology(int through) const;
  HomologyBasis homology_basis(int degree) const;

 private:
  FieldSpec field_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> differentials_;
};

/// Quotient of each level by the span of degenerate vectors (images of
/// s_0..s_{m-1} landing in level m), with the alternating face sum.
ChainComplex normalized_chains(const SimplicialVectorSpace& v);

/// Levelwise chains with the alternating face sum (Moore complex, unnormalized).
ChainComplex unnormalized_chains(const SimplicialVectorSpace& v);

/// pi_n = H_n(N V), certified for n <= T-1.
CertifiedDims homotopy_dims(const SimplicialVectorSpace& v);

/// Same computation on the unnormalized complex; the normalization oracle.
CertifiedDims homotopy_dims_unnormalized(const SimplicialVectorSpace& v);

/// Dold-Kan model of K(V, n) with dim V = q, truncated at level T.
SimplicialVectorSpace eilenberg_maclane(const FieldSpec& field, std::size_t q, int n, int truncation);

/// Dold-Kan image of a bounded chain complex given by cell degrees and
/// boundary coefficients (boundary[c] lists (cell, coefficient) of degree
/// deg[c]-1). Used for acyclic "disk" summands.
SimplicialVectorSpace dold_kan(const FieldSpec& field, const std::vector<int>& cell_degrees,
                               const std::vector<std::vector<std::pair<std::size_t, long>>>& boundary,
                               int truncation);

/// Constant simplicial object on a space of dimension q.
SimplicialVectorSpace constant_object(const FieldSpec& field, std::size_t q, int truncation);

/// Levelwise tensor product with diagonal structure maps.
SimplicialVectorSpace tensor(const SimplicialVectorSpace& v, const SimplicialVectorSpace& w);

/// Levelwise direct sum.
SimplicialVectorSpace direct_sum(const SimplicialVectorSpace& v, const SimplicialVectorSpace& w);

nlohmann::json to_json(const SimplicialVectorSpace& v);
SimplicialVectorSpace simplicial_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GradedDims& d);
nlohmann::json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j);

}  // namespace aqlab
