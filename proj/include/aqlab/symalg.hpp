#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqlab/exactfield.hpp"
#include "aqlab/model.hpp"
#include "aqlab/simplicial.hpp"

namespace aqlab {

/// Levelwise d-th symmetric power. Monomials in the level basis, ordered
/// lexicographically; structure maps extended multiplicatively.
SimplicialVectorSpace symmetric_power(const SimplicialVectorSpace& v, int d);

/// Levelwise multiplication Sym^a V_m (x) Sym^b V_m -> Sym^{a+b} V_m for a
/// level of dimension `dim`; source basis index i * dim(Sym^b) + j.
Matrix symmetric_multiplication(std::size_t dim, int a, int b);

/// Free simplicial commutative algebra S(V) truncated at level T and weight W.
///
/// Built either from a Dold-Kan cell complex (then the homotopy of each weight
/// is computed on nondegenerate monomials without materializing levels) or
/// from an arbitrary simplicial vector space V (then components are the
/// materialized symmetric powers).
class WeightGradedAlgebra {
 public:
  static WeightGradedAlgebra on_cells(const FieldSpec& field, CellComplex cells, int truncation, int max_weight);
  static WeightGradedAlgebra on_space(SimplicialVectorSpace base, int max_weight);

  const FieldSpec& field() const { return field_; }
  int truncation() const { return truncation_; }
  int max_weight() const { return max_weight_; }
  /// Sym^1 = V (materialized).
  const SimplicialVectorSpace& base() const;
  /// Sym^d V, levels 0..T.
  SimplicialVectorSpace component(int d) const;
  /// Sym^a_m (x) Sym^b_m -> Sym^{a+b}_m.
  Matrix multiplication(int a, int b, int level) const;

  /// Engine model when built on cells.
  const SymmetricAlgebraModel* model() const { return model_.get(); }
  const CellComplex* cells() const { return model_ ? &model_->cells() : nullptr; }

  /// Homotopy of the weight-d summand in degrees 0..top_degree. Cell-built
  /// algebras use level top_degree+1; space-built ones require top_degree < T.
  GradedDims weight_homotopy(int d, int top_degree) const;

 private:
  WeightGradedAlgebra(FieldSpec field, int truncation, int max_weight);

  FieldSpec field_;
  int truncation_;
  int max_weight_;
  std::shared_ptr<const SymmetricAlgebraModel> model_;
  mutable std::shared_ptr<SimplicialVectorSpace> base_;
};

WeightGradedAlgebra sphere_algebra(const FieldSpec& field, std::size_t q, int n, int truncation, int max_weight);

struct HomotopyReport {
  FieldSpec field;
  std::size_t q = 0;
  int n = 0;
  int truncation = 0;
  int max_weight = 0;
  GradedDims dims;                       // degrees 0..certified_degree, weights 0..W
  int certified_degree = -1;
  std::vector<bool> weight_stable;       // per degree
  std::vector<GradedDims> by_weight;     // index d = weight

  /// Last degree k with all degrees <= k stable, or -1.
  int stable_through() const;
};

/// Homotopy of an algebra summed over weights 0..W, with stability flags from
/// the weight W+1 summand.
HomotopyReport algebra_homotopy(const WeightGradedAlgebra& a, int top_degree);

/// pi_* S(V, n) with dim V = q, degrees 0..T.
HomotopyReport sphere_homotopy(const FieldSpec& field, std::size_t q, int n, int truncation, int max_weight);

nlohmann::json to_json(const HomotopyReport& r);

/// QA for an algebra built by this module: the weight-1 summand.
SimplicialVectorSpace indecomposables(const WeightGradedAlgebra& a);

/// Map pi_s(IA) -> pi_s(QA) induced by the projection IA -> QA.
struct HurewiczMap {
  int degree = 0;
  std::vector<std::size_t> source_by_weight;  // dim pi_s of each weight summand 1..W
  Matrix matrix;                              // dim pi_s(QA) x dim pi_s(IA)
  std::size_t rank = 0;

  bool injective() const { return rank == matrix.cols(); }
  bool surjective() const { return rank == matrix.rows(); }
};

/// Degrees 0..top_degree. Throws InvalidInput when pi_0(IA) is nonzero.
std::vector<HurewiczMap> hurewicz(const WeightGradedAlgebra& a, int top_degree);

}  // namespace aqlab
