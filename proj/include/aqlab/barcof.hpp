#pragma once

// Maps out of sphere algebras and their homotopy cofibers, computed as the
// diagonal of the two-sided bar construction B(l, A, B).

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqlab/model.hpp"
#include "aqlab/series.hpp"
#include "aqlab/symalg.hpp"

namespace aqlab {

/// An algebra map S(l, n) -> B, determined by the image z of the fundamental
/// class: an element of B_n with every face zero. Generator simplices sigma
/// map to sigma^* z. The source generator gets the weight of z.
struct AlgebraMap {
  int degree = 0;
  int generator_weight = 1;
  WeightGradedAlgebra target;
  LinComb image;  // z, a combination of level-`degree` monomials of the target

  CellComplex source_cells() const { return CellComplex::sphere(1, degree, generator_weight); }
  /// Matrix of K(l, n)_m -> (weight-w summand of the target)_m on materialized bases.
  Matrix generator_image(int level) const;
  /// Image of one source monomial at level m.
  LinComb apply(const Key& source_monomial) const;
};

/// The map representing the class of a normalized cycle of the target's
/// weight-w summand in degree n (coordinates on the nondegenerate basis of
/// that summand). Throws InvalidInput if `cycle` is not a cycle and
/// InvariantViolation if the constructed map does not induce the class.
AlgebraMap representing_map(const WeightGradedAlgebra& target, int n, int weight, const Vector& cycle);

/// s-th power of the fundamental class of a sphere algebra S(l, n) on one
/// generator, as a normalized cycle of weight s in degree s n.
Vector power_of_generator(const WeightGradedAlgebra& sphere, int s);

/// Diagonal of B(l, A, B) for f: A -> B, restricted to at most `bar_bound`
/// non-unit A factors. Basis elements are tuples (a_1, ..., a_m, b) of
/// monomials; faces combine the internal faces with the bar faces.
class BarDiagonalModel : public BasedSimplicialModel {
 public:
  BarDiagonalModel(AlgebraMap f, int bar_bound);

  const FieldSpec& field() const override { return map_.target.field(); }
  std::vector<Key> basis(int level, int weight, bool nondegenerate_only) const override;
  LinComb face(const Key& key, int level, int i) const override;
  Key degeneracy(const Key& key, int level, int j) const override;
  bool is_degenerate(const Key& key, int level) const override;

  int bar_bound() const { return bar_bound_; }
  const AlgebraMap& map() const { return map_; }

 private:
  AlgebraMap map_;
  SymmetricAlgebraModel source_;
  int bar_bound_;
};

/// Levels 0..T of the bar diagonal, weights 0..W, as an explicit object.
SimplicialVectorSpace bar_diagonal(const AlgebraMap& f, int bar_bound, int truncation, int max_weight);

/// Homotopy of the cofiber with certification flags.
struct CofiberReport {
  int bar_bound = 0;
  int truncation = 0;
  int max_weight = 0;
  GradedDims pi;
  std::vector<bool> certified;  // per degree: unchanged at (N+1, W+1)
  int certified_degree = -1;    // last degree with all lower degrees certified
  std::vector<GradedDims> by_weight;
  // Filled by a_rs_tables.
  int r = 0, s = 0;
  GradedDims expected_pi;
  GradedDims hq;                // closed form
  std::vector<int> hq_beyond;   // closed-form H^Q degrees past the computed range
  bool matches_expected = true;
};

/// pi_* of the cofiber of f in degrees 0..T using weights 0..W and at most
/// N bar factors; each degree is flagged by recomputation at (N+1, W+1).
CofiberReport cofiber_homotopy(const AlgebraMap& f, int bar_bound, int truncation, int max_weight);

/// Sphere-algebra homotopy over the same weights, for series comparisons.
struct CofiberTriple {
  HomotopyReport source, target;
  CofiberReport cofiber;
  /// theta(B) <= theta(A) theta(C) on the certified range.
  LeqResult lemma_check() const;
};

CofiberTriple cofiber_triple(const AlgebraMap& f, int bar_bound, int truncation, int max_weight);

/// The rational algebras A<r, s>: cofiber of S(2rs) -> S(2r) representing x^s.
/// Throws InvariantViolation when a certified degree disagrees with the table.
CofiberReport a_rs_tables(int r, int s, int truncation, std::optional<int> max_weight = std::nullopt,
                          std::optional<int> bar_bound = std::nullopt);

nlohmann::json to_json(const CofiberReport& r);

/// Whether an exact sequence
///   ... -> C_{s+1} -> A_s -> B_s -> C_s -> A_{s-1} -> ...
/// can exist with the given dimensions (all finitely supported).
struct LesVerdict {
  bool feasible = true;
  std::vector<long> ranks;  // image ranks along the sequence, from the top
  std::string reason;
};

LesVerdict les_feasibility(const GradedDims& a, const GradedDims& b, const GradedDims& c);

}  // namespace aqlab
