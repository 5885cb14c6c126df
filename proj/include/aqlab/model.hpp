#pragma once

// Simplicial vector spaces given by a distinguished basis on which the
// degeneracies act by injections of basis elements. For these the degenerate
// subspace is spanned by degenerate basis elements, so the normalized complex
// has the nondegenerate basis elements as a basis and never needs the full
// levels. Dold-Kan objects, their symmetric algebras and bar diagonals of maps
// between them are all of this kind.

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "aqlab/exactfield.hpp"
#include "aqlab/simplicial.hpp"
#include "aqlab/surjection.hpp"

namespace aqlab {

using Key = std::vector<std::uint64_t>;

struct Term {
  Key key;
  std::int64_t coeff;
};

/// Sorted by key, no zero coefficients.
using LinComb = std::vector<Term>;

/// Sorts, merges equal keys and drops zeros. Throws on int64 overflow.
void canonicalize(LinComb& lc);
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// A generator simplex of a Dold-Kan object: a cell of the underlying chain
/// complex paired with a jump mask. Packed as (cell << 32) | mask.
inline std::uint64_t pack_generator(std::uint32_t cell, surj::Mask mask) {
  return (static_cast<std::uint64_t>(cell) << 32) | mask;
}
inline std::uint32_t generator_cell(std::uint64_t g) { return static_cast<std::uint32_t>(g >> 32); }
inline surj::Mask generator_mask(std::uint64_t g) { return static_cast<surj::Mask>(g & 0xffffffffu); }

class BasedSimplicialModel {
 public:
  virtual ~BasedSimplicialModel() = default;

  virtual const FieldSpec& field() const = 0;
  /// Basis of the weight-w summand of level m, in a fixed order.
  virtual std::vector<Key> basis(int level, int weight, bool nondegenerate_only) const = 0;
  /// d_i of a basis element, as a combination of level m-1 basis elements.
  virtual LinComb face(const Key& key, int level, int i) const = 0;
  /// s_j of a basis element (a single basis element of level m+1).
  virtual Key degeneracy(const Key& key, int level, int j) const = 0;
  virtual bool is_degenerate(const Key& key, int level) const = 0;
  /// A grading preserved by all faces, used to split rank computations.
  virtual std::uint64_t grade(const Key&) const { return 0; }
};

/// Normalized complex of one weight summand, levels 0..top_level.
struct ModelComplex {
  std::vector<std::vector<Key>> keys;            // nondegenerate basis per level
  std::vector<std::map<Key, std::size_t>> index;  // key -> position
  ChainComplex chains;
};

ModelComplex normalized_complex(const BasedSimplicialModel& model, int weight, int top_level);

/// Normalized boundary of a nondegenerate key, degenerate terms dropped.
LinComb normalized_boundary(const BasedSimplicialModel& model, const Key& key, int level);

/// Homotopy of one weight summand in degrees 0..top_degree (uses level top_degree+1).
GradedDims model_homotopy(const BasedSimplicialModel& model, int weight, int top_degree);

/// Full levels 0..T of the summand with weights in [min_weight, max_weight].
SimplicialVectorSpace materialize(const BasedSimplicialModel& model, int min_weight, int max_weight,
                                  int truncation);

/// Chain complex whose cells generate a Dold-Kan object.
struct CellComplex {
  struct Cell {
    int degree = 0;
    int weight = 1;
    std::vector<std::pair<std::uint32_t, std::int64_t>> boundary;  // cells of degree - 1
  };
  std::vector<Cell> cells;

  /// q cells of degree n, weight `weight`, zero differential.
  static CellComplex sphere(std::size_t q, int n, int weight = 1);
  /// A cell e of degree n+1 with boundary b of degree n.
  static CellComplex disk(int n, int weight = 1);
  CellComplex plus(const CellComplex& other) const;

  bool has_zero_differential() const;
  void validate() const;
};

/// Generator simplices (cell, mask) of the Dold-Kan object at level m, ascending.
std::vector<std::uint64_t> dold_kan_generators(const CellComplex& cells, int level);
/// d_i of a generator simplex.
LinComb dold_kan_face(const CellComplex& cells, std::uint64_t generator, int level, int i);

/// Symmetric algebra on a Dold-Kan object: basis elements are monomials
/// (sorted multisets of generator simplices), weight is the sum of cell
/// weights. Characteristic-free: Sym^d of a based space has the degree-d
/// monomials as a basis in every characteristic.
class SymmetricAlgebraModel : public BasedSimplicialModel {
 public:
  SymmetricAlgebraModel(FieldSpec field, CellComplex cells);

  const FieldSpec& field() const override { return field_; }
  const CellComplex& cells() const { return cells_; }

  std::vector<Key> basis(int level, int weight, bool nondegenerate_only) const override;
  LinComb face(const Key& key, int level, int i) const override;
  Key degeneracy(const Key& key, int level, int j) const override;
  bool is_degenerate(const Key& key, int level) const override;
  std::uint64_t grade(const Key& key) const override;

  int weight(const Key& monomial) const;
  /// sigma^* of a combination living at level popcount(sigma), sigma an epi
  /// [m] ->> [k] given as an m-bit jump mask.
  LinComb apply_epi(const LinComb& lc, surj::Mask sigma) const;

 private:
  FieldSpec field_;
  CellComplex cells_;
  std::vector<std::uint32_t> component_;  // connected component of each cell under the boundary
  int best_degree_ = 0;                   // cell maximizing degree / weight
  int best_weight_ = 1;
};

/// Product of monomials (multiset union).
Key multiply_monomials(const Key& a, const Key& b);
LinComb multiply(const LinComb& a, const LinComb& b);
/// Eilenberg-Zilber shuffle product of an element at level p with one at level q.
LinComb shuffle_product(const LinComb& a, int p, const LinComb& b, int q);

/// Threads used by independent computations (AQLAB_THREADS, default 1).
unsigned worker_threads();

}  // namespace aqlab
