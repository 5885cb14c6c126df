#include "aqlab/model.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>

#include "aqlab/error.hpp"
#include "elimination.hpp"

namespace aqlab {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw InvariantViolation("coefficient overflow");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw InvariantViolation("coefficient overflow");
  return out;
}

void canonicalize(LinComb& lc) {
  std::sort(lc.begin(), lc.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < lc.size();) {
    std::size_t j = i;
    std::int64_t c = 0;
    while (j < lc.size() && lc[j].key == lc[i].key) c = checked_add(c, lc[j++].coeff);
    if (c != 0) {
      if (out != i) lc[out].key = std::move(lc[i].key);
      lc[out].coeff = c;
      ++out;
    }
    i = j;
  }
  lc.resize(out);
}

// ---------------------------------------------------------------------------
// Cell complexes

CellComplex CellComplex::sphere(std::size_t q, int n, int weight) {
  CellComplex c;
  for (std::size_t i = 0; i < q; ++i) c.cells.push_back({n, weight, {}});
  c.validate();
  return c;
}

CellComplex CellComplex::disk(int n, int weight) {
  CellComplex c;
  c.cells.push_back({n, weight, {}});
  c.cells.push_back({n + 1, weight, {{0u, 1}}});
  c.validate();
  return c;
}

CellComplex CellComplex::plus(const CellComplex& other) const {
  CellComplex out = *this;
  const auto offset = static_cast<std::uint32_t>(cells.size());
  for (Cell cell : other.cells) {
    for (auto& b : cell.boundary) b.first += offset;
    out.cells.push_back(std::move(cell));
  }
  return out;
}

bool CellComplex::has_zero_differential() const {
  return std::all_of(cells.begin(), cells.end(), [](const Cell& c) { return c.boundary.empty(); });
}

void CellComplex::validate() const {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (c.degree < 0 || c.degree > surj::kMaxLevel)
      throw InvalidInput("cell degree out of range: " + std::to_string(c.degree));
    if (c.weight < 1) throw InvalidInput("cell weight must be positive");
    for (const auto& [target, coeff] : c.boundary) {
      if (target >= cells.size()) throw InvalidInput("boundary refers to a missing cell");
      if (cells[target].degree != c.degree - 1)
        throw InvalidInput("boundary must lower the degree by one");
      if (cells[target].weight != c.weight) throw InvalidInput("boundary must preserve weight");
      (void)coeff;
    }
  }
  // d o d = 0
  for (const Cell& c : cells) {
    std::map<std::uint32_t, std::int64_t> dd;
    for (const auto& [mid, a] : c.boundary)
      for (const auto& [low, b] : cells[mid].boundary) dd[low] = checked_add(dd[low], checked_mul(a, b));
    for (const auto& [cell, v] : dd)
      if (v != 0) throw InvalidInput("cell boundary does not square to zero");
  }
}

std::vector<std::uint64_t> dold_kan_generators(const CellComplex& cells, int level) {
  std::vector<std::uint64_t> out;
  for (std::size_t c = 0; c < cells.cells.size(); ++c) {
    int k = cells.cells[c].degree;
    if (k > level) continue;
    for (surj::Mask m : surj::masks_with_popcount(level, k))
      out.push_back(pack_generator(static_cast<std::uint32_t>(c), m));
  }
  return out;
}

LinComb dold_kan_face(const CellComplex& cells, std::uint64_t generator, int level, int i) {
  const std::uint32_t cell = generator_cell(generator);
  const auto r = surj::face(generator_mask(generator), level, i);
  switch (r.kind) {
    case surj::FaceKind::kZero:
      return {};
    case surj::FaceKind::kSurjective:
      return {{{pack_generator(cell, r.mask)}, 1}};
    case surj::FaceKind::kMissesTop: {
      LinComb out;
      for (const auto& [target, coeff] : cells.cells[cell].boundary)
        out.push_back({{pack_generator(target, r.mask)}, coeff});
      canonicalize(out);
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Symmetric algebra

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

SymmetricAlgebraModel::SymmetricAlgebraModel(FieldSpec field, CellComplex cells)
    : field_(field), cells_(std::move(cells)) {
  cells_.validate();
  std::vector<std::uint32_t> parent(cells_.cells.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint32_t c = 0; c < cells_.cells.size(); ++c)
    for (const auto& b : cells_.cells[c].boundary) parent[find(c)] = find(b.first);
  component_.resize(cells_.cells.size());
  for (std::uint32_t c = 0; c < cells_.cells.size(); ++c) component_[c] = find(c);
  for (const auto& c : cells_.cells) {
    if (c.degree * best_weight_ > best_degree_ * c.weight) {
      best_degree_ = c.degree;
      best_weight_ = c.weight;
    }
  }
}

int SymmetricAlgebraModel::weight(const Key& monomial) const {
  int w = 0;
  for (auto g : monomial) w += cells_.cells[generator_cell(g)].weight;
  return w;
}

std::vector<Key> SymmetricAlgebraModel::basis(int level, int weight, bool nondegenerate_only) const {
  std::vector<Key> out;
  if (weight < 0 || level < 0) return out;
  if (level > surj::kMaxLevel) throw InvalidInput("simplicial level too large");
  const auto gens = dold_kan_generators(cells_, level);
  const surj::Mask all = surj::full(level);
  Key current;
  // Multisets of generators, non-decreasing in index.
  auto rec = [&](auto&& self, std::size_t start, int remaining, surj::Mask covered) -> void {
    if (remaining == 0) {
      if (!nondegenerate_only || covered == all) out.push_back(current);
      return;
    }
    if (nondegenerate_only) {
      const int uncovered = level - surj::popcount(covered);
      if (static_cast<long>(uncovered) * best_weight_ > static_cast<long>(best_degree_) * remaining) return;
    }
    for (std::size_t i = start; i < gens.size(); ++i) {
      const int w = cells_.cells[generator_cell(gens[i])].weight;
      if (w > remaining) continue;
      current.push_back(gens[i]);
      self(self, i, remaining - w, covered | generator_mask(gens[i]));
      current.pop_back();
    }
  };
  rec(rec, 0, weight, 0);
  return out;
}

Key multiply_monomials(const Key& a, const Key& b) {
  Key out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

LinComb multiply(const LinComb& a, const LinComb& b) {
  LinComb out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back({multiply_monomials(x.key, y.key), checked_mul(x.coeff, y.coeff)});
  canonicalize(out);
  return out;
}

LinComb SymmetricAlgebraModel::face(const Key& key, int level, int i) const {
  LinComb acc{{Key{}, 1}};
  for (auto g : key) {
    LinComb f = dold_kan_face(cells_, g, level, i);
    if (f.empty()) return {};
    acc = multiply(acc, f);
    if (acc.empty()) return {};
  }
  return acc;
}

Key SymmetricAlgebraModel::degeneracy(const Key& key, int level, int j) const {
  (void)level;
  Key out;
  out.reserve(key.size());
  for (auto g : key) out.push_back(pack_generator(generator_cell(g), surj::insert_gap(generator_mask(g), j)));
  std::sort(out.begin(), out.end());
  return out;
}

bool SymmetricAlgebraModel::is_degenerate(const Key& key, int level) const {
  surj::Mask covered = 0;
  for (auto g : key) covered |= generator_mask(g);
  return covered != surj::full(level);
}

std::uint64_t SymmetricAlgebraModel::grade(const Key& key) const {
  std::uint64_t h = 0;
  for (auto g : key) h += mix(component_[generator_cell(g)]);
  return h;
}

LinComb SymmetricAlgebraModel::apply_epi(const LinComb& lc, surj::Mask sigma) const {
  LinComb out;
  out.reserve(lc.size());
  for (const auto& t : lc) {
    Key k;
    k.reserve(t.key.size());
    for (auto g : t.key) k.push_back(pack_generator(generator_cell(g), surj::compose(generator_mask(g), sigma)));
    std::sort(k.begin(), k.end());
    out.push_back({std::move(k), t.coeff});
  }
  canonicalize(out);
  return out;
}

LinComb shuffle_product(const LinComb& a, int p, const LinComb& b, int q) {
  // s_nu(a) puts a's jumps at the positions mu, s_mu(b) puts b's at nu.
  auto deposit = [](const LinComb& lc, surj::Mask sigma) {
    LinComb out;
    for (const auto& t : lc) {
      Key k;
      for (auto g : t.key) k.push_back(pack_generator(generator_cell(g), surj::compose(generator_mask(g), sigma)));
      std::sort(k.begin(), k.end());
      out.push_back({std::move(k), t.coeff});
    }
    return out;
  };
  LinComb out;
  const surj::Mask all = surj::full(p + q);
  for (surj::Mask mu : surj::masks_with_popcount(p + q, p)) {
    const surj::Mask nu = all ^ mu;
    int inversions = 0;
    for (int i = 0; i < p + q; ++i)
      if (surj::bit(mu, i)) inversions += surj::popcount(nu & surj::full(i));
    LinComb prod = multiply(deposit(a, mu), deposit(b, nu));
    for (auto& t : prod) {
      if (inversions % 2 != 0) t.coeff = -t.coeff;
      out.push_back(std::move(t));
    }
  }
  canonicalize(out);
  return out;
}

// ---------------------------------------------------------------------------
// Normalized complexes

LinComb normalized_boundary(const BasedSimplicialModel& model, const Key& key, int level) {
  LinComb out;
  for (int i = 0; i <= level; ++i) {
    for (auto& t : model.face(key, level, i)) {
      if (model.is_degenerate(t.key, level - 1)) continue;
      out.push_back({t.key, i % 2 == 0 ? t.coeff : -t.coeff});
    }
  }
  canonicalize(out);
  return out;
}

namespace {

template <class F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned threads = std::min<std::size_t>(worker_threads(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::map<Key, std::size_t>> build_index(const std::vector<std::vector<Key>>& keys) {
  std::vector<std::map<Key, std::size_t>> index(keys.size());
  for (std::size_t m = 0; m < keys.size(); ++m)
    for (std::size_t i = 0; i < keys[m].size(); ++i) index[m].emplace(keys[m][i], i);
  return index;
}

std::size_t lookup(const std::map<Key, std::size_t>& index, const Key& key) {
  auto it = index.find(key);
  if (it == index.end()) throw InvariantViolation("face left the enumerated basis");
  return it->second;
}

}  // namespace

ModelComplex normalized_complex(const BasedSimplicialModel& model, int weight, int top_level) {
  if (top_level < 0) throw InvalidInput("negative truncation");
  ModelComplex mc{{}, {}, ChainComplex(model.field(), {}, {})};
  for (int m = 0; m <= top_level; ++m) mc.keys.push_back(model.basis(m, weight, true));
  mc.index = build_index(mc.keys);
  std::vector<std::size_t> dims;
  std::vector<Matrix> diffs;
  const FieldSpec& field = model.field();
  for (int m = 0; m <= top_level; ++m) {
    const auto& keys = mc.keys[static_cast<std::size_t>(m)];
    dims.push_back(keys.size());
    if (m == 0) {
      diffs.emplace_back(0, keys.size());
      continue;
    }
    std::vector<Matrix::Row> columns(keys.size());
    parallel_for(keys.size(), [&](std::size_t c) {
      for (const auto& t : normalized_boundary(model, keys[c], m)) {
        Scalar v = field.reduce(t.coeff);
        if (sgn(v) != 0)
          columns[c].emplace_back(static_cast<std::uint32_t>(lookup(mc.index[static_cast<std::size_t>(m - 1)], t.key)),
                                  std::move(v));
      }
    });
    diffs.push_back(Matrix::from_columns(mc.keys[static_cast<std::size_t>(m - 1)].size(), columns));
  }
  mc.chains = ChainComplex(field, std::move(dims), std::move(diffs));
  return mc;
}

GradedDims model_homotopy(const BasedSimplicialModel& model, int weight, int top_degree) {
  if (top_degree < 0) return {};
  const int levels = top_degree + 1;  // 0..top_degree+1
  // Group keys of every level by grade.
  std::vector<std::map<std::uint64_t, std::vector<Key>>> graded(static_cast<std::size_t>(levels + 1));
  std::vector<std::size_t> dims(static_cast<std::size_t>(levels + 1));
  for (int m = 0; m <= levels; ++m) {
    for (auto& k : model.basis(m, weight, true)) {
      ++dims[static_cast<std::size_t>(m)];
      graded[static_cast<std::size_t>(m)][model.grade(k)].push_back(std::move(k));
    }
  }
  // Tasks: (level m >= 1, grade) -> rank of the block of d_m.
  struct Task {
    int level;
    const std::vector<Key>* sources;
    const std::vector<Key>* targets;
  };
  std::vector<Task> tasks;
  for (int m = 1; m <= levels; ++m) {
    for (const auto& [g, keys] : graded[static_cast<std::size_t>(m)]) {
      auto it = graded[static_cast<std::size_t>(m - 1)].find(g);
      if (it == graded[static_cast<std::size_t>(m - 1)].end()) continue;
      tasks.push_back({m, &keys, &it->second});
    }
  }
  std::vector<std::size_t> ranks(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    std::map<Key, std::uint32_t> target_index;
    for (std::size_t i = 0; i < task.targets->size(); ++i)
      target_index.emplace((*task.targets)[i], static_cast<std::uint32_t>(i));
    std::vector<detail::IntegerEchelon::Row> rows;
    rows.reserve(task.sources->size());
    for (const Key& key : *task.sources) {
      detail::IntegerEchelon::Row row;
      for (const auto& term : normalized_boundary(model, key, task.level)) {
        auto it = target_index.find(term.key);
        if (it == target_index.end()) throw InvariantViolation("boundary left its grade block");
        row.emplace_back(it->second, term.coeff);
      }
      std::sort(row.begin(), row.end());
      if (!row.empty()) rows.push_back(std::move(row));
    }
    ranks[t] = detail::integer_rows_rank(model.field(), std::move(rows), task.targets->size());
  });
  std::vector<std::size_t> rank_of_level(static_cast<std::size_t>(levels + 1), 0);
  for (std::size_t t = 0; t < tasks.size(); ++t) rank_of_level[static_cast<std::size_t>(tasks[t].level)] += ranks[t];
  GradedDims out;
  for (int k = 0; k <= top_degree; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    out.values.push_back(dims[uk] - rank_of_level[uk] - rank_of_level[uk + 1]);
  }
  return out;
}

SimplicialVectorSpace materialize(const BasedSimplicialModel& model, int min_weight, int max_weight,
                                  int truncation) {
  if (truncation < 0) throw InvalidInput("negative truncation");
  std::vector<std::vector<Key>> keys(static_cast<std::size_t>(truncation + 1));
  for (int m = 0; m <= truncation; ++m)
    for (int w = min_weight; w <= max_weight; ++w)
      for (auto& k : model.basis(m, w, false)) keys[static_cast<std::size_t>(m)].push_back(std::move(k));
  const auto index = build_index(keys);
  const FieldSpec& field = model.field();
  std::vector<std::size_t> dims;
  for (const auto& k : keys) dims.push_back(k.size());
  std::vector<std::vector<Matrix>> faces(static_cast<std::size_t>(truncation + 1));
  std::vector<std::vector<Matrix>> degens(static_cast<std::size_t>(truncation + 1));
  for (int m = 1; m <= truncation; ++m) {
    const auto um = static_cast<std::size_t>(m);
    for (int i = 0; i <= m; ++i) {
      std::vector<Matrix::Row> columns(keys[um].size());
      for (std::size_t c = 0; c < keys[um].size(); ++c) {
        for (const auto& t : model.face(keys[um][c], m, i)) {
          Scalar v = field.reduce(t.coeff);
          if (sgn(v) != 0) columns[c].emplace_back(static_cast<std::uint32_t>(lookup(index[um - 1], t.key)), v);
        }
      }
      faces[um].push_back(Matrix::from_columns(dims[um - 1], columns));
    }
  }
  for (int m = 0; m < truncation; ++m) {
    const auto um = static_cast<std::size_t>(m);
    for (int j = 0; j <= m; ++j) {
      std::vector<Matrix::Row> columns(keys[um].size());
      for (std::size_t c = 0; c < keys[um].size(); ++c)
        columns[c].emplace_back(static_cast<std::uint32_t>(lookup(index[um + 1], model.degeneracy(keys[um][c], m, j))),
                                Scalar(1));
      degens[um].push_back(Matrix::from_columns(dims[um + 1], columns));
    }
  }
  return SimplicialVectorSpace(field, std::move(dims), std::move(faces), std::move(degens));
}

unsigned worker_threads() {
  static const unsigned value = [] {
    const char* env = std::getenv("AQLAB_THREADS");
    if (env == nullptr) return 1u;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return 1u;
    return static_cast<unsigned>(std::min(v, 256L));
  }();
  return value;
}

}  // namespace aqlab
