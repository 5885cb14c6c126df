#include "aqlab/barcof.hpp"

#include <algorithm>
#include <map>

#include "aqlab/error.hpp"

namespace aqlab {

namespace {

constexpr std::uint64_t kSep = ~0ull;

const SymmetricAlgebraModel& target_model(const WeightGradedAlgebra& a) {
  if (!a.model()) throw InvalidInput("maps need a target built on cells");
  return *a.model();
}

std::int64_t reduce_int(std::int64_t v, std::uint32_t p) {
  if (p == 0) return v;
  std::int64_t r = v % static_cast<std::int64_t>(p);
  return r < 0 ? r + p : r;
}

void reduce_in_place(LinComb& lc, std::uint32_t p) {
  if (p == 0) return;
  for (auto& t : lc) t.coeff = reduce_int(t.coeff, p);
  canonicalize(lc);
}

LinComb apply_face(const BasedSimplicialModel& m, const LinComb& lc, int level, int i) {
  LinComb out;
  for (const auto& t : lc)
    for (auto& u : m.face(t.key, level, i)) out.push_back({std::move(u.key), checked_mul(u.coeff, t.coeff)});
  canonicalize(out);
  return out;
}

LinComb apply_degeneracy(const BasedSimplicialModel& m, const LinComb& lc, int level, int j) {
  LinComb out;
  for (const auto& t : lc) out.push_back({m.degeneracy(t.key, level, j), t.coeff});
  canonicalize(out);
  return out;
}

std::int64_t to_int(const Scalar& v, const FieldSpec& field) {
  Scalar r = field.reduce(v);
  if (r.get_den() != 1) throw InvalidInput("cycle coordinates must be integral");
  if (!r.get_num().fits_slong_p()) throw InvalidInput("cycle coordinate too large");
  return r.get_num().get_si();
}

std::vector<Key> split(const Key& key, int level) {
  std::vector<Key> segs(static_cast<std::size_t>(level) + 1);
  std::size_t s = 0;
  for (auto g : key) {
    if (g == kSep) {
      ++s;
      continue;
    }
    segs[s].push_back(g);
  }
  if (static_cast<int>(s) != level) throw InvariantViolation("bar key has the wrong number of segments");
  return segs;
}

Key join(const std::vector<Key>& segs) {
  Key out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i > 0) out.push_back(kSep);
    out.insert(out.end(), segs[i].begin(), segs[i].end());
  }
  return out;
}

surj::Mask covered_bits(const Key& monomial) {
  surj::Mask c = 0;
  for (auto g : monomial) c |= generator_mask(g);
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

LinComb AlgebraMap::apply(const Key& source_monomial) const {
  const auto& b = target_model(target);
  LinComb acc{{Key{}, 1}};
  for (auto g : source_monomial) {
    acc = multiply(acc, b.apply_epi(image, generator_mask(g)));
    if (acc.empty()) break;
  }
  reduce_in_place(acc, target.field().characteristic());
  return acc;
}

Matrix AlgebraMap::generator_image(int level) const {
  const auto& b = target_model(target);
  const auto source = dold_kan_generators(source_cells(), level);
  const auto keys = b.basis(level, generator_weight, false);
  std::map<Key, std::uint32_t> index;
  for (std::size_t i = 0; i < keys.size(); ++i) index.emplace(keys[i], static_cast<std::uint32_t>(i));
  std::vector<Matrix::Row> cols;
  for (auto g : source) {
    Matrix::Row col;
    for (const auto& t : apply({g})) {
      Scalar v = target.field().reduce(t.coeff);
      if (sgn(v) != 0) col.emplace_back(index.at(t.key), v);
    }
    std::sort(col.begin(), col.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    cols.push_back(std::move(col));
  }
  return Matrix::from_columns(keys.size(), cols);
}

AlgebraMap representing_map(const WeightGradedAlgebra& target, int n, int weight, const Vector& cycle) {
  const auto& b = target_model(target);
  if (n < 1) throw InvalidInput("class degree must be positive");
  if (weight < 1) throw InvalidInput("class weight must be positive");
  const FieldSpec& field = target.field();
  const std::uint32_t p = field.characteristic();
  ModelComplex mc = normalized_complex(b, weight, n);
  const auto& keys = mc.keys[static_cast<std::size_t>(n)];
  if (cycle.size() != keys.size()) throw InvalidInput("cycle has the wrong length");
  Vector bd = mc.chains.differential(n).apply(cycle, field);
  for (const auto& v : bd)
    if (sgn(v) != 0) throw InvalidInput("not a cycle");

  LinComb x;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::int64_t c = to_int(cycle[i], field);
    if (c != 0) x.push_back({keys[i], c});
  }
  canonicalize(x);
  // Moore projection: kill d_n, then d_{n-1}, ..., then d_1.
  LinComb z = x;
  for (int j = n - 1; j >= 0; --j) {
    LinComb corr = apply_degeneracy(b, apply_face(b, z, n, j + 1), n - 1, j);
    for (auto& t : corr) z.push_back({std::move(t.key), -t.coeff});
    canonicalize(z);
    reduce_in_place(z, p);
  }
  for (int i = 0; i <= n; ++i) {
    LinComb f = apply_face(b, z, n, i);
    reduce_in_place(f, p);
    if (!f.empty()) throw InvariantViolation("representative is not spherical");
  }
  LinComb nondeg;
  for (const auto& t : z)
    if (!b.is_degenerate(t.key, n)) nondeg.push_back(t);
  LinComb xr = x;
  reduce_in_place(xr, p);
  if (nondeg.size() != xr.size() || !std::equal(nondeg.begin(), nondeg.end(), xr.begin(), [](const Term& u, const Term& v) {
        return u.key == v.key && u.coeff == v.coeff;
      }))
    throw InvariantViolation("representative does not induce the requested class");

  AlgebraMap f{n, weight, target, std::move(z)};
  return f;
}

Vector power_of_generator(const WeightGradedAlgebra& sphere, int s) {
  const auto& b = target_model(sphere);
  if (b.cells().cells.size() != 1 || b.cells().cells[0].weight != 1)
    throw InvalidInput("expected a sphere algebra on one generator");
  if (s < 1) throw InvalidInput("power must be positive");
  const int n = b.cells().cells[0].degree;
  const LinComb x{{Key{pack_generator(0, surj::full(n))}, 1}};
  LinComb acc = x;
  for (int k = 1; k < s; ++k) acc = shuffle_product(acc, k * n, x, n);
  ModelComplex mc = normalized_complex(b, s, s * n);
  const auto& index = mc.index[static_cast<std::size_t>(s * n)];
  Vector out(mc.keys[static_cast<std::size_t>(s * n)].size(), Scalar(0));
  for (const auto& t : acc) {
    auto it = index.find(t.key);
    if (it == index.end()) throw InvariantViolation("shuffle product left the nondegenerate basis");
    out[it->second] = sphere.field().reduce(t.coeff);
  }
  return out;
}

// ---------------------------------------------------------------------------

BarDiagonalModel::BarDiagonalModel(AlgebraMap f, int bar_bound)
    : map_(std::move(f)), source_(map_.target.field(), map_.source_cells()), bar_bound_(bar_bound) {
  target_model(map_.target);
  if (bar_bound < 0) throw InvalidInput("bar bound must be nonnegative");
  if (map_.degree < 1) throw InvalidInput("source algebra must be connected");
  if (map_.generator_weight < 1) throw InvalidInput("generator weight must be positive");
}

std::vector<Key> BarDiagonalModel::basis(int level, int weight, bool nondegenerate_only) const {
  std::vector<Key> out;
  if (level < 0 || weight < 0) return out;
  if (level > surj::kMaxLevel) throw InvalidInput("simplicial level too large");
  const auto& b = target_model(map_.target);
  const int gw = map_.generator_weight;

  // Non-unit A monomials at this level, by number of generators.
  std::vector<std::vector<Key>> amonos(static_cast<std::size_t>(weight / gw) + 1);
  for (int k = 1; k * gw <= weight; ++k) amonos[static_cast<std::size_t>(k)] = source_.basis(level, k * gw, false);

  const auto bgens = dold_kan_generators(b.cells(), level);
  int best_d = 0, best_w = 1;
  for (const auto& c : b.cells().cells)
    if (c.degree * best_w > best_d * c.weight) {
      best_d = c.degree;
      best_w = c.weight;
    }

  std::vector<Key> segs(static_cast<std::size_t>(level) + 1);
  Key bmono;
  auto emit_b = [&](auto&& self, std::size_t start, int remaining, surj::Mask need, surj::Mask cov) -> void {
    if (remaining == 0) {
      if (!nondegenerate_only || (need & ~cov) == 0) {
        segs.back() = bmono;
        out.push_back(join(segs));
      }
      return;
    }
    if (nondegenerate_only) {
      const int uncovered = surj::popcount(need & ~cov);
      if (static_cast<long>(uncovered) * best_w > static_cast<long>(best_d) * remaining) return;
    }
    for (std::size_t i = start; i < bgens.size(); ++i) {
      const int w = b.cells().cells[generator_cell(bgens[i])].weight;
      if (w > remaining) continue;
      bmono.push_back(bgens[i]);
      self(self, i, remaining - w, need, cov | generator_mask(bgens[i]));
      bmono.pop_back();
    }
  };
  auto rec = [&](auto&& self, int seg, int remaining, int nonunit, surj::Mask need, surj::Mask cov) -> void {
    if (seg == level) {
      emit_b(emit_b, 0, remaining, need, cov);
      return;
    }
    const auto us = static_cast<std::size_t>(seg);
    segs[us].clear();
    self(self, seg + 1, remaining, nonunit, need | (1u << seg), cov);
    if (nonunit < bar_bound_) {
      for (int k = 1; k * gw <= remaining; ++k)
        for (const Key& a : amonos[static_cast<std::size_t>(k)]) {
          segs[us] = a;
          self(self, seg + 1, remaining - k * gw, nonunit + 1, need, cov | covered_bits(a));
        }
      segs[us].clear();
    }
  };
  rec(rec, 0, weight, 0, 0, 0);
  return out;
}

LinComb BarDiagonalModel::face(const Key& key, int level, int i) const {
  if (level < 1 || i < 0 || i > level) throw InvalidInput("face index out of range");
  const auto& b = target_model(map_.target);
  std::vector<Key> segs = split(key, level);
  // Bar part: `as` holds the m-1 A factors, `last` the B factor.
  std::vector<Key> as;
  LinComb last;
  if (i == 0) {
    if (!segs[0].empty()) return {};
    as.assign(segs.begin() + 1, segs.end() - 1);
    last = {{segs.back(), 1}};
  } else if (i < level) {
    for (int k = 0; k < level; ++k) {
      if (k == i) {
        as.back() = multiply_monomials(as.back(), segs[static_cast<std::size_t>(k)]);
        continue;
      }
      as.push_back(segs[static_cast<std::size_t>(k)]);
    }
    last = {{segs.back(), 1}};
  } else {
    as.assign(segs.begin(), segs.end() - 2);
    last = multiply(map_.apply(segs[static_cast<std::size_t>(level - 1)]), {{segs.back(), 1}});
    if (last.empty()) return {};
  }
  // Internal part: d_i on every factor, expanded multilinearly.
  std::vector<std::pair<std::vector<Key>, std::int64_t>> partial{{{}, 1}};
  for (const Key& a : as) {
    LinComb fa = source_.face(a, level, i);
    if (fa.empty()) return {};
    std::vector<std::pair<std::vector<Key>, std::int64_t>> next;
    next.reserve(partial.size() * fa.size());
    for (const auto& [ks, c] : partial)
      for (const auto& t : fa) {
        auto nk = ks;
        nk.push_back(t.key);
        next.emplace_back(std::move(nk), checked_mul(c, t.coeff));
      }
    partial = std::move(next);
  }
  LinComb fb = apply_face(b, last, level, i);
  LinComb out;
  for (const auto& [ks, c] : partial)
    for (const auto& t : fb) {
      auto nk = ks;
      nk.push_back(t.key);
      out.push_back({join(nk), checked_mul(c, t.coeff)});
    }
  canonicalize(out);
  reduce_in_place(out, field().characteristic());
  return out;
}

Key BarDiagonalModel::degeneracy(const Key& key, int level, int j) const {
  if (j < 0 || j > level) throw InvalidInput("degeneracy index out of range");
  const auto& b = target_model(map_.target);
  std::vector<Key> segs = split(key, level);
  std::vector<Key> out;
  out.reserve(segs.size() + 1);
  for (std::size_t k = 0; k < segs.size(); ++k) {
    if (static_cast<int>(k) == j) out.emplace_back();
    out.push_back(k + 1 == segs.size() ? b.degeneracy(segs[k], level, j) : source_.degeneracy(segs[k], level, j));
  }
  return join(out);
}

bool BarDiagonalModel::is_degenerate(const Key& key, int level) const {
  std::vector<Key> segs = split(key, level);
  surj::Mask cov = 0;
  for (const auto& s : segs) cov |= covered_bits(s);
  for (int j = 0; j < level; ++j)
    if (segs[static_cast<std::size_t>(j)].empty() && !surj::bit(cov, j)) return true;
  return false;
}

SimplicialVectorSpace bar_diagonal(const AlgebraMap& f, int bar_bound, int truncation, int max_weight) {
  if (max_weight < 0) throw InvalidInput("weight bound must be nonnegative");
  BarDiagonalModel model(f, bar_bound);
  return materialize(model, 0, max_weight, truncation);
}

// ---------------------------------------------------------------------------

CofiberReport cofiber_homotopy(const AlgebraMap& f, int bar_bound, int truncation, int max_weight) {
  if (truncation < 0) throw InvalidInput("truncation must be nonnegative");
  if (max_weight < 0) throw InvalidInput("weight bound must be nonnegative");
  BarDiagonalModel model(f, bar_bound);
  BarDiagonalModel wider(f, bar_bound + 1);
  CofiberReport r;
  r.bar_bound = bar_bound;
  r.truncation = truncation;
  r.max_weight = max_weight;
  r.pi.values.assign(static_cast<std::size_t>(truncation) + 1, 0);
  std::vector<bool> ok(static_cast<std::size_t>(truncation) + 1, true);
  for (int w = 0; w <= max_weight; ++w) {
    GradedDims h = model_homotopy(model, w, truncation);
    // Every non-unit bar factor carries weight >= generator_weight, so the
    // bound only cuts weights above bar_bound * generator_weight.
    if (w >= (bar_bound + 1) * f.generator_weight) {
      GradedDims h2 = model_homotopy(wider, w, truncation);
      for (int k = 0; k <= truncation; ++k)
        if (h.at(static_cast<std::size_t>(k)) != h2.at(static_cast<std::size_t>(k))) ok[static_cast<std::size_t>(k)] = false;
    }
    for (int k = 0; k <= truncation; ++k) r.pi.values[static_cast<std::size_t>(k)] += h.at(static_cast<std::size_t>(k));
    r.by_weight.push_back(std::move(h));
  }
  GradedDims extra = model_homotopy(wider, max_weight + 1, truncation);
  for (int k = 0; k <= truncation; ++k)
    if (extra.at(static_cast<std::size_t>(k)) != 0) ok[static_cast<std::size_t>(k)] = false;
  r.certified = ok;
  while (r.certified_degree + 1 <= truncation && ok[static_cast<std::size_t>(r.certified_degree + 1)]) ++r.certified_degree;
  return r;
}

LeqResult CofiberTriple::lemma_check() const {
  int reach = std::min({source.stable_through(), target.stable_through(), cofiber.certified_degree});
  if (reach < 0) return LeqResult{true, -1, -1};
  auto a = TruncatedSeries::from_dims(source.dims, reach);
  auto b = TruncatedSeries::from_dims(target.dims, reach);
  auto c = TruncatedSeries::from_dims(cofiber.pi, reach);
  return leq(b, mul(a, c));
}

CofiberTriple cofiber_triple(const AlgebraMap& f, int bar_bound, int truncation, int max_weight) {
  const FieldSpec& field = f.target.field();
  CofiberTriple t;
  // The source is graded by its own generator count here.
  const int source_weights = std::max(1, truncation / f.degree);
  t.source = algebra_homotopy(
      WeightGradedAlgebra::on_cells(field, CellComplex::sphere(1, f.degree), std::max(truncation, f.degree), source_weights),
      truncation);
  t.source.q = 1;
  t.source.n = f.degree;
  t.target = algebra_homotopy(
      WeightGradedAlgebra::on_cells(field, *f.target.cells(), std::max(truncation, 1), std::max(1, max_weight)),
      truncation);
  t.cofiber = cofiber_homotopy(f, bar_bound, truncation, max_weight);
  return t;
}

CofiberReport a_rs_tables(int r, int s, int truncation, std::optional<int> max_weight, std::optional<int> bar_bound) {
  if (r < 1 || s < 1) throw InvalidInput("r and s must be positive");
  if (truncation < 0) throw InvalidInput("truncation must be nonnegative");
  const FieldSpec q(0);
  const int n = 2 * r;
  const int W = max_weight.value_or(std::max(1, truncation / n));
  const int N = bar_bound.value_or((W + 1) / s);
  auto target = sphere_algebra(q, 1, n, std::max(truncation, n * s), std::max(W, s));
  AlgebraMap f = representing_map(target, n * s, s, power_of_generator(target, s));
  CofiberReport rep = cofiber_homotopy(f, N, truncation, W);
  rep.r = r;
  rep.s = s;
  rep.expected_pi.values.assign(static_cast<std::size_t>(truncation) + 1, 0);
  for (int i = 0; i < s && n * i <= truncation; ++i) rep.expected_pi.values[static_cast<std::size_t>(n * i)] = 1;
  rep.hq.values.assign(static_cast<std::size_t>(truncation) + 1, 0);
  for (int d : {n, n * s + 1}) {
    if (d <= truncation)
      rep.hq.values[static_cast<std::size_t>(d)] += 1;
    else
      rep.hq_beyond.push_back(d);
  }
  for (int k = 0; k <= truncation; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    if (rep.pi.at(uk) != rep.expected_pi.at(uk)) {
      rep.matches_expected = false;
      if (rep.certified[uk])
        throw InvariantViolation("cofiber homotopy disagrees with the closed form in certified degree " +
                                 std::to_string(k));
    }
  }
  return rep;
}

nlohmann::json to_json(const CofiberReport& r) {
  nlohmann::json j;
  j["r"] = r.r;
  j["s"] = r.s;
  j["bounds"] = {{"N", r.bar_bound}, {"T", r.truncation}, {"W", r.max_weight}};
  j["pi"] = r.pi.values;
  j["hq"] = r.hq.values;
  j["hq_beyond"] = r.hq_beyond;
  j["certified_degree"] = r.certified_degree;
  j["certified"] = r.certified;
  nlohmann::json bw = nlohmann::json::array();
  for (const auto& d : r.by_weight) bw.push_back(d.values);
  j["by_weight"] = std::move(bw);
  if (!r.expected_pi.values.empty()) {
    j["expected_pi"] = r.expected_pi.values;
    j["matches_expected"] = r.matches_expected;
  }
  return j;
}

// ---------------------------------------------------------------------------

LesVerdict les_feasibility(const GradedDims& a, const GradedDims& b, const GradedDims& c) {
  LesVerdict v;
  const std::size_t top = std::max({a.values.size(), b.values.size(), c.values.size()});
  long incoming = 0;  // rank of the map into the current term
  for (std::size_t d = top; d-- > 0;) {
    const std::pair<const GradedDims*, const char*> terms[] = {{&a, "A"}, {&b, "B"}, {&c, "C"}};
    for (const auto& [g, name] : terms) {
      const long outgoing = static_cast<long>(g->at(d)) - incoming;
      if (outgoing < 0) {
        v.feasible = false;
        v.reason = std::string("image of rank ") + std::to_string(incoming) + " does not fit into " + name + "_" +
                   std::to_string(d) + " of dimension " + std::to_string(g->at(d));
        return v;
      }
      v.ranks.push_back(outgoing);
      incoming = outgoing;
    }
  }
  if (incoming != 0) {
    v.feasible = false;
    v.reason = "C_0 must map onto zero but would need rank " + std::to_string(incoming);
  }
  return v;
}

}  // namespace aqlab
