#pragma once

// Independent reference computations used by the tests. Dense storage and a
// different pivot rule (last nonzero entry of each column) from the library.

#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "aqlab/exactfield.hpp"
#include "aqlab/model.hpp"
#include "aqlab/simplicial.hpp"

namespace oracle {

using Dense = std::vector<std::vector<mpq_class>>;

inline mpq_class normalize(const mpq_class& v, std::uint32_t p) {
  if (p == 0) return v;
  mpz_class num = v.get_num() % p;
  mpz_class den = v.get_den() % p;
  if (num < 0) num += p;
  if (den < 0) den += p;
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mpz_class(p).get_mpz_t());
  mpz_class r = (num * inv) % p;
  return mpq_class(r);
}

inline Dense dense(const aqlab::Matrix& m) { return m.to_dense(); }

/// Column-by-column elimination picking the lowest nonzero row as pivot.
inline std::size_t rank(Dense a, std::uint32_t p) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  for (auto& r : a)
    for (auto& v : r) v = normalize(v, p);
  std::vector<bool> used(rows, false);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::ptrdiff_t piv = -1;
    for (std::size_t i = rows; i-- > 0;)
      if (!used[i] && sgn(a[i][c]) != 0) {
        piv = static_cast<std::ptrdiff_t>(i);
        break;
      }
    if (piv < 0) continue;
    used[static_cast<std::size_t>(piv)] = true;
    ++r;
    const mpq_class pv = a[static_cast<std::size_t>(piv)][c];
    for (std::size_t i = 0; i < rows; ++i) {
      if (used[i] || sgn(a[i][c]) == 0) continue;
      mpq_class f = a[i][c] / pv;
      for (std::size_t k = c; k < cols; ++k) a[i][k] = normalize(a[i][k] - f * a[static_cast<std::size_t>(piv)][k], p);
    }
  }
  return r;
}

inline std::size_t rank(const aqlab::Matrix& m, std::uint32_t p) { return rank(dense(m), p); }

/// Homology dims of a complex given its dims and differentials (d[k]: C_k -> C_{k-1}).
inline std::vector<std::size_t> homology(const std::vector<std::size_t>& dims, const std::vector<aqlab::Matrix>& d,
                                         std::uint32_t p, int through) {
  std::vector<std::size_t> ranks(dims.size() + 1, 0);
  for (std::size_t k = 1; k < dims.size(); ++k) ranks[k] = rank(d[k], p);
  std::vector<std::size_t> out;
  for (int k = 0; k <= through; ++k) {
    auto uk = static_cast<std::size_t>(k);
    out.push_back(dims[uk] - ranks[uk] - ranks[uk + 1]);
  }
  return out;
}

/// Random bounded cell complex: disks and spheres, then a unimodular change of
/// basis in every degree so the boundary is not in normal form.
struct RandomComplex {
  aqlab::CellComplex cells;
  std::vector<std::size_t> homology;  // by construction
};

inline RandomComplex random_complex(std::mt19937_64& rng, int max_degree, int max_pieces) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> pieces(1, max_pieces);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<long> small(-2, 2);
  RandomComplex out;
  out.homology.assign(static_cast<std::size_t>(max_degree + 2), 0);
  // Cells per degree before the change of basis.
  std::vector<std::vector<std::uint32_t>> by_degree(static_cast<std::size_t>(max_degree + 2));
  aqlab::CellComplex base;
  const int n = pieces(rng);
  for (int i = 0; i < n; ++i) {
    int k = deg(rng);
    if (coin(rng) == 0 || k == max_degree) {
      base.cells.push_back({k, 1, {}});
      by_degree[static_cast<std::size_t>(k)].push_back(static_cast<std::uint32_t>(base.cells.size() - 1));
      ++out.homology[static_cast<std::size_t>(k)];
    } else {
      auto b = static_cast<std::uint32_t>(base.cells.size());
      base.cells.push_back({k, 1, {}});
      base.cells.push_back({k + 1, 1, {{b, 1}}});
      by_degree[static_cast<std::size_t>(k)].push_back(b);
      by_degree[static_cast<std::size_t>(k + 1)].push_back(b + 1);
    }
  }
  // New basis in each degree: e'_i = e_i + sum_{j>i} u_ij e_j (unit upper triangular).
  // Boundary of e'_i is the old boundary rewritten in the new basis of degree k-1:
  // old e_j = e'_j - sum ... solved by back substitution with integer coefficients.
  const std::size_t total = base.cells.size();
  std::vector<std::vector<long>> to_new(total);  // old cell -> coefficients over new cells (same degree)
  std::vector<std::vector<long>> new_in_old(total);
  for (auto& group : by_degree) {
    const std::size_t g = group.size();
    std::vector<std::vector<long>> u(g, std::vector<long>(g, 0));
    for (std::size_t i = 0; i < g; ++i) {
      u[i][i] = 1;
      for (std::size_t j = i + 1; j < g; ++j) u[i][j] = small(rng);
    }
    // inverse of unit upper triangular u
    std::vector<std::vector<long>> inv(g, std::vector<long>(g, 0));
    for (std::size_t i = g; i-- > 0;) {
      inv[i][i] = 1;
      for (std::size_t j = i + 1; j < g; ++j) {
        long s = 0;
        for (std::size_t k = i + 1; k <= j; ++k) s += u[i][k] * inv[k][j];
        inv[i][j] = -s;
      }
    }
    for (std::size_t a = 0; a < g; ++a) {
      new_in_old[group[a]].assign(total, 0);
      to_new[group[a]].assign(total, 0);
      for (std::size_t b = 0; b < g; ++b) {
        new_in_old[group[a]][group[b]] = u[a][b];  // e'_a = sum_b u_ab e_b
        to_new[group[a]][group[b]] = inv[a][b];    // e_a = sum_b inv_ab e'_b
      }
    }
  }
  out.cells = base;
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<long> acc(total, 0);
    for (std::size_t old = 0; old < total; ++old) {
      long coeff = new_in_old[c].empty() ? 0 : new_in_old[c][old];
      if (coeff == 0) continue;
      for (const auto& [low, bc] : base.cells[old].boundary)
        for (std::size_t t = 0; t < total; ++t) acc[t] += coeff * bc * to_new[low][t];
    }
    out.cells.cells[c].boundary.clear();
    for (std::size_t t = 0; t < total; ++t)
      if (acc[t] != 0) out.cells.cells[c].boundary.emplace_back(static_cast<std::uint32_t>(t), acc[t]);
  }
  out.homology.resize(static_cast<std::size_t>(max_degree + 1));
  return out;
}

}  // namespace oracle
