#include <random>

#include "aqlab/error.hpp"
#include "aqlab/model.hpp"
#include "aqlab/simplicial.hpp"
#include "doctest.h"
#include "unit/oracles.hpp"

using namespace aqlab;

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Normalized and unnormalized homology through T-1, plus d o d checks.
void check_dual(const SimplicialVectorSpace& v) {
  CHECK(v.identity_violation().empty());
  auto a = homotopy_dims(v);
  auto b = homotopy_dims_unnormalized(v);
  CHECK(a.certified_degree == v.truncation() - 1);
  CHECK(a.dims == b.dims);
}

std::vector<std::size_t> trimmed(const GradedDims& d) { return d.trimmed().values; }

}  // namespace

TEST_CASE("constant object") {
  for (std::uint32_t p : {0u, 2u}) {
    auto c = constant_object(FieldSpec(p), 1, 4);
    ChainComplex n = normalized_chains(c);
    CHECK(n.dims() == std::vector<std::size_t>{1, 0, 0, 0, 0});
    CHECK(trimmed(unnormalized_chains(c).homology(3)) == std::vector<std::size_t>{1});
    check_dual(c);
  }
}

TEST_CASE("Eilenberg-MacLane level dimensions and homotopy") {
  auto k1 = eilenberg_maclane(FieldSpec(2), 1, 1, 4);
  CHECK(k1.level_dims() == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(normalized_chains(k1).dims() == std::vector<std::size_t>{0, 1, 0, 0, 0});
  auto k2 = eilenberg_maclane(FieldSpec(0), 1, 2, 4);
  CHECK(k2.level_dims() == std::vector<std::size_t>{0, 0, 1, 3, 6});
  auto k25 = eilenberg_maclane(FieldSpec(0), 1, 2, 5);
  CHECK(homotopy_dims_unnormalized(k25).dims.values == std::vector<std::size_t>{0, 0, 1, 0, 0});
  CHECK(homotopy_dims(k25).dims.values == std::vector<std::size_t>{0, 0, 1, 0, 0});
  CHECK_THROWS_AS(eilenberg_maclane(FieldSpec(0), 1, 3, 2), InvalidInput);

  for (std::uint32_t p : {0u, 2u, 3u})
    for (std::size_t q = 0; q <= 3; ++q)
      for (int n = 0; n <= 3; ++n)
        for (int T = n; T <= n + 4; ++T) {
          auto k = eilenberg_maclane(FieldSpec(p), q, n, T);
          for (int m = 0; m <= T; ++m) CHECK(k.dim(m) == q * binomial(static_cast<std::size_t>(m), static_cast<std::size_t>(n)));
          auto h = homotopy_dims(k);
          for (int d = 0; d <= h.certified_degree; ++d) CHECK(h.dims.at(static_cast<std::size_t>(d)) == (d == n ? q : 0));
          if (T <= n + 2) check_dual(k);
        }
}

TEST_CASE("sums and tensor products") {
  FieldSpec q(0);
  auto k1 = eilenberg_maclane(q, 1, 1, 5);
  auto k3 = eilenberg_maclane(q, 1, 3, 5);
  auto s = direct_sum(k1, k3);
  CHECK(trimmed(homotopy_dims(s).dims) == std::vector<std::size_t>{0, 1, 0, 1});
  check_dual(s);

  auto k1_4 = eilenberg_maclane(q, 1, 1, 4);
  auto t = tensor(k1_4, k1_4);
  for (int m = 0; m <= 4; ++m) CHECK(t.dim(m) == k1_4.dim(m) * k1_4.dim(m));
  CHECK(trimmed(homotopy_dims(t).dims) == std::vector<std::size_t>{0, 0, 1});
  CHECK(trimmed(homotopy_dims_unnormalized(t).dims) == std::vector<std::size_t>{0, 0, 1});

  auto unit = tensor(k1_4, constant_object(q, 1, 4));
  CHECK(homotopy_dims(unit).dims == homotopy_dims(k1_4).dims);

  CHECK_THROWS_AS(tensor(k1, k1_4), InvalidInput);
  CHECK_THROWS_AS(tensor(k1_4, eilenberg_maclane(FieldSpec(2), 1, 1, 4)), InvalidInput);
}

TEST_CASE("acyclic degenerate summand leaves homology unchanged") {
  for (std::uint32_t p : {0u, 2u}) {
    FieldSpec f(p);
    auto k = eilenberg_maclane(f, 1, 2, 5);
    auto disk = dold_kan(f, {1, 2}, {{}, {{0, 1}}}, 5);
    auto v = direct_sum(k, disk);
    CHECK(homotopy_dims(v).dims == homotopy_dims(k).dims);
    check_dual(v);
  }
}

TEST_CASE("identity violations are rejected") {
  FieldSpec f(0);
  auto k = eilenberg_maclane(f, 1, 1, 2);
  auto j = to_json(k);
  // Replace d_0 on level 2 by zero: d_0 s_0 = id fails.
  for (auto& row : j["faces"][2][0])
    for (auto& e : row) e = 0;
  CHECK_THROWS_AS(simplicial_from_json(j), InvalidInput);
  j = to_json(k);
  j["faces"][1].erase(0);
  CHECK_THROWS_AS(simplicial_from_json(j), InvalidInput);
}

TEST_CASE("JSON round trip") {
  for (std::uint32_t p : {0u, 3u}) {
    auto k = eilenberg_maclane(FieldSpec(p), 2, 1, 3);
    auto back = simplicial_from_json(to_json(k));
    CHECK(back.level_dims() == k.level_dims());
    CHECK(to_json(back) == to_json(k));
  }
}

TEST_CASE("random Dold-Kan objects: normalized, unnormalized and cell homology agree") {
  std::mt19937_64 rng(2024);
  int objects = 0;
  for (std::uint32_t p : {0u, 2u, 3u}) {
    FieldSpec f(p);
    for (int trial = 0; trial < 20; ++trial) {
      auto rc = oracle::random_complex(rng, 3, 4);
      std::vector<int> degrees;
      std::vector<std::vector<std::pair<std::size_t, long>>> boundary;
      for (const auto& c : rc.cells.cells) {
        degrees.push_back(c.degree);
        std::vector<std::pair<std::size_t, long>> b;
        for (auto [t, v] : c.boundary) b.emplace_back(t, v);
        boundary.push_back(std::move(b));
      }
      const int T = 4;
      auto v = dold_kan(f, degrees, boundary, T);
      auto h = homotopy_dims(v);
      auto hu = homotopy_dims_unnormalized(v);
      CAPTURE(p);
      CAPTURE(trial);
      CHECK(h.dims == hu.dims);
      for (int d = 0; d <= h.certified_degree; ++d) CHECK(h.dims.at(static_cast<std::size_t>(d)) == rc.homology[static_cast<std::size_t>(d)]);
      // The engine's normalized complex computes the same numbers without materializing.
      SymmetricAlgebraModel model(f, rc.cells);
      CHECK(model_homotopy(model, 1, T - 1) == h.dims);
      ++objects;
    }
  }
  CHECK(objects >= 50);
}

TEST_CASE("Kunneth on random tensor products") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    FieldSpec f(trial % 2 == 0 ? 0 : 2);
    auto a = oracle::random_complex(rng, 2, 2);
    auto b = oracle::random_complex(rng, 2, 2);
    const int T = 4;
    SymmetricAlgebraModel ma(f, a.cells), mb(f, b.cells);
    auto va = materialize(ma, 1, 1, T);
    auto vb = materialize(mb, 1, 1, T);
    auto t = tensor(va, vb);
    auto h = homotopy_dims(t);
    auto expect = convolve(homotopy_dims(va).dims, homotopy_dims(vb).dims, static_cast<std::size_t>(T - 1));
    CHECK(h.dims == expect);
    CHECK(homotopy_dims_unnormalized(t).dims == h.dims);
  }
}
