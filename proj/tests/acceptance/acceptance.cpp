// One pass/fail line per acceptance criterion. Oracles here are computed
// independently of the library (monomial counting, binomials, direct rank
// arguments); the library is only the thing under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "aqlab/audit.hpp"
#include "aqlab/barcof.hpp"
#include "aqlab/error.hpp"
#include "aqlab/series.hpp"
#include "aqlab/simplicial.hpp"
#include "aqlab/symalg.hpp"

using namespace aqlab;

namespace {

// Number of monomials of total degree k in a free graded-commutative algebra
// on q generators of degree n: polynomial if n is even, exterior if odd.
std::vector<std::size_t> free_dims(std::size_t q, int n, int top) {
  std::vector<std::size_t> c(static_cast<std::size_t>(top) + 1, 0);
  c[0] = 1;
  for (std::size_t g = 0; g < q; ++g) {
    std::vector<std::size_t> next(c.size(), 0);
    for (int k = 0; k <= top; ++k)
      for (int e = 0; k + e * n <= top; ++e) {
        if (n % 2 == 1 && e > 1) break;
        next[static_cast<std::size_t>(k + e * n)] += c[static_cast<std::size_t>(k)];
      }
    c = std::move(next);
  }
  return c;
}

std::string run(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return out + "\n<status " + std::to_string(status) + ">";
}

struct Criterion {
  int id;
  std::string name;
  std::function<std::string(bool&)> body;  // returns detail; sets ok
};

}  // namespace

int main() {
  std::vector<Criterion> criteria;

  criteria.push_back({1, "Eilenberg-MacLane homotopy", [](bool& ok) {
    int checked = 0;
    for (std::uint32_t p : {0u, 2u, 3u})
      for (std::size_t q = 1; q <= 2; ++q)
        for (int n = 1; n <= 3; ++n) {
          auto h = homotopy_dims(eilenberg_maclane(FieldSpec(p), q, n, n + 4));
          if (h.certified_degree < n + 2) ok = false;
          for (int k = 0; k <= h.certified_degree; ++k)
            if (h.dims.at(static_cast<std::size_t>(k)) != (k == n ? q : 0)) ok = false;
          ++checked;
        }
    return std::to_string(checked) + " objects, q in {1,2}, n in {1,2,3}, T = n+4, chars 0/2/3";
  }});

  criteria.push_back({2, "normalized and unnormalized homology agree", [](bool& ok) {
    std::mt19937_64 rng(2024);
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
    const std::uint32_t primes[] = {0, 2, 3, 5};
    int objects = 0;
    auto agree = [&](const SimplicialVectorSpace& v) {
      ++objects;
      if (!(homotopy_dims(v).dims == homotopy_dims_unnormalized(v).dims)) ok = false;
    };
    for (int it = 0; it < 60; ++it) {
      FieldSpec f(primes[rng() % 4]);
      const int T = pick(2, 4);
      std::vector<int> deg;
      std::vector<std::vector<std::pair<std::size_t, long>>> bd;
      for (int k = pick(1, 3); k > 0; --k) {
        deg.push_back(pick(0, T - 1));
        bd.push_back({});
      }
      for (int k = pick(0, 2); k > 0; --k) {
        const int d = pick(1, T - 1);
        deg.push_back(d - 1);
        bd.push_back({});
        deg.push_back(d);
        bd.push_back({{deg.size() - 2, 1}});
      }
      auto v = dold_kan(f, deg, bd, T);
      switch (it % 4) {
        case 0: agree(v); break;
        case 1: agree(symmetric_power(v, 2)); break;
        case 2: agree(direct_sum(v, constant_object(f, static_cast<std::size_t>(pick(1, 2)), T))); break;
        default: agree(tensor(v, eilenberg_maclane(f, 1, pick(0, 1), T))); break;
      }
    }
    for (std::uint32_t p : {0u, 2u, 3u})
      for (std::size_t q = 1; q <= 2; ++q)
        for (int n = 1; n <= 3; ++n) {
          auto k = eilenberg_maclane(FieldSpec(p), q, n, n + 3);
          agree(k);
          for (int d = 2; d <= 3; ++d) agree(symmetric_power(k, d));
        }
    return std::to_string(objects) + " objects (60 random, the rest K(V,n) and Sym^d K)";
  }});

  criteria.push_back({3, "rational sphere homotopy is free graded-commutative", [](bool& ok) {
    int cases = 0;
    for (std::size_t q = 0; q <= 2; ++q)
      for (int n = 1; n <= 4; ++n) {
        const int top = 8;
        // Smallest weight bound reaching degree 8; certification examines W+1.
        const int W = std::max(1, n % 2 ? std::min(static_cast<int>(q), top / n) : top / n);
        auto rep = sphere_homotopy(FieldSpec(0), q, n, top, W);
        if (rep.stable_through() < top) ok = false;
        auto expect = free_dims(q, n, top);
        for (int k = 0; k <= top; ++k)
          if (rep.dims.at(static_cast<std::size_t>(k)) != expect[static_cast<std::size_t>(k)]) ok = false;
        ++cases;
      }
    return std::to_string(cases) + " spheres, q <= 2, n <= 4, degrees 0..8 against monomial counts";
  }});

  criteria.push_back({4, "Dold invariance under an acyclic summand", [](bool& ok) {
    std::string detail;
    for (std::uint32_t p : {0u, 2u})
      for (int n = 1; n <= 2; ++n) {
        const int T = 5, W = 3;
        FieldSpec f(p);
        auto a = algebra_homotopy(WeightGradedAlgebra::on_cells(f, CellComplex::sphere(1, n), T, W), T);
        auto b = algebra_homotopy(
            WeightGradedAlgebra::on_cells(f, CellComplex::sphere(1, n).plus(CellComplex::disk(n)), T, W), T);
        const int stable = std::min(a.stable_through(), b.stable_through());
        if (stable < 3) ok = false;
        for (int k = 0; k <= stable; ++k)
          if (a.dims.at(static_cast<std::size_t>(k)) != b.dims.at(static_cast<std::size_t>(k))) ok = false;
        detail += (detail.empty() ? "" : ", ") + std::string("p=") + std::to_string(p) + " n=" + std::to_string(n) +
                  " through " + std::to_string(stable);
      }
    return detail;
  }});

  criteria.push_back({5, "Hurewicz iso in degree n, onto in degree n+1", [](bool& ok) {
    for (std::uint32_t p : {0u, 2u})
      for (int n = 1; n <= 3; ++n) {
        auto h = hurewicz(sphere_algebra(FieldSpec(p), 1, n, n + 2, 3), n + 1);
        const auto& hn = h.at(static_cast<std::size_t>(n));
        if (!(hn.injective() && hn.surjective() && hn.rank == 1)) ok = false;
        if (!h.at(static_cast<std::size_t>(n + 1)).surjective()) ok = false;
      }
    return std::string("S(l,n), n <= 3, chars 0 and 2");
  }});

  criteria.push_back({6, "indecomposables of spheres", [](bool& ok) {
    for (std::uint32_t p : {0u, 2u})
      for (std::size_t q = 1; q <= 2; ++q)
        for (int n = 1; n <= 3; ++n) {
          const int T = n + 4;
          auto h = homotopy_dims(indecomposables(sphere_algebra(FieldSpec(p), q, n, T, 1)));
          if (h.certified_degree < n + 2) ok = false;
          for (int k = 0; k <= h.certified_degree; ++k)
            if (h.dims.at(static_cast<std::size_t>(k)) != (k == n ? q : 0)) ok = false;
        }
    return std::string("pi_* Q S(V,n) = q in degree n only; q in {1,2}, n <= 3, chars 0 and 2");
  }});

  criteria.push_back({7, "A<r,s> tables", [](bool& ok) {
    std::string detail;
    for (auto [s, top] : {std::pair{2, 5}, std::pair{3, 6}}) {
      const auto t0 = std::chrono::steady_clock::now();
      CofiberReport rep;
      try {
        rep = a_rs_tables(1, s, top);
      } catch (const Error& e) {
        ok = false;
        detail += std::string(" error: ") + e.what();
        continue;
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      // pi_* A<1,s> = l[x_2]/(x^s); H^Q in degrees 2 and 2s+1.
      for (int k = 0; k <= top; ++k) {
        const std::size_t want = (k % 2 == 0 && k < 2 * s) ? 1 : 0;
        if (rep.pi.at(static_cast<std::size_t>(k)) != want || !rep.certified[static_cast<std::size_t>(k)]) ok = false;
        const std::size_t hq_want = (k == 2 || k == 2 * s + 1) ? 1 : 0;
        if (rep.hq.at(static_cast<std::size_t>(k)) != hq_want) ok = false;
      }
      if (2 * s + 1 > top && rep.hq_beyond != std::vector<int>{2 * s + 1}) ok = false;
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s(1,%d) through %d in %.1fs", detail.empty() ? "" : ", ", s, top, secs);
      detail += buf;
    }
    return detail;
  }});

  criteria.push_back({8, "theta(B) <= theta(A) theta(C) on cofiber triples", [](bool& ok) {
    int triples = 0;
    auto check = [&](const AlgebraMap& f, int N, int T, int W) {
      auto tri = cofiber_triple(f, N, T, W);
      auto r = tri.lemma_check();
      if (!r.holds || r.compared_through < 2) ok = false;
      ++triples;
    };
    for (int n = 1; n <= 2; ++n) {
      auto s = sphere_algebra(FieldSpec(0), 1, n, 4, 2);
      check(representing_map(s, n, 1, Vector{Scalar(1)}), 2, 4, 2);
    }
    auto s2 = sphere_algebra(FieldSpec(0), 1, 2, 5, 2);
    check(representing_map(s2, 2, 1, Vector{Scalar(0)}), 2, 5, 2);
    for (int s = 1; s <= 3; ++s) {
      auto t = sphere_algebra(FieldSpec(0), 1, 2, std::max(5, 2 * s), std::max(2, s));
      check(representing_map(t, 2 * s, s, power_of_generator(t, s)), std::max(1, 3 / s), 5, std::max(2, s));
    }
    auto t2 = sphere_algebra(FieldSpec(2), 1, 2, 5, 2);
    check(representing_map(t2, 4, 2, power_of_generator(t2, 2)), 1, 5, 2);
    return std::to_string(triples) + " triples (identities, zero map, powers of x over Q and F_2)";
  }});

  criteria.push_back({9, "finiteness audit grid", [](bool& ok) {
    int contradictions = 0, consistent = 0;
    for (std::uint32_t p : {2u, 3u}) {
      FieldSpec f(p);
      for (int n = 1; n <= 4; ++n) {
        // All profiles q_1..q_n with entries <= 2 and q_n >= 1.
        std::vector<std::map<int, std::size_t>> profiles{{}};
        for (int s = 1; s <= n; ++s) {
          std::vector<std::map<int, std::size_t>> next;
          for (const auto& pr : profiles)
            for (std::size_t q = s == n ? 1 : 0; q <= 2; ++q) {
              auto m = pr;
              m[s] = q;
              next.push_back(m);
            }
          profiles = std::move(next);
        }
        for (const auto& dims : profiles)
          for (std::uint64_t big_d : {std::uint64_t{p} + 1, std::uint64_t{100}}) {
            auto v = serre_audit(EnvelopeProfile(f, dims, big_d));
            if (n == 1) {
              if (v.outcome != AuditOutcome::kConsistent) ok = false;
              ++consistent;
              continue;
            }
            if (v.outcome != AuditOutcome::kContradiction || !v.witness) {
              ok = false;
              continue;
            }
            // Independent re-evaluation of both sides at the witness.
            const double t = *v.witness;
            double fact = 1, rhs = static_cast<double>(v.d), lhs = 0;
            for (int s = 1; s <= n - 2; ++s) {
              fact *= s;
              rhs += static_cast<double>(dims.count(s) ? dims.at(s) : 0) * std::pow(t, s) / fact;
            }
            const double fn2 = std::tgamma(n - 1), fn1 = std::tgamma(n);
            lhs = static_cast<double>(dims.count(n - 1) ? dims.at(n - 1) : 0) * std::pow(t, n - 2) / fn2 +
                  static_cast<double>(dims.at(n)) * std::pow(t, n - 1) / fn1;
            if (!(lhs > rhs) || !v.verify()) ok = false;
            ++contradictions;
          }
      }
    }
    return std::to_string(contradictions) + " verified contradictions (n = 2..4), " + std::to_string(consistent) +
           " consistent (n = 1)";
  }});

  criteria.push_back({10, "phi trend toward q t^(n-1)/(n-1)! with honest flagging", [](bool& ok) {
    auto cs = sphere_series_charp(1, 2, 2, 8, 4);
    if (cs.shortened) ok = false;
    std::vector<double> grid;
    for (int k = 0; k <= 8; ++k) grid.push_back(0.05 * std::pow(2.0, k));
    auto r = asymptotic_check(cs.series, 1, 2, 2, grid, 1e-6);
    if (!r.monotone_toward_one || r.trusted_rows < 2) ok = false;
    // Beyond the trusted rows the report must say inconclusive.
    if (r.trusted_rows < static_cast<int>(r.rows.size()) && !r.inconclusive) ok = false;
    for (int i = r.trusted_rows; i < static_cast<int>(r.rows.size()); ++i)
      if (r.rows[static_cast<std::size_t>(i)].phi.stabilized) ok = false;
    std::ostringstream os;
    os << "F_2 series through degree " << cs.series.order() << ", " << r.trusted_rows << " trusted rows, ratios";
    for (int i = 0; i < r.trusted_rows; ++i) os << " " << r.rows[static_cast<std::size_t>(i)].ratio;
    os << (r.inconclusive ? "; flagged inconclusive beyond" : "");
    return os.str();
  }});

  criteria.push_back({11, "rational failure and the even-profile check", [](bool& ok) {
    // theta(l,3) is bounded: brute force through degree 12 has total dimension 2.
    auto rep = sphere_homotopy(FieldSpec(0), 1, 3, 12, 2);
    if (rep.stable_through() < 12 || rep.dims.total() != 2) ok = false;
    FieldSpec q(0);
    if (rational_check(EnvelopeProfile(q, {{2, 1}, {5, 1}}, std::nullopt), true).outcome !=
        RationalOutcome::kNotApplicable)
      ok = false;
    for (const auto& dims : std::vector<std::map<int, std::size_t>>{{{2, 1}}, {{2, 2}, {4, 1}}, {{6, 1}}})
      if (rational_check(EnvelopeProfile(q, dims, std::nullopt), true).outcome != RationalOutcome::kForcedEmpty)
        ok = false;
    return "dims of S(l,3) through 12: " + to_json(rep.dims).dump() + "; A<1,2> profile not applicable";
  }});

  criteria.push_back({12, "CLI determinism", [](bool& ok) {
    const std::string cli = AQLAB_CLI_PATH;
    const std::vector<std::string> cmds = {
        "pi-sphere --char 2 -q 1 -n 2 -T 5",
        "rational-example -r 1 -s 2 -T 5 --output table",
        "audit --char 2 --profile 1:1,2:2,3:1 --pi-bound 100",
        "audit --char 2 --profile 2:1 --pi-bound 3 --mode empirical --output csv",
        "series --char 2 -q 1 -n 2 -M 6 -W 3 --asymptotic --output csv",
        "cofiber -n 2 -s 2 -T 4",
        "selfcheck --seed 11",
    };
    for (const auto& c : cmds) {
      const auto a = run(cli + " " + c), b = run(cli + " " + c);
      if (a != b || a.find("<status 0>") == std::string::npos && a.find("<status 512>") == std::string::npos)
        ok = false;
    }
    return std::to_string(cmds.size()) + " subcommand invocations run twice, byte-identical";
  }});

  int failed = 0;
  for (const auto& c : criteria) {
    bool ok = true;
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      detail = c.body(ok);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char head[64];
    std::snprintf(head, sizeof head, "%s %2d ", ok ? "PASS" : "FAIL", c.id);
    char tail[32];
    std::snprintf(tail, sizeof tail, " [%.1fs]", secs);
    std::cout << head << c.name << ": " << detail << tail << std::endl;
    if (!ok) ++failed;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failed) << "/"
            << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
