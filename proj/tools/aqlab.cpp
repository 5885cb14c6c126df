// Command-line front end. Every subcommand builds one Output (JSON document
// plus a table) and renders it in the requested format; nothing is printed
// while computing, so output is byte-identical across runs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aqlab/audit.hpp"
#include "aqlab/barcof.hpp"
#include "aqlab/error.hpp"
#include "aqlab/series.hpp"
#include "aqlab/simplicial.hpp"
#include "aqlab/symalg.hpp"

using namespace aqlab;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInconclusive = 2;
constexpr int kInternal = 3;

struct RunConfig {
  std::uint32_t characteristic = 0;
  int truncation = 6;
  std::optional<int> max_weight;
  std::optional<int> bar_bound;
  int series_order = 8;
  std::string output = "json";
  std::uint64_t seed = 1;

  void validate() const {
    if (truncation < 1) throw InvalidInput("truncation must be positive");
    if (max_weight && *max_weight < 1) throw InvalidInput("weight bound must be positive");
    if (bar_bound && *bar_bound < 1) throw InvalidInput("bar bound must be positive");
    if (series_order < 1) throw InvalidInput("series order must be positive");
  }
  FieldSpec field() const { return FieldSpec(characteristic); }
};

// Rows of strings with a header; rendered as CSV or as an aligned table.
struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Output {
  json doc;
  std::vector<Table> tables;
  std::vector<std::string> notes;  // table format only
  int code = kOk;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// Round-trip precision, for values that sit just past a threshold.
std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string render_csv(const Output& out) {
  std::string s;
  for (std::size_t t = 0; t < out.tables.size(); ++t) {
    const auto& tab = out.tables[t];
    if (out.tables.size() > 1) s += (t ? "\n# " : "# ") + tab.title + "\n";
    for (std::size_t i = 0; i < tab.header.size(); ++i) s += (i ? "," : "") + tab.header[i];
    s += "\n";
    for (const auto& r : tab.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      s += "\n";
    }
  }
  return s;
}

std::string render_table(const Output& out) {
  std::ostringstream os;
  for (const auto& tab : out.tables) {
    std::vector<std::size_t> w(tab.header.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = tab.header[i].size();
    for (const auto& r : tab.rows)
      for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
    if (!tab.title.empty()) os << tab.title << "\n";
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        os << (i ? "  " : "") << cells[i];
        if (i + 1 < cells.size()) os << std::string(w[i] - cells[i].size(), ' ');
      }
      os << "\n";
    };
    line(tab.header);
    for (const auto& r : tab.rows) line(r);
    os << "\n";
  }
  for (const auto& n : out.notes) os << n << "\n";
  return os.str();
}

Table dims_table(const std::vector<std::size_t>& dims, const std::vector<bool>* flags, const std::string& flag_name) {
  Table t;
  t.header = {"degree", "dim"};
  if (flags) t.header.push_back(flag_name);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    std::vector<std::string> row{std::to_string(k), std::to_string(dims[k])};
    if (flags) row.push_back(yes_no(k < flags->size() && (*flags)[k]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<std::size_t> padded(const GradedDims& d, int top) {
  std::vector<std::size_t> v(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) v[static_cast<std::size_t>(k)] = d.at(static_cast<std::size_t>(k));
  return v;
}

// ---------------------------------------------------------------------------

Output cmd_pi_sphere(const RunConfig& c, std::size_t q, int n) {
  if (n < 1) throw InvalidInput("n must be positive");
  const int W = c.max_weight.value_or(c.truncation / n + 1);
  auto rep = sphere_homotopy(c.field(), q, n, c.truncation, W);
  Output out;
  out.doc = to_json(rep);
  out.doc["stable_through"] = rep.stable_through();
  out.tables.push_back(dims_table(rep.dims.values, &rep.weight_stable, "stable"));
  out.tables.back().title = "pi_* S(" + std::to_string(q) + "," + std::to_string(n) + ") over " + c.field().name() +
                            ", W = " + std::to_string(W);
  out.notes.push_back("dims " + join(rep.dims.values));
  if (rep.stable_through() < c.truncation) {
    out.notes.push_back("weight bound too small: stable only through degree " + std::to_string(rep.stable_through()));
    out.code = kInconclusive;
  }
  return out;
}

Output cmd_hq_sphere(const RunConfig& c, std::size_t q, int n) {
  if (n < 1) throw InvalidInput("n must be positive");
  auto a = sphere_algebra(c.field(), q, n, c.truncation, 1);
  auto dims = padded(a.weight_homotopy(1, c.truncation), c.truncation);
  Output out;
  out.doc = {{"field", c.characteristic}, {"q", q}, {"n", n}, {"T", c.truncation}, {"dims", dims},
             {"certified_degree", c.truncation}};
  out.tables.push_back(dims_table(dims, nullptr, ""));
  out.tables.back().title = "pi_* Q S(" + std::to_string(q) + "," + std::to_string(n) + ") over " + c.field().name();
  out.notes.push_back("dims " + join(dims));
  return out;
}

json dims_doc(const SimplicialVectorSpace& v, const CertifiedDims& cd) {
  return {{"field", v.field().characteristic()}, {"T", v.truncation()}, {"level_dims", v.level_dims()},
          {"dims", cd.dims.values}, {"certified_degree", cd.certified_degree}};
}

Output homotopy_of(const SimplicialVectorSpace& v) {
  auto cd = homotopy_dims(v);
  auto un = homotopy_dims_unnormalized(v);
  if (!(cd.dims == un.dims)) throw InvariantViolation("normalized and unnormalized homology disagree");
  Output out;
  out.doc = dims_doc(v, cd);
  out.doc["unnormalized_agrees"] = true;
  out.tables.push_back(dims_table(cd.dims.values, nullptr, ""));
  out.notes.push_back("certified through degree " + std::to_string(cd.certified_degree));
  return out;
}

Output cmd_em(const RunConfig& c, std::size_t q, int n, bool dump) {
  auto v = eilenberg_maclane(c.field(), q, n, c.truncation);
  if (dump) {
    Output out;
    out.doc = to_json(v);
    return out;
  }
  Output out = homotopy_of(v);
  out.doc["q"] = q;
  out.doc["n"] = n;
  out.tables.back().title = "pi_* K(" + std::to_string(q) + "," + std::to_string(n) + ") over " + c.field().name();
  return out;
}

Output cmd_homotopy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  Output out = homotopy_of(simplicial_from_json(j));
  out.tables.back().title = "pi_* of " + path;
  return out;
}

json cofiber_doc(const CofiberReport& r) {
  nlohmann::json bw = nlohmann::json::array();
  for (const auto& d : r.by_weight) bw.push_back(d.values);
  return {{"bounds", {{"N", r.bar_bound}, {"T", r.truncation}, {"W", r.max_weight}}},
          {"pi", r.pi.values},
          {"certified", r.certified},
          {"certified_degree", r.certified_degree},
          {"by_weight", bw}};
}

Output cmd_cofiber(const RunConfig& c, int n, int power, bool zero) {
  if (n < 1 || power < 1) throw InvalidInput("target degree and power must be positive");
  if (zero && power != 1) throw InvalidInput("the zero map is taken on S(n) -> S(n); drop --power");
  const int T = c.truncation;
  const int W = c.max_weight.value_or(std::max(power, T / n));
  const int N = c.bar_bound.value_or(std::max(1, (W + 1) / power));
  auto target = sphere_algebra(c.field(), 1, n, std::max(T, n * power), std::max(W, power));
  Vector cycle = power_of_generator(target, power);
  if (zero)
    for (auto& x : cycle) x = 0;
  auto f = representing_map(target, n * power, power, cycle);
  auto tri = cofiber_triple(f, N, T, W);
  auto lemma = tri.lemma_check();
  Output out;
  out.doc = {{"field", c.characteristic},
             {"map", {{"source_degree", n * power}, {"target_degree", n}, {"power", power}, {"zero", zero}}},
             {"cofiber", cofiber_doc(tri.cofiber)},
             {"source", to_json(tri.source)},
             {"target", to_json(tri.target)},
             {"lemma", {{"holds", lemma.holds}, {"compared_through", lemma.compared_through}}}};
  if (!lemma.holds) out.doc["lemma"]["first_violation"] = lemma.first_violation;
  out.tables.push_back(dims_table(padded(tri.cofiber.pi, T), &tri.cofiber.certified, "certified"));
  out.tables.back().title = "pi_* of the cofiber of S(" + std::to_string(n * power) + ") -> S(" + std::to_string(n) +
                            "), " + (zero ? std::string("zero map") : "x^" + std::to_string(power)) +
                            ", N = " + std::to_string(N) + ", W = " + std::to_string(W);
  out.notes.push_back("theta(B) <= theta(A) theta(C) through degree " + std::to_string(lemma.compared_through) + ": " +
                      yes_no(lemma.holds));
  if (!lemma.holds) throw InvariantViolation("cofiber series inequality fails");
  if (tri.cofiber.certified_degree < T) {
    out.notes.push_back("certified only through degree " + std::to_string(tri.cofiber.certified_degree));
    out.code = kInconclusive;
  }
  return out;
}

Output cmd_rational_example(const RunConfig& c, int r, int s) {
  if (c.characteristic != 0) throw InvalidInput("the A<r,s> family is rational; use --char 0");
  auto rep = a_rs_tables(r, s, c.truncation, c.max_weight, c.bar_bound);
  Output out;
  out.doc = to_json(rep);
  Table pi;
  pi.title = "pi_* A<" + std::to_string(r) + "," + std::to_string(s) + ">";
  pi.header = {"degree", "computed", "expected", "certified"};
  for (int k = 0; k <= c.truncation; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    pi.rows.push_back({std::to_string(k), std::to_string(rep.pi.at(uk)), std::to_string(rep.expected_pi.at(uk)),
                       yes_no(rep.certified[uk])});
  }
  Table hq;
  hq.title = "H^Q_* A<" + std::to_string(r) + "," + std::to_string(s) + ">";
  hq.header = {"degree", "dim"};
  for (int k = 0; k <= c.truncation; ++k) hq.rows.push_back({std::to_string(k), std::to_string(rep.hq.at(static_cast<std::size_t>(k)))});
  for (int d : rep.hq_beyond) hq.rows.push_back({std::to_string(d), "1"});
  out.tables = {pi, hq};
  out.notes.push_back("bounds N = " + std::to_string(rep.bar_bound) + ", W = " + std::to_string(rep.max_weight) +
                      "; matches table: " + yes_no(rep.matches_expected));
  if (rep.certified_degree < c.truncation) {
    out.notes.push_back("certified only through degree " + std::to_string(rep.certified_degree));
    out.code = kInconclusive;
  }
  return out;
}

struct SeriesArgs {
  std::size_t q = 1;
  int n = 1;
  std::vector<double> phi_t;
  bool asymptotic = false;
  std::vector<double> grid;
  std::uint32_t base = 2;
  double tolerance = 1e-6;
};

Output cmd_series(const RunConfig& c, const SeriesArgs& a) {
  if (a.n < 1) throw InvalidInput("n must be positive");
  const std::uint32_t p = c.characteristic ? c.characteristic : a.base;
  if (p < 2) throw InvalidInput("phi base must be at least 2");
  bool shortened = false;
  TruncatedSeries series = TruncatedSeries::one(0);
  if (c.characteristic == 0) {
    series = sphere_series_char0(a.q, a.n, c.series_order);
  } else {
    auto cs = sphere_series_charp(a.q, a.n, c.characteristic, c.series_order,
                                  c.max_weight.value_or(c.series_order / a.n + 1));
    series = cs.series;
    shortened = cs.shortened;
  }
  Output out;
  out.doc = {{"field", c.characteristic}, {"q", a.q}, {"n", a.n}, {"series", to_json(series)}, {"shortened", shortened}};
  Table coeffs;
  coeffs.title = "theta(" + std::to_string(a.q) + "," + std::to_string(a.n) + ")";
  coeffs.header = {"degree", "coefficient"};
  for (int k = 0; k <= series.order(); ++k) coeffs.rows.push_back({std::to_string(k), std::to_string(series.at(k))});
  out.tables.push_back(coeffs);
  if (series.closed_form()) out.notes.push_back("closed form " + series.closed_form()->describe());
  const int block = std::max(2, a.n);
  if (!a.phi_t.empty()) {
    json rows = json::array();
    Table t;
    t.title = "phi, log base " + std::to_string(p);
    t.header = {"t", "lower", "upper_proxy", "last_share", "stabilized"};
    for (double x : a.phi_t) {
      auto v = phi_eval(series, p, x, block, a.tolerance);
      rows.push_back({{"t", v.t}, {"lower", v.value}, {"upper_proxy", v.upper_proxy}, {"last_share", v.last_share},
                      {"stabilized", v.stabilized}});
      t.rows.push_back({num(v.t), num(v.value), num(v.upper_proxy), num(v.last_share), yes_no(v.stabilized)});
    }
    out.doc["phi"] = rows;
    out.tables.push_back(t);
  }
  if (a.asymptotic) {
    auto rep = asymptotic_check(series, a.q, a.n, p, a.grid, a.tolerance);
    json rows = json::array();
    Table t;
    t.title = "phi / (q t^(n-1)/(n-1)!)";
    t.header = {"t", "phi", "reference", "ratio", "stabilized"};
    for (const auto& r : rep.rows) {
      rows.push_back({{"t", r.phi.t}, {"phi", r.phi.value}, {"reference", r.reference}, {"ratio", r.ratio},
                      {"stabilized", r.phi.stabilized}});
      t.rows.push_back({num(r.phi.t), num(r.phi.value), num(r.reference), num(r.ratio), yes_no(r.phi.stabilized)});
    }
    out.doc["asymptotic"] = {{"rows", rows},
                             {"trusted_rows", rep.trusted_rows},
                             {"monotone_toward_one", rep.monotone_toward_one},
                             {"inconclusive", rep.inconclusive}};
    out.tables.push_back(t);
    out.notes.push_back("trusted rows " + std::to_string(rep.trusted_rows) + ", monotone toward 1: " +
                        yes_no(rep.monotone_toward_one));
    if (rep.inconclusive) {
      out.notes.push_back("later rows are truncation-limited; raise the series order");
      out.code = kInconclusive;
    }
  }
  if (shortened) {
    out.notes.push_back("weight bound too small: series stable only through degree " + std::to_string(series.order()));
    out.code = kInconclusive;
  }
  return out;
}

struct AuditArgs {
  std::string profile;
  std::optional<std::uint64_t> pi_bound;
  std::string mode = "asymptotic";
  AuditOptions options;
};

Output cmd_audit(const RunConfig& c, AuditArgs a) {
  EnvelopeProfile profile(c.field(), parse_profile(a.profile), a.pi_bound);
  if (a.mode == "asymptotic")
    a.options.mode = AuditMode::kAsymptotic;
  else if (a.mode == "empirical")
    a.options.mode = AuditMode::kEmpirical;
  else
    throw InvalidInput("mode must be asymptotic or empirical");
  a.options.bounds = SeriesBounds{c.series_order, c.max_weight.value_or(4)};
  auto v = serre_audit(profile, a.options);
  Output out;
  out.doc = to_json(v);
  out.doc["profile"] = to_json(profile);
  Table t;
  t.title = "audit (" + a.mode + "): " + to_string(v.outcome);
  t.header = {"t", "lhs", "rhs", "usable"};
  for (const auto& r : v.table) t.rows.push_back({num(r.t), num(r.lhs), num(r.rhs), yes_no(r.usable)});
  out.tables.push_back(t);
  out.notes.push_back("outcome " + to_string(v.outcome));
  if (v.witness) out.notes.push_back("witness t* = " + exact(*v.witness));
  for (const auto& line : v.trace) out.notes.push_back("  " + line);
  if (v.outcome == AuditOutcome::kInconclusive) out.code = kInconclusive;
  return out;
}

Output cmd_rational_check(const RunConfig& c, const std::string& text, bool pi_finite) {
  EnvelopeProfile profile(c.field(), parse_profile(text), std::nullopt);
  auto v = rational_check(profile, pi_finite);
  Output out;
  out.doc = to_json(v);
  out.doc["profile"] = to_json(profile);
  out.doc["pi_finite"] = pi_finite;
  Table t;
  t.header = {"outcome", "reason"};
  t.rows.push_back({to_string(v.outcome), v.reason});
  out.tables.push_back(t);
  for (const auto& line : v.trace) out.notes.push_back("  " + line);
  return out;
}

// Randomized agreement checks on small objects: the normalized and
// unnormalized complexes must agree, Dold-Kan images of cell complexes must
// have the homology of their cells, and series products must match their
// closed forms.
Output cmd_selfcheck(const RunConfig& c, int count) {
  if (count < 1) throw InvalidInput("count must be positive");
  std::mt19937_64 rng(c.seed);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  const std::uint32_t primes[] = {0, 2, 3, 5};
  std::size_t dual = 0, cells = 0, series = 0;
  std::vector<std::string> failures;
  for (int it = 0; it < count; ++it) {
    FieldSpec f(primes[rng() % 4]);
    const int T = pick(2, 4);
    // Spheres in random degrees plus disks whose boundary has a random unit.
    std::vector<int> deg;
    std::vector<std::vector<std::pair<std::size_t, long>>> bd;
    std::vector<std::size_t> expected(static_cast<std::size_t>(T), 0);
    for (int k = pick(1, 3); k > 0; --k) {
      const int d = pick(0, T - 1);
      deg.push_back(d);
      bd.push_back({});
      ++expected[static_cast<std::size_t>(d)];
    }
    for (int k = pick(0, 2); k > 0; --k) {
      const int d = pick(1, T - 1);
      deg.push_back(d - 1);
      bd.push_back({});
      deg.push_back(d);
      long u = pick(1, 4);
      if (f.characteristic() && u % static_cast<long>(f.characteristic()) == 0) u = 1;
      bd.push_back({{deg.size() - 2, u}});
    }
    SimplicialVectorSpace v = dold_kan(f, deg, bd, T);
    if (rng() % 3 == 0) v = symmetric_power(v, 2);
    auto a = homotopy_dims(v);
    auto b = homotopy_dims_unnormalized(v);
    ++dual;
    if (!(a.dims == b.dims)) failures.push_back("dual oracle disagrees on object " + std::to_string(it));
    auto h = homotopy_dims(dold_kan(f, deg, bd, T));
    ++cells;
    std::vector<std::size_t> got(static_cast<std::size_t>(T), 0);
    for (int k = 0; k < T; ++k) got[static_cast<std::size_t>(k)] = h.dims.at(static_cast<std::size_t>(k));
    if (got != expected) failures.push_back("cell homology wrong on object " + std::to_string(it));

    const std::size_t q1 = static_cast<std::size_t>(pick(0, 2)), q2 = static_cast<std::size_t>(pick(0, 2));
    const int n1 = pick(1, 4), n2 = pick(1, 4), order = pick(4, 12);
    auto s1 = sphere_series_char0(q1, n1, order), s2 = sphere_series_char0(q2, n2, order);
    auto prod = mul(s1, s2);
    ++series;
    if (!(prod == mul(s2, s1)) || !prod.closed_form() ||
        !(TruncatedSeries::from_closed_form(*prod.closed_form(), order) == prod))
      failures.push_back("series product check failed on pair " + std::to_string(it));
  }
  Output out;
  out.doc = {{"seed", c.seed},
             {"count", count},
             {"checks", {{"dual_oracle", dual}, {"cell_homology", cells}, {"series_products", series}}},
             {"failures", failures}};
  Table t;
  t.header = {"check", "runs"};
  t.rows = {{"dual_oracle", std::to_string(dual)},
            {"cell_homology", std::to_string(cells)},
            {"series_products", std::to_string(series)}};
  out.tables.push_back(t);
  out.notes.push_back(failures.empty() ? "all checks passed" : std::to_string(failures.size()) + " failures");
  for (const auto& fl : failures) out.notes.push_back("  " + fl);
  if (!failures.empty()) out.code = kInternal;
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double x = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(x);
    } catch (const std::exception&) {
      throw InvalidInput("not a number: '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale toolkit for simplicial commutative algebras over a field"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file supplying defaults for the options below");

  RunConfig cfg;
  app.add_option("--char", cfg.characteristic, "field characteristic (0 or a prime)");
  app.add_option("-T,--truncation", cfg.truncation, "top degree / simplicial level bound");
  app.add_option("-W,--weight", cfg.max_weight, "weight bound (default depends on the subcommand)");
  app.add_option("-N,--bar-bound", cfg.bar_bound, "number of bar factors for cofibers");
  app.add_option("-M,--series-order", cfg.series_order, "series truncation order");
  app.add_option("--output", cfg.output, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--seed", cfg.seed, "seed for selfcheck");

  std::size_t q = 1;
  int n = 1;
  auto* pi = app.add_subcommand("pi-sphere", "homotopy of the free algebra S(V, n)");
  pi->add_option("-q", q, "dim V");
  pi->add_option("-n", n, "sphere degree")->required();

  auto* hq = app.add_subcommand("hq-sphere", "homotopy of the indecomposables of S(V, n)");
  hq->add_option("-q", q, "dim V");
  hq->add_option("-n", n, "sphere degree")->required();

  bool dump = false;
  auto* em = app.add_subcommand("em", "Eilenberg-MacLane object K(V, n)");
  em->add_option("-q", q, "dim V");
  em->add_option("-n", n, "degree")->required();
  em->add_flag("--dump", dump, "print the object as JSON instead of its homotopy");

  std::string input;
  auto* hom = app.add_subcommand("homotopy", "homotopy of a simplicial vector space given as JSON");
  hom->add_option("-i,--input", input, "JSON file (as written by em --dump)")->required();

  int power = 1;
  bool zero = false;
  auto* cof = app.add_subcommand("cofiber", "cofiber of S(n*s) -> S(n) representing x^s");
  cof->add_option("-n", n, "target sphere degree")->required();
  cof->add_option("-s,--power", power, "power s of the fundamental class");
  cof->add_flag("--zero", zero, "use the zero map S(n) -> S(n) instead");

  int r = 1, s = 1;
  auto* rex = app.add_subcommand("rational-example", "pi_* and H^Q tables of the rational algebras A<r,s>");
  rex->add_option("-r", r, "half the target degree")->required();
  rex->add_option("-s", s, "power")->required();

  SeriesArgs sa;
  std::string phi_text, grid_text = "0.05,0.1,0.2,0.4,0.8,1.6,3.2,6.4,12.8";
  auto* ser = app.add_subcommand("series", "Poincare series of S(V, n) and its phi transform");
  ser->add_option("-q", sa.q, "dim V");
  ser->add_option("-n", sa.n, "sphere degree")->required();
  ser->add_option("--phi", phi_text, "comma-separated t values");
  ser->add_flag("--asymptotic", sa.asymptotic, "compare phi with q t^(n-1)/(n-1)!");
  ser->add_option("--grid", grid_text, "t grid for --asymptotic");
  ser->add_option("--base", sa.base, "log base p for phi in characteristic 0");
  ser->add_option("--tolerance", sa.tolerance, "tail share below which phi counts as stabilized");

  AuditArgs aa;
  std::string samples_text;
  auto* aud = app.add_subcommand("audit", "numeric contradiction for finite pi in characteristic p");
  aud->add_option("--profile", aa.profile, "dims of H^Q as degree:dim,...")->required();
  aud->add_option("--pi-bound", aa.pi_bound, "bound D on the Poincare series of pi");
  aud->add_option("--mode", aa.mode, "asymptotic or empirical")->check(CLI::IsMember({"asymptotic", "empirical"}));
  aud->add_option("--t-start", aa.options.t_start, "first grid point of the witness scan");
  aud->add_option("--growth", aa.options.growth, "grid ratio of the witness scan");
  aud->add_option("--max-steps", aa.options.max_steps, "grid points of the witness scan");
  aud->add_option("--t-samples", samples_text, "comma-separated t values for empirical mode");
  aud->add_option("--tolerance", aa.options.tolerance, "phi stabilization tolerance for empirical mode");

  std::string rprofile;
  bool pi_finite = false;
  auto* rc = app.add_subcommand("rational-check", "characteristic-0 even-profile vanishing check");
  rc->add_option("--profile", rprofile, "dims of H^Q as degree:dim,...")->required();
  rc->add_flag("--pi-finite", pi_finite, "assert that pi_* is finite");

  int count = 60;
  auto* self = app.add_subcommand("selfcheck", "randomized agreement checks on small objects");
  self->add_option("--count", count, "number of random objects");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    cfg.validate();
    Output out;
    if (*pi) out = cmd_pi_sphere(cfg, q, n);
    else if (*hq) out = cmd_hq_sphere(cfg, q, n);
    else if (*em) out = cmd_em(cfg, q, n, dump);
    else if (*hom) out = cmd_homotopy(input);
    else if (*cof) out = cmd_cofiber(cfg, n, power, zero);
    else if (*rex) out = cmd_rational_example(cfg, r, s);
    else if (*ser) {
      if (!phi_text.empty()) sa.phi_t = parse_doubles(phi_text);
      sa.grid = parse_doubles(grid_text);
      out = cmd_series(cfg, sa);
    } else if (*aud) {
      if (!samples_text.empty()) aa.options.t_samples = parse_doubles(samples_text);
      out = cmd_audit(cfg, aa);
    } else if (*rc) out = cmd_rational_check(cfg, rprofile, pi_finite);
    else if (*self) out = cmd_selfcheck(cfg, count);

    if (cfg.output == "json" || dump)
      std::cout << out.doc.dump(2) << "\n";
    else if (cfg.output == "csv")
      std::cout << render_csv(out);
    else
      std::cout << render_table(out);
    return out.code;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const Inconclusive& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
