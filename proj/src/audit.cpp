#include "aqlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aqlab/error.hpp"

namespace aqlab {

EnvelopeProfile::EnvelopeProfile(FieldSpec field, std::map<int, std::size_t> dims,
                                 std::optional<std::uint64_t> pi_bound)
    : field_(field), dims_(std::move(dims)), pi_bound_(pi_bound) {
  for (const auto& [s, q] : dims_)
    if (s < 1) throw InvalidInput("profile degrees start at 1");
  if (!dims_.empty()) {
    top_ = dims_.rbegin()->first;
    if (dims_.rbegin()->second == 0) throw InvalidInput("the top recorded degree must have a nonzero entry");
  }
  if (pi_bound_) {
    const std::uint64_t p = field_.characteristic();
    if (*pi_bound_ <= p || *pi_bound_ == 0)
      throw InvalidInput("pi bound D must exceed the characteristic (and be positive)");
  }
}

std::size_t EnvelopeProfile::q(int s) const {
  auto it = dims_.find(s);
  return it == dims_.end() ? 0 : it->second;
}

std::map<int, std::size_t> parse_profile(const std::string& text) {
  std::map<int, std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidInput("profile entries look like degree:dim, got '" + item + "'");
    try {
      std::size_t used = 0;
      const int s = std::stoi(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("degree");
      const std::string rest = item.substr(colon + 1);
      const long q = std::stol(rest, &used);
      if (used != rest.size() || q < 0) throw std::invalid_argument("dim");
      if (!out.emplace(s, static_cast<std::size_t>(q)).second) throw InvalidInput("degree repeated in profile");
    } catch (const std::logic_error&) {
      throw InvalidInput("bad profile entry '" + item + "'");
    }
  }
  return out;
}

nlohmann::json to_json(const EnvelopeProfile& p) {
  nlohmann::json j;
  j["field"] = p.field().characteristic();
  nlohmann::json dims = nlohmann::json::object();
  for (const auto& [s, q] : p.dims()) dims[std::to_string(s)] = q;
  j["dims"] = std::move(dims);
  j["top"] = p.top();
  if (p.pi_bound())
    j["pi_bound"] = *p.pi_bound();
  else
    j["pi_bound"] = "unbounded";
  return j;
}

TruncatedSeries sphere_series(const FieldSpec& field, std::size_t q, int n, const SeriesBounds& bounds) {
  if (q == 0) return TruncatedSeries::one(bounds.order);
  if (field.is_rational()) return sphere_series_char0(q, n, bounds.order);
  return sphere_series_charp(q, n, field.characteristic(), bounds.order, bounds.max_weight).series;
}

// ---------------------------------------------------------------------------

namespace {

std::string theta(std::size_t q, int n) {
  return "theta(" + std::to_string(q) + "," + std::to_string(n) + ")";
}

TruncatedSeries product(const std::vector<TruncatedSeries>& fs, int order) {
  TruncatedSeries acc = TruncatedSeries::one(order);
  for (const auto& f : fs) acc = mul(acc, f.truncated(order));
  return acc;
}

}  // namespace

EnvelopeChain envelope_chain(const EnvelopeProfile& profile, const SeriesBounds& bounds) {
  EnvelopeChain chain;
  const int n = profile.top();
  chain.order = bounds.order;
  if (n <= 1) return chain;
  const FieldSpec& f = profile.field();
  std::map<std::pair<int, int>, TruncatedSeries> cache;  // (s, sphere degree)
  auto get = [&](int s, int k) -> const TruncatedSeries& {
    auto key = std::make_pair(s, k);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, sphere_series(f, profile.q(s), k, bounds)).first;
    return it->second;
  };
  for (int s = 1; s <= n; ++s) chain.order = std::min(chain.order, get(s, s).order());
  for (int s = 1; s <= n - 2; ++s) chain.order = std::min(chain.order, get(s, s + 1).order());
  if (chain.order < 0) throw Inconclusive("no certified degree to compare");
  const int m = chain.order;

  auto envelope = [&](int j) {
    std::vector<TruncatedSeries> fs;
    for (int s = j + 1; s <= n; ++s) fs.push_back(get(s, s));
    return product(fs, m);
  };
  auto envelope_text = [&](int j) {
    std::string t;
    for (int s = j + 1; s <= n; ++s) t += (t.empty() ? "" : "*") + theta(profile.q(s), s);
    return t.empty() ? std::string("1") : t;
  };
  for (int s = 1; s <= n - 2; ++s) {
    ChainInequality c;
    c.stage = s;
    c.lhs = envelope(s);
    c.rhs = mul(envelope(s - 1), get(s, s + 1).truncated(m));
    c.lhs_text = "theta(A(" + std::to_string(s) + ")) = " + envelope_text(s);
    c.rhs_text = "theta(A(" + std::to_string(s - 1) + "))*theta(H^Q_" + std::to_string(s) + "," + std::to_string(s + 1) +
                 ") = " + envelope_text(s - 1) + "*" + theta(profile.q(s), s + 1);
    c.check = leq(c.lhs, c.rhs);
    chain.stages.push_back(std::move(c));
  }
  ChainInequality it;
  it.stage = 0;
  it.lhs = envelope(n - 2);
  std::vector<TruncatedSeries> fs{envelope(0)};
  std::string rhs_text = "theta(A) = " + envelope_text(0);
  for (int s = 1; s <= n - 2; ++s) {
    fs.push_back(get(s, s + 1));
    rhs_text += "*" + theta(profile.q(s), s + 1);
  }
  it.rhs = product(fs, m);
  it.lhs_text = "theta(A(" + std::to_string(n - 2) + ")) = " + envelope_text(n - 2);
  it.rhs_text = rhs_text;
  it.check = leq(it.lhs, it.rhs);
  chain.iterated = std::move(it);
  return chain;
}

TruncatedSeries splitting_series(const EnvelopeProfile& profile, const SeriesBounds& bounds) {
  const int n = profile.top();
  if (n < 2) throw InvalidInput("splitting needs top degree at least 2");
  const auto a = sphere_series(profile.field(), profile.q(n - 1), n - 1, bounds);
  const auto b = sphere_series(profile.field(), profile.q(n), n, bounds);
  return mul(a, b);
}

// ---------------------------------------------------------------------------

std::string to_string(AuditOutcome o) {
  switch (o) {
    case AuditOutcome::kConsistent:
      return "consistent";
    case AuditOutcome::kContradiction:
      return "contradiction";
    case AuditOutcome::kInconclusive:
      return "inconclusive";
  }
  return "";
}

namespace {

double eval(const std::vector<double>& poly, double t) {
  double v = 0;
  for (std::size_t i = poly.size(); i-- > 0;) v = v * t + poly[i];
  return v;
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string poly_text(const std::vector<double>& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    if (!out.empty()) out += " + ";
    out += fmt(p[i]);
    if (i >= 1) out += "*t";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

bool AuditVerdict::verify() const {
  if (!witness) return outcome != AuditOutcome::kContradiction;
  if (mode == AuditMode::kAsymptotic) return eval(lhs_poly, *witness) > eval(rhs_poly, *witness);
  for (const auto& row : table)
    if (row.t == *witness) return row.usable && row.lhs > row.rhs;
  return false;
}

AuditVerdict serre_audit(const EnvelopeProfile& profile, const AuditOptions& options) {
  const FieldSpec& field = profile.field();
  if (field.is_rational())
    throw InvalidInput("the audit needs positive characteristic; use rational_check in characteristic 0");
  if (!profile.pi_bound()) throw InvalidInput("the audit needs a finite bound D on theta(A)");
  if (!(options.t_start > 0) || !(options.growth > 1) || options.max_steps < 1)
    throw InvalidInput("bad witness scan parameters");
  const std::uint64_t p = field.characteristic();
  const std::uint64_t big_d = *profile.pi_bound();
  AuditVerdict v;
  v.mode = options.mode;
  v.n = profile.top();
  {
    // Smallest d with p^d >= D.
    unsigned __int128 pw = 1;
    while (pw < big_d) {
      pw *= p;
      ++v.d;
    }
  }
  const int n = v.n;
  v.trace.push_back("profile " + to_json(profile).dump() + ", d = ceil(log_p D) = " + std::to_string(v.d));
  if (n <= 1) {
    v.outcome = AuditOutcome::kConsistent;
    v.trace.push_back("top degree n = " + std::to_string(n) + " <= 1: no envelope stages, nothing to contradict");
    return v;
  }
  for (int s = 1; s <= n - 2; ++s)
    v.trace.push_back("stage " + std::to_string(s) + ": theta(A(" + std::to_string(s) + ")) <= theta(A(" +
                      std::to_string(s - 1) + "))*theta(H^Q_" + std::to_string(s) + "," + std::to_string(s + 1) + ")");
  v.trace.push_back("iterated: theta(A(" + std::to_string(n - 2) + ")) <= theta(A)*prod_{s=1}^{" + std::to_string(n - 2) +
                    "} theta(H^Q_s,s+1) <= D*prod theta(H^Q_s,s+1)");
  v.trace.push_back("split top: theta(A(" + std::to_string(n - 2) + ")) = theta(H^Q_" + std::to_string(n - 1) + "," +
                    std::to_string(n - 1) + ")*theta(H^Q_" + std::to_string(n) + "," + std::to_string(n) + ")");
  v.trace.push_back("phi form: phi(H^Q_{n-1},n-1,t) + phi(H^Q_n,n,t) <= d + sum_{s=1}^{n-2} phi(H^Q_s,s+1,t)");

  if (options.mode == AuditMode::kAsymptotic) {
    v.a = static_cast<double>(profile.q(n - 1)) / factorial(n - 2);
    v.b = static_cast<double>(profile.q(n)) / factorial(n - 1);
    v.lhs_poly.assign(static_cast<std::size_t>(n), 0.0);
    v.lhs_poly[static_cast<std::size_t>(n - 2)] += v.a;
    v.lhs_poly[static_cast<std::size_t>(n - 1)] += v.b;
    v.rhs_poly.assign(static_cast<std::size_t>(std::max(1, n - 1)), 0.0);
    v.rhs_poly[0] = static_cast<double>(v.d);
    for (int s = 1; s <= n - 2; ++s)
      v.rhs_poly[static_cast<std::size_t>(s)] += static_cast<double>(profile.q(s)) / factorial(s);
    v.trace.push_back("leading terms phi(q,m,t) ~ q t^(m-1)/(m-1)!: a = q_{n-1}/(n-2)! = " + fmt(v.a) +
                      ", b = q_n/(n-1)! = " + fmt(v.b));
    v.trace.push_back("lhs(t) = " + poly_text(v.lhs_poly) + "; rhs(t) = d + f(t) = " + poly_text(v.rhs_poly));

    std::vector<double> g(static_cast<std::size_t>(n), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = v.lhs_poly[i] - (i < v.rhs_poly.size() ? v.rhs_poly[i] : 0.0);
    const double lead = g.back();  // b > 0 by the profile invariant
    double cauchy = 0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) cauchy = std::max(cauchy, std::fabs(g[i]) / lead);
    v.holds_beyond = 1 + cauchy;
    v.trace.push_back("lhs - rhs has positive leading coefficient " + fmt(lead) + "; positive for all t > " +
                      fmt(*v.holds_beyond));

    // Scan until past the Cauchy bound; remember the last nonpositive point.
    double t = options.t_start;
    double last_bad = -1;  // -1: none
    double first_good = -1;
    for (int k = 0; k < options.max_steps; ++k) {
      const double diff = eval(g, t);
      v.table.push_back({t, eval(v.lhs_poly, t), eval(v.rhs_poly, t), true});
      if (diff <= 0) {
        last_bad = t;
        first_good = -1;
      } else if (first_good < 0) {
        first_good = t;
      }
      if (t > *v.holds_beyond && first_good > 0) break;
      t *= options.growth;
    }
    if (first_good < 0) {
      v.outcome = AuditOutcome::kInconclusive;
      v.trace.push_back("scan ended before lhs exceeded rhs");
      return v;
    }
    double hi = first_good;
    if (last_bad > 0) {
      double lo = last_bad;
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eval(g, mid) > 0)
          hi = mid;
        else
          lo = mid;
      }
    }
    v.witness = hi;
  } else {
    const SeriesBounds& sb = options.bounds;
    auto lhs1 = sphere_series(field, profile.q(n - 1), n - 1, sb);
    auto lhs2 = sphere_series(field, profile.q(n), n, sb);
    std::vector<TruncatedSeries> rhs;
    for (int s = 1; s <= n - 2; ++s) rhs.push_back(sphere_series(field, profile.q(s), s + 1, sb));
    v.trace.push_back("empirical: lhs uses partial-sum lower bounds, rhs uses upper proxies; series orders " +
                      std::to_string(lhs1.order()) + ", " + std::to_string(lhs2.order()));
    std::vector<double> ts = options.t_samples;
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
      AuditRow row;
      row.t = t;
      row.lhs = phi_eval(lhs1, static_cast<std::uint32_t>(p), t, std::max(2, n - 1), options.tolerance).value +
                phi_eval(lhs2, static_cast<std::uint32_t>(p), t, std::max(2, n), options.tolerance).value;
      row.rhs = static_cast<double>(v.d);
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        auto ph = phi_eval(rhs[i], static_cast<std::uint32_t>(p), t, static_cast<int>(i) + 2, options.tolerance);
        row.rhs += ph.upper_proxy;
        row.usable = row.usable && ph.stabilized;
      }
      v.table.push_back(row);
      if (!v.witness && row.usable && row.lhs > row.rhs) v.witness = t;
    }
    if (!v.witness) {
      v.outcome = AuditOutcome::kInconclusive;
      v.trace.push_back("inconclusive at current truncation: no sample with certified lhs above the rhs proxy");
      return v;
    }
  }
  v.outcome = AuditOutcome::kContradiction;
  if (!v.verify()) throw InvariantViolation("audit witness does not re-verify");
  v.trace.push_back("witness t* = " + fmt(*v.witness) + " re-verified: lhs > rhs");
  return v;
}

nlohmann::json to_json(const AuditVerdict& v) {
  nlohmann::json j;
  j["outcome"] = to_string(v.outcome);
  j["mode"] = v.mode == AuditMode::kAsymptotic ? "asymptotic" : "empirical";
  j["n"] = v.n;
  j["d"] = v.d;
  if (v.mode == AuditMode::kAsymptotic && !v.lhs_poly.empty()) {
    j["a"] = v.a;
    j["b"] = v.b;
    j["lhs_poly"] = v.lhs_poly;
    j["rhs_poly"] = v.rhs_poly;
  }
  j["witness"] = v.witness ? nlohmann::json(*v.witness) : nlohmann::json(nullptr);
  if (v.holds_beyond) j["holds_beyond"] = *v.holds_beyond;
  nlohmann::json table = nlohmann::json::array();
  for (const auto& r : v.table) table.push_back({{"t", r.t}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"usable", r.usable}});
  j["table"] = std::move(table);
  j["trace"] = v.trace;
  return j;
}

// ---------------------------------------------------------------------------

std::string to_string(RationalOutcome o) {
  switch (o) {
    case RationalOutcome::kConsistent:
      return "consistent";
    case RationalOutcome::kForcedEmpty:
      return "forced-empty";
    case RationalOutcome::kNotApplicable:
      return "not-applicable";
  }
  return "";
}

RationalVerdict rational_check(const EnvelopeProfile& profile, bool pi_finite) {
  if (!profile.field().is_rational()) throw InvalidInput("rational_check is for characteristic 0");
  RationalVerdict v;
  if (profile.empty()) {
    v.outcome = RationalOutcome::kConsistent;
    v.reason = "empty profile: the trivial algebra";
    return v;
  }
  std::vector<int> odd;
  for (const auto& [s, q] : profile.dims())
    if (q > 0 && s % 2 == 1) odd.push_back(s);
  if (!odd.empty()) {
    v.outcome = RationalOutcome::kNotApplicable;
    v.reason = "odd-degree H^Q present (degree " + std::to_string(odd.front()) + "); the vanishing statement needs H^Q_odd = 0";
    v.trace.push_back("example family: the cofibers A<r,s> have H^Q in degrees 2r and 2rs+1 with finite pi");
    return v;
  }
  if (!pi_finite) {
    v.outcome = RationalOutcome::kNotApplicable;
    v.reason = "pi_* not asserted finite; nothing is forced";
    return v;
  }
  v.outcome = RationalOutcome::kForcedEmpty;
  v.reason = "even-only H^Q with finite pi forces I pi_* A = 0, so the profile must be empty";
  for (const auto& [s, q] : profile.dims()) {
    if (q == 0) continue;
    auto series = sphere_series_char0(q, s, 4 * s);
    std::string coeffs;
    for (int k = 0; k <= 4; ++k) coeffs += (k ? "," : "") + std::to_string(series.at(k * s));
    v.trace.push_back("degree " + std::to_string(s) + ": S(" + std::to_string(q) + "," + std::to_string(s) +
                      ") has theta = " + series.closed_form()->describe() + ", coefficients at multiples of " +
                      std::to_string(s) + ": " + coeffs + ", ... never zero");
  }
  return v;
}

nlohmann::json to_json(const RationalVerdict& v) {
  return {{"outcome", to_string(v.outcome)}, {"reason", v.reason}, {"trace", v.trace}};
}

}  // namespace aqlab
