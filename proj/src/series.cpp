#include "aqlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aqlab/error.hpp"
#include "aqlab/symalg.hpp"

namespace aqlab {

namespace {

std::uint64_t add_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw InvariantViolation("series coefficient overflow");
  return r;
}

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw InvariantViolation("series coefficient overflow");
  return r;
}

void check_order(int order) {
  if (order < 0) throw InvalidInput("series truncation must be nonnegative");
}

}  // namespace

std::string ClosedForm::describe() const {
  std::ostringstream out;
  bool first = true;
  auto sep = [&] {
    if (!first) out << '*';
    first = false;
  };
  for (auto [a, e] : poles) {
    sep();
    out << "(1-t^" << a << ")^-" << e;
  }
  for (auto [b, e] : factors) {
    sep();
    out << "(1+t^" << b << ")^" << e;
  }
  if (first) out << '1';
  return out.str();
}

std::vector<std::uint64_t> ClosedForm::expand(int order) const {
  check_order(order);
  const auto len = static_cast<std::size_t>(order) + 1;
  std::vector<std::uint64_t> c(len, 0);
  c[0] = 1;
  for (auto [a, e] : poles) {
    if (a <= 0 || e < 0) throw InvalidInput("closed form: bad pole");
    const auto ua = static_cast<std::size_t>(a);
    for (int k = 0; k < e; ++k)
      for (std::size_t i = ua; i < len; ++i) c[i] = add_checked(c[i], c[i - ua]);
  }
  for (auto [b, e] : factors) {
    if (b <= 0 || e < 0) throw InvalidInput("closed form: bad factor");
    const auto ub = static_cast<std::size_t>(b);
    for (int k = 0; k < e; ++k)
      for (std::size_t i = len; i-- > ub;) c[i] = add_checked(c[i], c[i - ub]);
  }
  return c;
}

ClosedForm ClosedForm::times(const ClosedForm& other) const {
  ClosedForm r = *this;
  r.poles.insert(r.poles.end(), other.poles.begin(), other.poles.end());
  r.factors.insert(r.factors.end(), other.factors.begin(), other.factors.end());
  return r;
}

// ---------------------------------------------------------------------------

TruncatedSeries::TruncatedSeries(std::vector<std::uint64_t> coeffs, std::optional<ClosedForm> closed_form)
    : coeffs_(std::move(coeffs)), closed_form_(std::move(closed_form)) {
  if (coeffs_.empty()) throw InvalidInput("series needs at least one coefficient");
  if (closed_form_ && closed_form_->expand(order()) != coeffs_)
    throw InvariantViolation("closed form does not reproduce the coefficients");
}

TruncatedSeries TruncatedSeries::one(int order) {
  check_order(order);
  std::vector<std::uint64_t> c(static_cast<std::size_t>(order) + 1, 0);
  c[0] = 1;
  return TruncatedSeries(std::move(c), ClosedForm{});
}

TruncatedSeries TruncatedSeries::from_closed_form(const ClosedForm& form, int order) {
  return TruncatedSeries(form.expand(order), form);
}

TruncatedSeries TruncatedSeries::from_dims(const GradedDims& dims, int order) {
  check_order(order);
  std::vector<std::uint64_t> c(static_cast<std::size_t>(order) + 1, 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = dims.at(i);
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
  check_order(order);
  if (order >= this->order()) return *this;
  std::vector<std::uint64_t> c(coeffs_.begin(), coeffs_.begin() + order + 1);
  return TruncatedSeries(std::move(c), closed_form_);
}

TruncatedSeries mul(const TruncatedSeries& f, const TruncatedSeries& g) {
  const int m = std::min(f.order(), g.order());
  std::vector<std::uint64_t> c(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; i + j <= m; ++j)
      c[static_cast<std::size_t>(i + j)] = add_checked(c[static_cast<std::size_t>(i + j)], mul_checked(f.at(i), g.at(j)));
  std::optional<ClosedForm> form;
  if (f.closed_form() && g.closed_form()) form = f.closed_form()->times(*g.closed_form());
  return TruncatedSeries(std::move(c), std::move(form));
}

LeqResult leq(const TruncatedSeries& f, const TruncatedSeries& g) {
  LeqResult r;
  r.compared_through = std::min(f.order(), g.order());
  for (int i = 0; i <= r.compared_through; ++i)
    if (f.at(i) > g.at(i)) {
      r.holds = false;
      r.first_violation = i;
      break;
    }
  return r;
}

TruncatedSeries sphere_series_char0(std::size_t q, int n, int order) {
  if (n < 1) throw InvalidInput("sphere degree must be positive");
  ClosedForm form;
  if (q > 0) {
    if (n % 2 == 0)
      form.poles.emplace_back(n, static_cast<int>(q));
    else
      form.factors.emplace_back(n, static_cast<int>(q));
  }
  return TruncatedSeries::from_closed_form(form, order);
}

CharpSeries sphere_series_charp(std::size_t q, int n, std::uint32_t p, int order, int max_weight) {
  check_order(order);
  if (!is_prime(p)) throw InvalidInput("characteristic must be prime");
  if (n < 1) throw InvalidInput("sphere degree must be positive");
  CharpSeries out;
  out.requested = order;
  if (q == 0) {
    out.series = TruncatedSeries::one(order);
    return out;
  }
  const int top = std::max(order, n);
  HomotopyReport rep = sphere_homotopy(FieldSpec(p), q, n, top, max_weight);
  const int reach = std::min(order, rep.stable_through());
  if (reach < 0) throw Inconclusive("no weight-stable degree at this weight bound");
  out.shortened = reach < order;
  out.series = TruncatedSeries::from_dims(rep.dims, reach);
  return out;
}

// ---------------------------------------------------------------------------

PhiValue phi_eval(const TruncatedSeries& series, std::uint32_t p, double t, int block, double tolerance) {
  if (!(t > 0)) throw InvalidInput("phi needs t > 0");
  if (p < 2) throw InvalidInput("phi needs p >= 2");
  block = std::clamp(block, 1, series.order() + 1);
  const double x = -std::expm1(-t * std::log(static_cast<double>(p)));
  const double lp = std::log(static_cast<double>(p));
  const int m = series.order();
  double sum = 0, tail = 0, pw = 1;
  std::uint64_t last_max = 0;
  for (int i = 0; i <= m; ++i) {
    const double term = static_cast<double>(series.at(i)) * pw;
    sum += term;
    if (i > m - block) {
      tail += term;
      last_max = std::max(last_max, series.at(i));
    }
    pw *= x;
  }
  PhiValue v;
  v.t = t;
  v.value = std::log(sum) / lp;
  // pw == x^(m+1); continue with the largest recent coefficient.
  v.upper_proxy = std::log(sum + static_cast<double>(last_max) * pw / (1 - x)) / lp;
  v.last_share = tail / sum;
  v.stabilized = v.last_share < tolerance;
  return v;
}

AsymptoticReport asymptotic_check(const TruncatedSeries& series, std::size_t q, int n, std::uint32_t p,
                                  const std::vector<double>& t_samples, double tolerance) {
  if (n < 1) throw InvalidInput("sphere degree must be positive");
  AsymptoticReport r;
  double fact = 1;
  for (int i = 2; i <= n - 1; ++i) fact *= i;
  std::vector<double> ts = t_samples;
  std::sort(ts.begin(), ts.end());
  bool trusted = true;
  double prev_gap = INFINITY;
  for (double t : ts) {
    AsymptoticRow row;
    row.phi = phi_eval(series, p, t, std::max(2, n), tolerance);
    row.reference = static_cast<double>(q) * std::pow(t, n - 1) / fact;
    row.ratio = row.reference > 0 ? row.phi.value / row.reference : NAN;
    trusted = trusted && row.phi.stabilized;
    if (trusted) {
      ++r.trusted_rows;
      const double gap = std::fabs(row.ratio - 1);
      if (!(gap <= prev_gap)) r.monotone_toward_one = false;
      prev_gap = gap;
    } else {
      r.inconclusive = true;
    }
    r.rows.push_back(row);
  }
  return r;
}

nlohmann::json to_json(const TruncatedSeries& s) {
  nlohmann::json j;
  j["coeffs"] = s.coeffs();
  j["truncation"] = s.order();
  if (s.closed_form()) {
    nlohmann::json cf;
    cf["text"] = s.closed_form()->describe();
    cf["poles"] = s.closed_form()->poles;
    cf["factors"] = s.closed_form()->factors;
    j["closed_form"] = std::move(cf);
  }
  return j;
}

std::string to_csv(const AsymptoticReport& r) {
  std::string out = "t,phi,reference,ratio,stabilized\n";
  char buf[160];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.9g,%.9g,%.9g,%s\n", row.phi.t, row.phi.value, row.reference, row.ratio,
                  row.phi.stabilized ? "true" : "false");
    out += buf;
  }
  return out;
}

}  // namespace aqlab
