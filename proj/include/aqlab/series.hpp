#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqlab/simplicial.hpp"

namespace aqlab {

/// prod (1 - t^a)^(-e) * prod (1 + t^b)^e.
struct ClosedForm {
  std::vector<std::pair<int, int>> poles;    // (a, e)
  std::vector<std::pair<int, int>> factors;  // (b, e)

  std::string describe() const;
  /// Coefficients a_0..a_M.
  std::vector<std::uint64_t> expand(int order) const;
  ClosedForm times(const ClosedForm& other) const;
};

/// Integer power series known through t^M. Coefficients are nonnegative;
/// arithmetic throws InvariantViolation on uint64 overflow.
class TruncatedSeries {
 public:
  TruncatedSeries() : coeffs_{1} {}
  explicit TruncatedSeries(std::vector<std::uint64_t> coeffs, std::optional<ClosedForm> closed_form = std::nullopt);

  static TruncatedSeries one(int order);
  static TruncatedSeries from_closed_form(const ClosedForm& form, int order);
  static TruncatedSeries from_dims(const GradedDims& dims, int order);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  std::uint64_t at(int i) const { return i >= 0 && i <= order() ? coeffs_[static_cast<std::size_t>(i)] : 0; }
  const std::optional<ClosedForm>& closed_form() const { return closed_form_; }
  TruncatedSeries truncated(int order) const;

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::vector<std::uint64_t> coeffs_;
  std::optional<ClosedForm> closed_form_;
};

/// Cauchy product through min(M_f, M_g).
TruncatedSeries mul(const TruncatedSeries& f, const TruncatedSeries& g);

struct LeqResult {
  bool holds = true;
  int first_violation = -1;
  int compared_through = -1;
};

/// Coefficientwise f <= g through the common truncation.
LeqResult leq(const TruncatedSeries& f, const TruncatedSeries& g);

/// Rational sphere series: (1 - t^n)^(-q) for even n, (1 + t^n)^q for odd n.
TruncatedSeries sphere_series_char0(std::size_t q, int n, int order);

/// Characteristic-p sphere series from the brute-force homotopy, cut at the
/// last weight-stable degree.
struct CharpSeries {
  TruncatedSeries series;
  int requested = 0;
  bool shortened = false;
};

CharpSeries sphere_series_charp(std::size_t q, int n, std::uint32_t p, int order, int max_weight);

/// log_p of the partial sum of the series at x = 1 - p^(-t).
struct PhiValue {
  double t = 0;
  double value = 0;        // lower bound (nonnegative coefficients)
  double upper_proxy = 0;  // tail continued with the last coefficient
  double last_share = 0;   // share of the partial sum contributed by the last n terms
  bool stabilized = false;
};

PhiValue phi_eval(const TruncatedSeries& series, std::uint32_t p, double t, int block = 1,
                  double tolerance = 1e-9);

struct AsymptoticRow {
  PhiValue phi;
  double reference = 0;  // q t^(n-1) / (n-1)!
  double ratio = 0;
};

struct AsymptoticReport {
  std::vector<AsymptoticRow> rows;
  int trusted_rows = 0;       // leading rows with stabilized partial sums
  bool monotone_toward_one = true;  // over the trusted rows
  bool inconclusive = false;  // some requested sample was not stabilized
};

AsymptoticReport asymptotic_check(const TruncatedSeries& series, std::size_t q, int n, std::uint32_t p,
                                  const std::vector<double>& t_samples, double tolerance = 1e-9);

nlohmann::json to_json(const TruncatedSeries& s);
std::string to_csv(const AsymptoticReport& r);

}  // namespace aqlab
