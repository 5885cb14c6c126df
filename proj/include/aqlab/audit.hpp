#pragma once

// Series bookkeeping for connected envelopes and the numeric contradiction
// behind the characteristic-p finiteness theorem.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqlab/exactfield.hpp"
#include "aqlab/series.hpp"

namespace aqlab {

/// dim H^Q_s(A) for s >= 1 with finite support, and an optional bound D on
/// the Poincare series of pi_* A.
class EnvelopeProfile {
 public:
  /// Throws InvalidInput unless every recorded degree is >= 1, the largest
  /// recorded degree has a nonzero entry, and a finite D exceeds p (or 0).
  EnvelopeProfile(FieldSpec field, std::map<int, std::size_t> dims, std::optional<std::uint64_t> pi_bound);

  const FieldSpec& field() const { return field_; }
  std::size_t q(int s) const;
  int top() const { return top_; }  // 0 for the empty profile
  const std::map<int, std::size_t>& dims() const { return dims_; }
  const std::optional<std::uint64_t>& pi_bound() const { return pi_bound_; }
  bool empty() const { return top_ == 0; }

 private:
  FieldSpec field_;
  std::map<int, std::size_t> dims_;
  int top_ = 0;
  std::optional<std::uint64_t> pi_bound_;
};

/// "2:1,5:1" -> {2: 1, 5: 1}.
std::map<int, std::size_t> parse_profile(const std::string& text);

nlohmann::json to_json(const EnvelopeProfile& p);

/// Where sphere series come from: closed forms in characteristic 0, the
/// weight-stable brute force (weights <= max_weight) in characteristic p.
struct SeriesBounds {
  int order = 8;
  int max_weight = 4;
};

/// theta(q, n, t) for the profile's field.
TruncatedSeries sphere_series(const FieldSpec& field, std::size_t q, int n, const SeriesBounds& bounds);

struct ChainInequality {
  int stage = 0;  // s for theta(A(s)) <= theta(A(s-1)) theta(H^Q_s, s+1); 0 for the iterated form
  std::string lhs_text, rhs_text;
  TruncatedSeries lhs, rhs;
  LeqResult check;
};

struct EnvelopeChain {
  std::vector<ChainInequality> stages;      // s = 1..n-2
  std::optional<ChainInequality> iterated;  // theta(A(n-2)) <= theta(A) prod theta(H^Q_s, s+1), n >= 2
  int order = -1;                           // common truncation of all series
};

/// Instantiated on the split algebra A = (x)_s S(H^Q_s, s), whose envelopes
/// are A(j) = (x)_{s>j} S(H^Q_s, s). Throws Inconclusive when no series
/// reaches degree 0.
EnvelopeChain envelope_chain(const EnvelopeProfile& profile, const SeriesBounds& bounds);

/// theta(H^Q_{n-1}, n-1) theta(H^Q_n, n). Throws InvalidInput for n < 2.
TruncatedSeries splitting_series(const EnvelopeProfile& profile, const SeriesBounds& bounds);

enum class AuditMode { kAsymptotic, kEmpirical };
enum class AuditOutcome { kConsistent, kContradiction, kInconclusive };

std::string to_string(AuditOutcome o);

struct AuditOptions {
  AuditMode mode = AuditMode::kAsymptotic;
  // Witness scan: t_k = t_start * growth^k, k < max_steps, then bisection.
  double t_start = 0.125;
  double growth = 1.25;
  int max_steps = 400;
  // Empirical mode.
  std::vector<double> t_samples{0.5, 1, 2, 3, 4, 6, 8, 12, 16};
  SeriesBounds bounds;
  double tolerance = 1e-6;
};

struct AuditRow {
  double t = 0;
  double lhs = 0;
  double rhs = 0;
  bool usable = true;  // empirical mode: every right-hand series stabilized
};

struct AuditVerdict {
  AuditOutcome outcome = AuditOutcome::kConsistent;
  AuditMode mode = AuditMode::kAsymptotic;
  int n = 0;
  std::uint64_t d = 0;  // ceil(log_p D)
  // Asymptotic mode: lhs(t) = a t^(n-2) + b t^(n-1), rhs(t) = d + f(t),
  // polynomials as coefficient vectors in t.
  double a = 0, b = 0;
  std::vector<double> lhs_poly, rhs_poly;
  std::optional<double> witness;
  std::optional<double> holds_beyond;  // lhs > rhs for every t beyond this
  std::vector<AuditRow> table;
  std::vector<std::string> trace;

  /// Re-evaluates both sides at the witness.
  bool verify() const;
};

/// Throws InvalidInput in characteristic 0 or without a finite bound D.
AuditVerdict serre_audit(const EnvelopeProfile& profile, const AuditOptions& options = {});

nlohmann::json to_json(const AuditVerdict& v);

enum class RationalOutcome { kConsistent, kForcedEmpty, kNotApplicable };

std::string to_string(RationalOutcome o);

struct RationalVerdict {
  RationalOutcome outcome = RationalOutcome::kConsistent;
  std::string reason;
  std::vector<std::string> trace;
};

/// Characteristic-0 check of the even-profile vanishing statement.
RationalVerdict rational_check(const EnvelopeProfile& profile, bool pi_finite);

nlohmann::json to_json(const RationalVerdict& v);

}  // namespace aqlab
