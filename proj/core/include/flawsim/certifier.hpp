#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flawsim/analyzer.hpp"

namespace flawsim {

struct FlawSum {
  FlawId flaw = 0;
  double sum = 0.0;
  bool ok = false;
};

struct Theorem1Report {
  double threshold = 0.0;  // 2^-(2+h(p))
  std::vector<FlawSum> sums;
  bool certified = false;
  /// min over flaws of threshold - sum.
  double slack = 0.0;
};

/// Per flaw: sum over gamma_pr of 2^(-Amenability(f_j) + q_j(p)); flaws with
/// infinite potential contribute 0. Certified iff every sum < threshold - tol.
Theorem1Report theorem1_check(const Analysis& analysis, double tolerance = kCertificateSlack);

/// Per-flaw sums of the parametrized condition at a given lambda.
Theorem1Report lambda_condition(const Analysis& analysis, double lambda,
                                double tolerance = kCertificateSlack);

struct LambdaResult {
  double lambda = 1.0;  // smallest passing lambda, up to the search tolerance
  double slack = 0.0;   // at lambda
};

/// Bisection on (0, 1]. None when the condition fails at lambda = 1.
std::optional<LambdaResult> lambda_search(const Analysis& analysis, double search_tol = 1e-6,
                                          double tolerance = kCertificateSlack);

struct StepBound {
  double s = 0.0;
  double distance = 0.0;  // E(s) = ceil(2s/(1+lambda)) (x0 + B)
  double steps = 0.0;     // 2^B E(s)
  double ratio = 0.0;     // steps / (s (log2|Omega| + m))
};

struct Bounds {
  double lambda = 0.0;
  int arc_bound = 0;
  double xi = 0.0;
  std::size_t delta = 1;
  double m0 = 0.0;
  double x0 = 0.0;
  std::vector<StepBound> per_s;

  const StepBound& at(double s) const;
};

/// M0 = log2|Omega| + m (Delta+1)(Xi+4) + lambda B, x0 = 2 M0 / (1 - lambda),
/// then E(s) and 2^B E(s) for every s. Throws ModelError when lambda >= 1
/// or B is undefined.
Bounds bounds(const Analysis& analysis, double lambda, const std::vector<double>& s_values);

struct Certificate {
  Theorem1Report theorem1;
  std::optional<LambdaResult> lambda_star;
  /// Bounds evaluated at lambda_use = min(1 - search_tol, lambda* + pad).
  std::optional<Bounds> bounds;
  /// Bounds at a caller-supplied lambda, when one was given and passes.
  std::optional<Bounds> bounds_at_request;
  double lambda_pad = 0.0;
};

struct CertifyOptions {
  double search_tol = 1e-6;
  double tolerance = kCertificateSlack;
  double lambda_pad = 0.0;
  std::optional<double> requested_lambda;
  std::vector<double> s_values{1.0, 2.0, 3.0};
};

Certificate certify(const Analysis& analysis, const CertifyOptions& options = {});

/// Set functions over flaw sets (indicator FlawSet).
class SetFunctions {
 public:
  SetFunctions(const Analysis& analysis, double lambda);

  double in_pr(const FlawSet& s) const;
  double in_ns(const FlawSet& s) const;
  /// (1-p) In_pr(S) + p In_ns(S).
  double in(const FlawSet& s) const;
  double q(const FlawSet& s) const;
  /// lambda^-1 (p (2 + h(p)) |S| + q(S)).
  double g(const FlawSet& s) const;
  /// Sum of potentials; 0 for the empty set.
  double potential(const FlawSet& s) const;
  double potential_minus(const FlawSet& s) const;

 private:
  const Analysis* analysis_;
  double lambda_;
};

struct AuditGrid {
  std::size_t delta_min = 1;
  std::size_t delta_max = 64;
  int b_ns_min = 0;
  int b_ns_max = 8;
  /// p = k / 100 for k in [p_min_pct, p_max_pct].
  int p_min_pct = 1;
  int p_max_pct = 99;
};

struct AuditReport {
  std::size_t points = 0;
  std::size_t entropy_chain_failures = 0;  // (i)
  std::size_t q_bound_failures = 0;        // (ii)
  std::vector<std::string> witnesses;      // first few violations
  bool ok() const noexcept { return entropy_chain_failures == 0 && q_bound_failures == 0; }
};

/// (i) max over integer k in [0, Delta] of Delta h(k/Delta) + k (b_ns + 2 + h(p))
///     < Delta (b_ns + 5/2 + h(p));
/// (ii) q(p) <= p Delta (b_ns + 4).
AuditReport inequality_audit(const AuditGrid& grid = {});

struct PotentialAudit {
  bool ok = true;
  std::vector<std::string> witnesses;
};

/// (iii) lambda Potential(f_i) - q_i(p) >= 2 + h(p) for every flaw.
PotentialAudit audit_certified(const Analysis& analysis, double lambda,
                               double tolerance = kCertificateSlack);

}  // namespace flawsim
