#include "flawsim/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flawsim/entropy.hpp"
#include "flawsim/error.hpp"

namespace flawsim {
namespace {

double threshold_for(double p) { return std::exp2(-(2.0 + binary_entropy(p))); }

// Shared shape of both conditions: per flaw i, sum over Gamma_pr(i) of
// 2^(-exponent(j)). Unaddressed flaws (infinite potential) contribute 0.
template <typename Exponent>
Theorem1Report neighborhood_sums(const Analysis& a, double tolerance, Exponent&& exponent) {
  Theorem1Report r;
  r.threshold = threshold_for(a.p);
  r.slack = r.threshold;
  r.certified = true;
  for (const auto& prof : a.profiles) {
    double sum = 0.0;
    prof.gamma_pr.for_each([&](FlawId j) {
      const auto& pj = a.profiles[j];
      if (pj.addressed) sum += std::exp2(-exponent(pj));
    });
    const bool ok = sum < r.threshold - tolerance;
    r.sums.push_back({prof.flaw, sum, ok});
    r.certified = r.certified && ok;
    r.slack = std::min(r.slack, r.threshold - sum);
  }
  return r;
}

}  // namespace

Theorem1Report theorem1_check(const Analysis& analysis, double tolerance) {
  return neighborhood_sums(analysis, tolerance, [](const FlawProfile& p) { return p.amenability - p.q; });
}

Theorem1Report lambda_condition(const Analysis& analysis, double lambda, double tolerance) {
  return neighborhood_sums(analysis, tolerance,
                           [lambda](const FlawProfile& p) { return lambda * p.potential - p.b_pr - p.q; });
}

std::optional<LambdaResult> lambda_search(const Analysis& analysis, double search_tol, double tolerance) {
  if (!lambda_condition(analysis, 1.0, tolerance).certified) return std::nullopt;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > search_tol) {
    const double mid = 0.5 * (lo + hi);
    if (lambda_condition(analysis, mid, tolerance).certified) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return LambdaResult{hi, lambda_condition(analysis, hi, tolerance).slack};
}

const StepBound& Bounds::at(double s) const {
  for (const auto& b : per_s) {
    if (b.s == s) return b;
  }
  throw std::out_of_range("no step bound for requested s");
}

Bounds bounds(const Analysis& analysis, double lambda, const std::vector<double>& s_values) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ModelError("x0 undefined: lambda must lie in (0, 1)");
  if (analysis.arc_bound <= 0) throw ModelError("B undefined");
  Bounds b;
  b.lambda = lambda;
  b.arc_bound = analysis.arc_bound;
  b.xi = std::max(analysis.b_ns, analysis.b_pr_max);
  b.delta = analysis.delta_max;
  const double log_states = std::log2(static_cast<double>(analysis.state_count));
  const double m = static_cast<double>(analysis.flaw_count);
  const double big_b = static_cast<double>(b.arc_bound);
  b.m0 = log_states + m * (static_cast<double>(b.delta) + 1.0) * (b.xi + 4.0) + lambda * big_b;
  b.x0 = 2.0 * b.m0 / (1.0 - lambda);
  for (double s : s_values) {
    StepBound sb;
    sb.s = s;
    sb.distance = std::ceil(2.0 * s / (1.0 + lambda)) * (b.x0 + big_b);
    sb.steps = std::exp2(big_b) * sb.distance;
    sb.ratio = sb.steps / (s * (log_states + m));
    b.per_s.push_back(sb);
  }
  return b;
}

Certificate certify(const Analysis& analysis, const CertifyOptions& options) {
  Certificate c;
  c.lambda_pad = options.lambda_pad;
  c.theorem1 = theorem1_check(analysis, options.tolerance);
  if (c.theorem1.certified) {
    c.lambda_star = lambda_search(analysis, options.search_tol, options.tolerance);
  }
  if (c.lambda_star && analysis.arc_bound > 0) {
    double use = c.lambda_star->lambda + options.lambda_pad;
    if (use >= 1.0) use = c.lambda_star->lambda;
    if (use < 1.0) c.bounds = bounds(analysis, use, options.s_values);
  }
  if (options.requested_lambda && analysis.arc_bound > 0) {
    const double req = *options.requested_lambda;
    if (req > 0.0 && req < 1.0 && lambda_condition(analysis, req, options.tolerance).certified) {
      c.bounds_at_request = bounds(analysis, req, options.s_values);
    }
  }
  return c;
}

SetFunctions::SetFunctions(const Analysis& analysis, double lambda) : analysis_(&analysis), lambda_(lambda) {}

double SetFunctions::in_pr(const FlawSet& s) const {
  double sum = 0.0;
  s.for_each([&](FlawId f) { sum += analysis_->profiles[f].b_pr; });
  return sum;
}

double SetFunctions::in_ns(const FlawSet& s) const { return static_cast<double>(s.count()) * analysis_->b_ns; }

double SetFunctions::in(const FlawSet& s) const {
  const double p = analysis_->p;
  return (1.0 - p) * in_pr(s) + p * in_ns(s);
}

double SetFunctions::q(const FlawSet& s) const {
  double sum = 0.0;
  s.for_each([&](FlawId f) { sum += analysis_->profiles[f].q; });
  return sum;
}

double SetFunctions::g(const FlawSet& s) const {
  const double p = analysis_->p;
  return (p * (2.0 + binary_entropy(p)) * static_cast<double>(s.count()) + q(s)) / lambda_;
}

double SetFunctions::potential(const FlawSet& s) const {
  double sum = 0.0;
  s.for_each([&](FlawId f) { sum += analysis_->profiles[f].potential; });
  return sum;
}

double SetFunctions::potential_minus(const FlawSet& s) const { return potential(s) - g(s); }

AuditReport inequality_audit(const AuditGrid& grid) {
  AuditReport r;
  auto note = [&](const std::string& w) {
    if (r.witnesses.size() < 16) r.witnesses.push_back(w);
  };
  for (int pct = grid.p_min_pct; pct <= grid.p_max_pct; ++pct) {
    const double p = static_cast<double>(pct) / 100.0;
    const double h = binary_entropy(p);
    for (int b = grid.b_ns_min; b <= grid.b_ns_max; ++b) {
      const double b_ns = static_cast<double>(b);
      for (std::size_t delta = grid.delta_min; delta <= grid.delta_max; ++delta) {
        ++r.points;
        const double d = static_cast<double>(delta);
        double best = -kInfinity;
        for (std::size_t k = 0; k <= delta; ++k) {
          const double kk = static_cast<double>(k);
          best = std::max(best, d * binary_entropy(kk / d) + kk * (b_ns + 2.0 + h));
        }
        const double rhs = d * (b_ns + 2.5 + h);
        auto at = [&] {
          std::ostringstream os;
          os << "(delta=" << delta << ", b_ns=" << b << ", p=" << p << ")";
          return os.str();
        };
        if (!(best < rhs)) {
          ++r.entropy_chain_failures;
          note("entropy chain fails at " + at());
        }
        if (!(q_of_p(delta, b_ns, p) <= p * d * (b_ns + 4.0))) {
          ++r.q_bound_failures;
          note("q bound fails at " + at());
        }
      }
    }
  }
  return r;
}

PotentialAudit audit_certified(const Analysis& analysis, double lambda, double tolerance) {
  PotentialAudit r;
  const double need = 2.0 + binary_entropy(analysis.p);
  for (const auto& prof : analysis.profiles) {
    if (!prof.addressed) continue;
    const double lhs = lambda * prof.potential - prof.q;
    if (lhs < need - tolerance) {
      r.ok = false;
      std::ostringstream os;
      os << "flaw " << prof.flaw << ": lambda*Potential - q = " << lhs << " < " << need;
      r.witnesses.push_back(os.str());
    }
  }
  return r;
}

}  // namespace flawsim
