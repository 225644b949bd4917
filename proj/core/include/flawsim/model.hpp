#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "flawsim/distribution.hpp"
#include "flawsim/flaw_set.hpp"
#include "flawsim/priority.hpp"
#include "flawsim/types.hpp"

namespace flawsim {

/// Either a fixed start state or a distribution over start states.
using InitialCondition = std::variant<StateId, Distribution>;

/// Common surface of explicit and implicit instances. Everything the
/// simulator and the forensics need; the analyzer additionally requires
/// `as_explicit()`.
class ChainModel {
 public:
  virtual ~ChainModel() = default;

  virtual std::uint64_t state_count() const = 0;
  virtual std::size_t flaw_count() const = 0;
  virtual const std::vector<std::string>& flaw_names() const = 0;
  virtual const Priority& priority() const = 0;
  virtual double p() const = 0;
  virtual const InitialCondition& initial() const = 0;

  /// U(sigma).
  virtual FlawSet present_flaws(StateId s) const = 0;
  virtual bool is_flawed(StateId s) const = 0;
  /// pi(sigma); none iff flawless.
  virtual std::optional<FlawId> addressed_flaw(StateId s) const = 0;

  /// Rows in canonical (target-sorted) order. Implementations may return a
  /// view into `scratch`, which must outlive the returned span.
  virtual std::span<const Arc> principal_row(StateId s, std::vector<Arc>& scratch) const = 0;
  virtual std::span<const Arc> noise_row(StateId s, std::vector<Arc>& scratch) const = 0;

  virtual const class Instance* as_explicit() const noexcept { return nullptr; }
};

struct RawFlaw {
  std::string name;
  std::vector<StateId> members;
};

/// Unvalidated instance description, as parsed from a file or assembled
/// by a generator.
struct RawInstance {
  std::uint64_t state_count = 0;
  /// Optional mixed-radix variable widths; product must equal state_count.
  std::vector<std::uint32_t> widths;
  std::vector<RawFlaw> flaws;
  /// Flaw names, highest priority first. Empty means declaration order.
  std::vector<std::string> priority;
  /// Sparse rows keyed by source. A missing principal row is allowed only
  /// for flawless states (it becomes the unit self-loop); a missing noise
  /// row becomes a unit self-loop.
  std::map<StateId, std::vector<Arc>> principal;
  std::map<StateId, std::vector<Arc>> noise;
  double p = 0.0;
  InitialCondition initial = StateId{0};
};

/// Fully enumerated instance. Immutable after validation.
class Instance final : public ChainModel {
 public:
  std::uint64_t state_count() const override { return principal_.size(); }
  std::size_t flaw_count() const override { return names_.size(); }
  const std::vector<std::string>& flaw_names() const override { return names_; }
  const Priority& priority() const override { return priority_; }
  double p() const override { return p_; }
  const InitialCondition& initial() const override { return initial_; }

  FlawSet present_flaws(StateId s) const override { return present_.at(s); }
  bool is_flawed(StateId s) const override { return addressed_.at(s).has_value(); }
  std::optional<FlawId> addressed_flaw(StateId s) const override { return addressed_.at(s); }

  std::span<const Arc> principal_row(StateId s, std::vector<Arc>&) const override {
    return principal_.at(s).arcs();
  }
  std::span<const Arc> noise_row(StateId s, std::vector<Arc>&) const override {
    return noise_.at(s).arcs();
  }

  const Instance* as_explicit() const noexcept override { return this; }

  const FlawSet& present(StateId s) const { return present_.at(s); }
  const Distribution& principal(StateId s) const { return principal_.at(s); }
  const Distribution& noise(StateId s) const { return noise_.at(s); }
  /// Sorted member states of flaw f.
  const std::vector<StateId>& members(FlawId f) const { return members_.at(f); }
  const std::vector<std::uint32_t>& widths() const noexcept { return widths_; }
  /// Non-fatal findings from validation (empty flaws, ...).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Round-trips through validate_instance.
  RawInstance to_raw() const;

 private:
  friend Instance validate_instance(const RawInstance& raw, double tolerance);

  std::vector<std::string> names_;
  std::vector<std::vector<StateId>> members_;
  std::vector<FlawSet> present_;
  std::vector<std::optional<FlawId>> addressed_;
  Priority priority_;
  std::vector<Distribution> principal_;
  std::vector<Distribution> noise_;
  double p_ = 0.0;
  InitialCondition initial_ = StateId{0};
  std::vector<std::uint32_t> widths_;
  std::vector<std::string> warnings_;
};

/// Checks every model constraint and returns the normalized instance.
/// Throws ValidationError listing all violations.
Instance validate_instance(const RawInstance& raw, double tolerance = kRowSumTolerance);

/// Callbacks describing a state space too large to enumerate. States are
/// mixed-radix encodings of variable assignments (variable 0 least
/// significant). Row callbacks must emit target-sorted, positive rows.
struct ImplicitSpec {
  std::vector<std::uint32_t> widths;
  std::vector<std::string> flaw_names;
  Priority priority;
  std::function<FlawSet(StateId)> present;
  std::function<void(StateId, std::vector<Arc>&)> principal;
  std::function<void(StateId, std::vector<Arc>&)> noise;
  double p = 0.0;
  InitialCondition initial = StateId{0};
  /// Serialized generator description, used to write the instance file.
  std::string descriptor;
};

class ImplicitInstance final : public ChainModel {
 public:
  explicit ImplicitInstance(ImplicitSpec spec);

  std::uint64_t state_count() const override { return state_count_; }
  std::size_t flaw_count() const override { return spec_.flaw_names.size(); }
  const std::vector<std::string>& flaw_names() const override { return spec_.flaw_names; }
  const Priority& priority() const override { return spec_.priority; }
  double p() const override { return spec_.p; }
  const InitialCondition& initial() const override { return spec_.initial; }

  FlawSet present_flaws(StateId s) const override;
  bool is_flawed(StateId s) const override;
  std::optional<FlawId> addressed_flaw(StateId s) const override;
  std::span<const Arc> principal_row(StateId s, std::vector<Arc>& scratch) const override;
  std::span<const Arc> noise_row(StateId s, std::vector<Arc>& scratch) const override;

  const std::vector<std::uint32_t>& widths() const noexcept { return spec_.widths; }
  const std::string& descriptor() const noexcept { return spec_.descriptor; }
  const ImplicitSpec& spec() const noexcept { return spec_; }

 private:
  ImplicitSpec spec_;
  std::uint64_t state_count_ = 0;
};

/// Throws ModelError("analysis requires explicit instance") otherwise.
const Instance& require_explicit(const ChainModel& model);

FlawSet present_flaws(const ChainModel& model, StateId s);
std::optional<FlawId> addressed_flaw(const ChainModel& model, StateId s);

/// rho(sigma, .) = (1-p) rho_pr(sigma, .) + p rho_ns(sigma, .).
Distribution mixed_row(const ChainModel& model, StateId s);

/// Smallest integer B >= 1 with 2^-B < rho < 1 - 2^-B for every arc of the
/// mixed chain leaving a flawed state. Arcs leaving flawless states are
/// exempt. Throws ModelError("B undefined") on a probability-1 flawed arc.
int arc_bound_b(const ChainModel& model);

}  // namespace flawsim
