#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "flawsim/model.hpp"

namespace flawsim {

/// Noise kernels. Candidate sets for the greedy adversary:
/// `principal_support` is A_pr(sigma) u {sigma}; `single_variable` is every
/// state differing from sigma in exactly one variable, plus sigma.
struct NoiseModel {
  enum class Kind { selfloop, uniform, point, greedy_adversarial, custom };
  enum class Candidates { principal_support, single_variable };

  Kind kind = Kind::selfloop;
  StateId target = 0;  // point
  Candidates candidates = Candidates::principal_support;
  std::map<StateId, std::vector<Arc>> rows;  // custom

  static NoiseModel selfloop() { return {}; }
  static NoiseModel uniform() {
    NoiseModel n;
    n.kind = Kind::uniform;
    return n;
  }
  static NoiseModel point(StateId t) {
    NoiseModel n;
    n.kind = Kind::point;
    n.target = t;
    return n;
  }
  static NoiseModel greedy(Candidates c = Candidates::principal_support) {
    NoiseModel n;
    n.kind = Kind::greedy_adversarial;
    n.candidates = c;
    return n;
  }
  static NoiseModel custom(std::map<StateId, std::vector<Arc>> r) {
    NoiseModel n;
    n.kind = Kind::custom;
    n.rows = std::move(r);
    return n;
  }
};

const char* to_string(NoiseModel::Kind k);

/// k+1 states; f_1 = {s0}; s0 moves uniformly to s1..sk; others self-loop.
Instance gen_star(std::size_t k);

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
};

/// Generated model: explicit when small enough, implicit otherwise.
using GeneratedModel = std::variant<Instance, ImplicitInstance>;

const ChainModel& as_model(const GeneratedModel& g);

enum class Flavor { automatic, explicit_only, implicit_only };

/// q-colorings of a graph; one flaw per monochromatic edge (in edge order,
/// which is also the priority). The addressed edge's endpoints are
/// resampled uniformly. Start state: all vertices colour 0.
GeneratedModel gen_coloring(std::uint32_t vertices, const std::vector<Edge>& edges, std::uint32_t q,
                            std::uint64_t cap = kDefaultExplicitCap, Flavor flavor = Flavor::automatic,
                            std::vector<std::string>* warnings = nullptr);

/// CNF over n boolean variables, clauses as signed 1-based literals. One
/// flaw per clause; the addressed clause's variables are resampled uniformly.
/// Start state: all variables false.
GeneratedModel gen_ksat(std::uint32_t n, const std::vector<std::vector<int>>& clauses,
                        std::uint64_t cap = kDefaultExplicitCap, Flavor flavor = Flavor::automatic);

/// Replaces the noise kernel and p.
Instance attach_noise(const Instance& base, const NoiseModel& model, double p);
/// Implicit variant. Uniform and custom noise need explicit instances.
GeneratedModel attach_noise(const GeneratedModel& base, const NoiseModel& model, double p);

struct RandomSpec {
  std::uint64_t states = 32;
  std::size_t flaws = 4;
  /// Probability that a state belongs to a given flaw.
  double density = 0.2;
  std::size_t min_support = 2;
  std::size_t max_support = 4;
  /// Uniform principal rows with pairwise disjoint supports across flawed
  /// states (so every b_pr is 0).
  bool uniform_disjoint = false;
  /// Noise rows: support size in [1, noise_support].
  std::size_t noise_support = 2;
  double p = 0.0;
  /// Guarantee at least this many flawless states.
  std::uint64_t min_flawless = 1;
};

/// Random explicit instance, reproducible from (spec, seed). Flaws with no
/// members are allowed. Start state: the lowest-index flawed state (0 when
/// no state is flawed).
Instance gen_random(const RandomSpec& spec, std::uint64_t seed);

}  // namespace flawsim
