#include "flawsim/cli/dispatch.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "render.hpp"

#ifndef FLAWSIM_VERSION
#define FLAWSIM_VERSION "0.0.0"
#endif

namespace flawsim::cli {
namespace {

std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const auto parsed = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0' || parsed == 0) throw std::invalid_argument(std::string("bad value for ") + name);
  return parsed;
}

/// Reproducibility record embedded in every output.
struct RunManifest {
  std::string command;
  std::string instance_digest;
  std::vector<std::uint64_t> seeds;
  json params = json::object();

  json to_json() const {
    return {
        {"tool", "flawsim"},
        {"version", version()},
        {"command", command},
        {"instance_digest", instance_digest.empty() ? json(nullptr) : json(instance_digest)},
        {"seeds", seeds},
        {"params", params},
    };
  }
  std::string comment_line() const { return "# manifest " + to_json().dump() + "\n"; }
};

struct Loaded {
  GeneratedModel model;
  std::string digest;
  const ChainModel& chain() const { return as_model(model); }
};

Loaded load(const std::string& path, std::uint64_t cap) {
  GeneratedModel m = load_model(path, cap);
  std::string digest = instance_digest(instance_to_json(m));
  return {std::move(m), std::move(digest)};
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path);
}

std::string json_text(const json& doc) { return doc.dump(2) + "\n"; }

std::vector<Edge> parse_edges(const std::string& spec) {
  std::vector<Edge> edges;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) throw ValidationError({"edge '" + item + "' is not of the form u-v"});
    try {
      edges.push_back({static_cast<std::uint32_t>(std::stoul(item.substr(0, dash))),
                       static_cast<std::uint32_t>(std::stoul(item.substr(dash + 1)))});
    } catch (const std::logic_error&) {
      throw ValidationError({"edge '" + item + "' is not of the form u-v"});
    }
  }
  return edges;
}

std::vector<std::vector<int>> parse_clauses(const std::string& spec) {
  std::vector<std::vector<int>> clauses;
  std::stringstream ss(spec);
  std::string clause;
  while (std::getline(ss, clause, ';')) {
    std::vector<int> lits;
    std::stringstream cs(clause);
    std::string lit;
    while (std::getline(cs, lit, ',')) {
      if (lit.empty()) continue;
      try {
        lits.push_back(std::stoi(lit));
      } catch (const std::logic_error&) {
        throw ValidationError({"literal '" + lit + "' is not an integer"});
      }
    }
    if (!lits.empty()) clauses.push_back(std::move(lits));
  }
  return clauses;
}

Flavor parse_flavor(const std::string& s) {
  if (s == "explicit") return Flavor::explicit_only;
  if (s == "implicit") return Flavor::implicit_only;
  return Flavor::automatic;
}

struct NoiseOpts {
  std::string kind = "none";
  StateId target = 0;
  std::string candidates = "principal";
  double p = 0.0;
  bool p_given = false;

  void add_to(CLI::App* app) {
    app->add_option("--noise", kind, "Noise model")
        ->check(CLI::IsMember({"none", "selfloop", "uniform", "point", "greedy"}))
        ->capture_default_str();
    app->add_option("--noise-target", target, "Target state of the point noise model")->capture_default_str();
    app->add_option("--candidates", candidates, "Arc set searched by the greedy adversary")
        ->check(CLI::IsMember({"principal", "single"}))
        ->capture_default_str();
    app->add_option("--p", p, "Noise mixing probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  }

  json params() const {
    return {{"noise", kind}, {"noise_target", target}, {"candidates", candidates}, {"p", p}};
  }

  std::optional<NoiseModel> model() const {
    if (kind == "none") {
      if (p_given) return NoiseModel::selfloop();
      return std::nullopt;
    }
    if (kind == "selfloop") return NoiseModel::selfloop();
    if (kind == "uniform") return NoiseModel::uniform();
    if (kind == "point") return NoiseModel::point(target);
    return NoiseModel::greedy(candidates == "single" ? NoiseModel::Candidates::single_variable
                                                     : NoiseModel::Candidates::principal_support);
  }
};

std::vector<double> parse_s_values(const std::vector<double>& s) {
  for (double v : s) {
    if (!(v > 0.0)) throw ValidationError({"s values must be positive"});
  }
  return s;
}

class Dispatcher {
 public:
  Dispatcher(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void build();

  int cmd_gen(const std::string& which);
  int cmd_analyze();
  int cmd_certify();
  int cmd_simulate();
  int cmd_forensics();
  int cmd_tree();
  int cmd_audit();

  Analysis analysis_of(const Loaded& l, CongestionRule rule = CongestionRule::members) const {
    return flaw_profiles(require_explicit(l.chain()), rule);
  }

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Flaw-structured Markov chains under noise: analysis, certification, simulation", "flawsim"};

  // shared
  std::string instance_path_;
  std::string out_path_;
  std::string format_ = "json";
  std::uint64_t cap_ = kDefaultExplicitCap;

  // gen
  CLI::App* gen_ = nullptr;
  std::vector<std::pair<std::string, CLI::App*>> gen_kinds_;
  NoiseOpts noise_;
  std::size_t star_k_ = 8;
  std::uint32_t vertices_ = 3;
  std::string edges_ = "0-1,1-2,2-0";
  std::uint32_t colors_ = 3;
  std::string flavor_ = "auto";
  std::uint32_t variables_ = 2;
  std::string clauses_;
  RandomSpec random_;
  std::uint64_t seed_ = 0;

  // analyze
  CLI::App* analyze_ = nullptr;
  std::string dot_;
  std::string congestion_ = "members";

  // certify
  CLI::App* certify_ = nullptr;
  std::optional<double> lambda_;
  double pad_ = 0.0;
  double search_tol_ = 1e-6;
  double tolerance_ = kCertificateSlack;
  std::vector<double> s_values_{1.0, 2.0, 3.0};

  // simulate
  CLI::App* simulate_ = nullptr;
  std::uint64_t trials_ = 1000;
  std::uint64_t budget_ = 10000;
  unsigned threads_ = 0;
  bool continue_ = false;
  std::string summary_path_;

  // forensics
  CLI::App* forensics_ = nullptr;

  // tree
  CLI::App* tree_ = nullptr;
  double x_ = 0.0;
  std::size_t tree_cap_ = 10'000'000;
  bool expand_flawless_ = false;
  std::optional<StateId> root_;
  std::size_t leaf_limit_ = 1000;

  // audit
  CLI::App* audit_ = nullptr;
  std::vector<std::string> audit_instances_;
  AuditGrid grid_;
};

void Dispatcher::build() {
  app_.require_subcommand(1);
  app_.set_version_flag("--version", version());

  auto add_format = [&](CLI::App* sub, std::vector<std::string> allowed) {
    sub->add_option("--format", format_, "Output format")->check(CLI::IsMember(allowed))->capture_default_str();
  };
  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", instance_path_, "Instance file")->required();
    sub->add_option("--cap", cap_, "Largest state space built explicitly (env FLAWSIM_EXPLICIT_CAP)")
        ->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub, const char* what) { sub->add_option("--out", out_path_, what); };

  gen_ = app_.add_subcommand("gen", "Generate an instance file");
  gen_->require_subcommand(1);
  auto* star = gen_->add_subcommand("star", "Star gadget: one flawed hub moving uniformly to k flawless leaves");
  star->add_option("--k", star_k_, "Number of leaves")->capture_default_str();
  auto* coloring = gen_->add_subcommand("coloring", "Graph colouring with one flaw per edge");
  coloring->add_option("--vertices", vertices_)->capture_default_str();
  coloring->add_option("--edges", edges_, "Comma-separated u-v pairs")->capture_default_str();
  coloring->add_option("--q", colors_, "Number of colours")->capture_default_str();
  auto* ksat = gen_->add_subcommand("ksat", "CNF formula with one flaw per clause");
  ksat->add_option("--variables", variables_)->capture_default_str();
  ksat->add_option("--clauses", clauses_, "Clauses separated by ';', literals by ',' (1-based, signed)");
  auto* random = gen_->add_subcommand("random", "Random explicit instance");
  random->add_option("--states", random_.states)->capture_default_str();
  random->add_option("--flaws", random_.flaws)->capture_default_str();
  random->add_option("--density", random_.density)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  random->add_option("--min-support", random_.min_support)->capture_default_str();
  random->add_option("--max-support", random_.max_support)->capture_default_str();
  random->add_flag("--uniform-disjoint", random_.uniform_disjoint, "Uniform principal rows with disjoint supports");
  random->add_option("--noise-support", random_.noise_support)->capture_default_str();
  random->add_option("--min-flawless", random_.min_flawless)->capture_default_str();
  random->add_option("--seed", seed_)->capture_default_str();
  for (auto* sub : {star, coloring, ksat, random}) {
    noise_.add_to(sub);
    add_out(sub, "Instance file to write (default stdout)");
    gen_kinds_.emplace_back(sub->get_name(), sub);
  }
  for (auto* sub : {coloring, ksat}) {
    sub->add_option("--cap", cap_, "Largest state space built explicitly")->capture_default_str();
    sub->add_option("--flavor", flavor_)->check(CLI::IsMember({"auto", "explicit", "implicit"}))->capture_default_str();
  }

  analyze_ = app_.add_subcommand("analyze", "Per-flaw potentials, congestions, neighbourhoods and q(p)");
  add_instance(analyze_);
  add_format(analyze_, {"json", "text"});
  analyze_->add_option("--dot", dot_, "Emit the principal or noise causality graph in DOT")
      ->check(CLI::IsMember({"pr", "ns"}));
  analyze_->add_option("--congestion", congestion_, "Congestion source rule")
      ->check(CLI::IsMember({"members", "addressed"}))
      ->capture_default_str();
  add_out(analyze_, "Output file");

  certify_ = app_.add_subcommand("certify", "Check the amenability condition and compute step bounds");
  add_instance(certify_);
  add_format(certify_, {"json", "text"});
  certify_->add_option("--lambda", lambda_, "Also report bounds at this lambda");
  certify_->add_option("--pad", pad_, "Bounds are reported at lambda* + pad")->capture_default_str();
  certify_->add_option("--search-tol", search_tol_)->capture_default_str();
  certify_->add_option("--tolerance", tolerance_, "Slack for strict inequalities")->capture_default_str();
  certify_->add_option("--s", s_values_, "Failure exponents s")->delimiter(',')->capture_default_str();
  add_out(certify_, "Output file");

  simulate_ = app_.add_subcommand("simulate", "Monte Carlo hitting times of the mixed chain");
  add_instance(simulate_);
  add_format(simulate_, {"json", "text", "csv"});
  simulate_->add_option("--trials", trials_)->check(CLI::PositiveNumber)->capture_default_str();
  simulate_->add_option("--seed", seed_, "Master seed")->capture_default_str();
  simulate_->add_option("--budget", budget_, "Step budget per trial")->capture_default_str();
  simulate_->add_option("--threads", threads_, "Worker threads (0 = hardware); results do not depend on it");
  simulate_->add_flag("--continue", continue_, "Keep stepping after the first flawless state");
  simulate_->add_option("--s", s_values_, "Failure exponents s for the tail check")->delimiter(',')->capture_default_str();
  simulate_->add_option("--out", out_path_, "Per-trial CSV (trial,hit_step,censored)");
  simulate_->add_option("--summary", summary_path_, "Summary file (default stdout)");

  forensics_ = app_.add_subcommand("forensics", "Witness, break sequence and its encoding for one trajectory");
  add_instance(forensics_);
  add_format(forensics_, {"json", "text"});
  forensics_->add_option("--seed", seed_)->capture_default_str();
  forensics_->add_option("--budget", budget_, "Step budget")->capture_default_str();
  add_out(forensics_, "Output file");

  tree_ = app_.add_subcommand("tree", "Exact process tree truncated at probability 2^-x");
  add_instance(tree_);
  tree_->add_option("--x", x_, "Stratum radius in bits")->required()->check(CLI::NonNegativeNumber);
  tree_->add_option("--tree-cap", tree_cap_, "Leaf cap (env FLAWSIM_TREE_CAP)")->capture_default_str();
  tree_->add_flag("--expand-flawless", expand_flawless_, "Expand through flawless states");
  tree_->add_option("--root", root_, "Root state (default: the initial state)");
  tree_->add_option("--leaf-limit", leaf_limit_, "Leaves listed in the output")->capture_default_str();
  add_out(tree_, "Output file");

  audit_ = app_.add_subcommand("audit", "Numeric audit of the noise inequalities over a parameter grid");
  audit_->add_option("instances", audit_instances_, "Instances to audit at their certified lambda");
  audit_->add_option("--delta-max", grid_.delta_max)->capture_default_str();
  audit_->add_option("--b-max", grid_.b_ns_max)->capture_default_str();
  audit_->add_option("--p-min-pct", grid_.p_min_pct)->check(CLI::Range(1, 99))->capture_default_str();
  audit_->add_option("--p-max-pct", grid_.p_max_pct)->check(CLI::Range(1, 99))->capture_default_str();
  audit_->add_option("--pad", pad_)->capture_default_str();
  audit_->add_option("--cap", cap_)->capture_default_str();
  add_format(audit_, {"json", "text"});
  add_out(audit_, "Output file");
}

int Dispatcher::run(const std::vector<std::string>& args) {
  try {
    cap_ = env_u64("FLAWSIM_EXPLICIT_CAP", kDefaultExplicitCap);
    tree_cap_ = static_cast<std::size_t>(env_u64("FLAWSIM_TREE_CAP", tree_cap_));
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  build();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("flawsim");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app_.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out_ << app_.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out_ << app_.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out_ << version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << "\n\n" << app_.help();
    return kExitUsage;
  }

  try {
    for (const auto& [name, sub] : gen_kinds_) {
      if (sub->parsed()) {
        noise_.p_given = sub->count("--p") > 0;
        return cmd_gen(name);
      }
    }
    if (analyze_->parsed()) return cmd_analyze();
    if (certify_->parsed()) return cmd_certify();
    if (simulate_->parsed()) return cmd_simulate();
    if (forensics_->parsed()) return cmd_forensics();
    if (tree_->parsed()) return cmd_tree();
    if (audit_->parsed()) return cmd_audit();
  } catch (const ValidationError& e) {
    err_ << "invalid input:\n";
    for (const auto& v : e.violations()) err_ << "  " << v << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err_ << app_.help();
  return kExitUsage;
}

int Dispatcher::cmd_gen(const std::string& which) {
  RunManifest man;
  man.command = "gen " + which;
  man.params = noise_.params();
  std::vector<std::string> warnings;
  GeneratedModel model = [&]() -> GeneratedModel {
    if (which == "star") {
      man.params["k"] = star_k_;
      return gen_star(star_k_);
    }
    if (which == "coloring") {
      man.params.update({{"vertices", vertices_}, {"edges", edges_}, {"q", colors_}, {"flavor", flavor_}, {"cap", cap_}});
      return gen_coloring(vertices_, parse_edges(edges_), colors_, cap_, parse_flavor(flavor_), &warnings);
    }
    if (which == "ksat") {
      man.params.update({{"variables", variables_}, {"clauses", clauses_}, {"flavor", flavor_}, {"cap", cap_}});
      return gen_ksat(variables_, parse_clauses(clauses_), cap_, parse_flavor(flavor_));
    }
    man.seeds.push_back(seed_);
    random_.p = noise_.p;
    man.params.update({{"states", random_.states},
                       {"flaws", random_.flaws},
                       {"density", random_.density},
                       {"min_support", random_.min_support},
                       {"max_support", random_.max_support},
                       {"uniform_disjoint", random_.uniform_disjoint},
                       {"noise_support", random_.noise_support},
                       {"min_flawless", random_.min_flawless}});
    return gen_random(random_, seed_);
  }();
  if (const auto nm = noise_.model(); nm && !(which == "random" && noise_.kind == "none")) {
    model = attach_noise(model, *nm, noise_.p);
  }
  for (const auto& w : warnings) err_ << "warning: " << w << '\n';
  if (const auto* inst = std::get_if<Instance>(&model)) {
    for (const auto& w : inst->warnings()) err_ << "warning: " << w << '\n';
  }
  json doc = instance_to_json(model);
  man.instance_digest = instance_digest(doc);
  doc["manifest"] = man.to_json();
  emit(out_path_, json_text(doc), out_);
  return kExitOk;
}

int Dispatcher::cmd_analyze() {
  const Loaded l = load(instance_path_, cap_);
  const auto rule = congestion_ == "addressed" ? CongestionRule::addressed : CongestionRule::members;
  const Analysis a = analysis_of(l, rule);
  const auto& names = l.chain().flaw_names();
  RunManifest man{"analyze", l.digest, {}, {{"format", format_}, {"congestion", congestion_}, {"dot", dot_}}};
  if (!dot_.empty()) {
    const auto& g = dot_ == "pr" ? a.pr : a.ns;
    emit(out_path_, "// manifest " + man.to_json().dump() + "\n" + to_dot(g, names), out_);
    return kExitOk;
  }
  if (format_ == "text") {
    emit(out_path_, man.comment_line() + analysis_text(a, names), out_);
  } else {
    json doc = analysis_json(a, names);
    doc["manifest"] = man.to_json();
    emit(out_path_, json_text(doc), out_);
  }
  return kExitOk;
}

int Dispatcher::cmd_certify() {
  const Loaded l = load(instance_path_, cap_);
  const Analysis a = analysis_of(l);
  CertifyOptions opt;
  opt.search_tol = search_tol_;
  opt.tolerance = tolerance_;
  opt.lambda_pad = pad_;
  opt.requested_lambda = lambda_;
  opt.s_values = parse_s_values(s_values_);
  const Certificate c = certify(a, opt);
  const auto& names = l.chain().flaw_names();

  RunManifest man{"certify",
                  l.digest,
                  {},
                  {{"format", format_},
                   {"pad", pad_},
                   {"search_tol", search_tol_},
                   {"tolerance", tolerance_},
                   {"s", opt.s_values},
                   {"lambda", lambda_ ? json(*lambda_) : json(nullptr)}}};
  if (format_ == "text") {
    emit(out_path_, man.comment_line() + certificate_text(a, c, names), out_);
  } else {
    json doc = certificate_json(a, c, names);
    if (c.bounds) {
      const PotentialAudit pa = audit_certified(a, c.bounds->lambda, tolerance_);
      doc["potential_audit"] = {{"lambda", c.bounds->lambda}, {"ok", pa.ok}, {"witnesses", pa.witnesses}};
    }
    doc["manifest"] = man.to_json();
    emit(out_path_, json_text(doc), out_);
  }
  return c.theorem1.certified ? kExitOk : kExitNegative;
}

int Dispatcher::cmd_simulate() {
  const Loaded l = load(instance_path_, cap_);
  const ChainModel& model = l.chain();
  const auto s_values = parse_s_values(s_values_);
  if (budget_ < 1) throw ValidationError({"budget must be at least 1"});
  const unsigned threads = threads_ == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads_;

  RunManifest man{"simulate",
                  l.digest,
                  {seed_},
                  {{"trials", trials_}, {"budget", budget_}, {"continue", continue_}, {"s", s_values}, {"format", format_}}};

  const HittingStats stats = monte_carlo(model, trials_, seed_, budget_, threads);

  std::vector<std::uint64_t> flawless_visits;
  if (continue_) {
    flawless_visits.resize(trials_);
    RunOptions ro;
    ro.max_steps = budget_;
    ro.continue_after_hit = true;
    for (std::uint64_t i = 0; i < trials_; ++i) {
      const Trajectory tr = flawsim::run(model, trial_seed(seed_, i), ro);
      std::uint64_t visits = 0;
      for (std::size_t k = tr.z; k < tr.states.size(); ++k) visits += model.is_flawed(tr.states[k]) ? 0 : 1;
      flawless_visits[i] = visits;
    }
  }

  std::string csv = man.comment_line();
  csv += continue_ ? "trial,hit_step,censored,flawless_visits\n" : "trial,hit_step,censored\n";
  for (std::uint64_t i = 0; i < trials_; ++i) {
    const auto& h = stats.hit_step[i];
    csv += std::to_string(i) + "," + (h ? std::to_string(*h) : std::string()) + "," + (h ? "0" : "1");
    if (continue_) csv += "," + std::to_string(flawless_visits[i]);
    csv += "\n";
  }

  std::optional<Bounds> bounds;
  bool certified = false;
  if (const Instance* inst = model.as_explicit()) {
    CertifyOptions opt;
    opt.s_values = s_values;
    const Certificate c = certify(flaw_profiles(*inst), opt);
    certified = c.theorem1.certified;
    bounds = c.bounds;
  }
  const TailReport tail = tail_check(stats, bounds, s_values);

  double hit_sum = 0.0;
  std::uint64_t hits = 0;
  for (const auto& h : stats.hit_step) {
    if (h) {
      hit_sum += static_cast<double>(*h);
      ++hits;
    }
  }
  json empirical = json::array();
  for (std::uint64_t t = 0; t <= std::min<std::uint64_t>(budget_, 16); ++t) {
    empirical.push_back({{"t", t}, {"tail", stats.tail(t)}});
  }
  json summary = {
      {"manifest", man.to_json()},
      {"trials", stats.trials},
      {"budget", stats.budget},
      {"hits", hits},
      {"censored", stats.censored()},
      {"mean_hit_step", hits > 0 ? json(hit_sum / static_cast<double>(hits)) : json(nullptr)},
      {"certified", certified},
      {"empirical_tail", std::move(empirical)},
      {"tail_check", tail_json(tail)},
  };

  if (!out_path_.empty()) emit(out_path_, csv, out_);
  if (format_ == "csv") {
    emit(summary_path_, csv, out_);
  } else if (format_ == "text") {
    std::ostringstream os;
    os << man.comment_line() << "trials " << stats.trials << "  hits " << hits << "  censored " << stats.censored()
       << "  certified " << (certified ? "yes" : "no") << '\n';
    for (const auto& row : tail.rows) {
      os << "  s " << fmt(row.s) << "  horizon " << row.horizon << "  empirical " << fmt(row.empirical)
         << "  bound " << fmt(row.bound)
         << (!tail.guaranteed ? "  no guarantee" : row.inconclusive ? "  inconclusive" : row.pass ? "  pass" : "  FAIL")
         << '\n';
    }
    emit(summary_path_, os.str(), out_);
  } else {
    emit(summary_path_, json_text(summary), out_);
  }
  return kExitOk;
}

int Dispatcher::cmd_forensics() {
  const Loaded l = load(instance_path_, cap_);
  const ChainModel& model = l.chain();
  const auto& names = model.flaw_names();
  if (budget_ < 1) throw ValidationError({"budget must be at least 1"});
  RunOptions ro;
  ro.max_steps = budget_;
  const Trajectory tr = flawsim::run(model, seed_, ro);
  RunManifest man{"forensics", l.digest, {seed_}, {{"budget", budget_}, {"format", format_}}};

  json steps = json::array();
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const auto f = model.addressed_flaw(tr.states[i]);
    steps.push_back({{"state", tr.states[i]},
                     {"flaw", f ? json(names.at(*f)) : json(nullptr)},
                     {"noise", i < tr.noise.size() ? json(tr.noise[i] != 0) : json(nullptr)}});
  }
  const WitnessSequence w = witness(model, tr);
  json witness_names = json::array();
  for (FlawId f : w) witness_names.push_back(names.at(f));

  json doc = {{"manifest", man.to_json()},
              {"seed", tr.seed},
              {"terminal", to_string(tr.terminal)},
              {"z", tr.z},
              {"trajectory", std::move(steps)},
              {"witness", witness_names}};
  bool verified = true;
  if (tr.z == 0) {
    doc["break_sequence"] = nullptr;
    doc["encoding"] = nullptr;
  } else {
    const BreakSequence bs = break_sets(model, tr);
    auto sets = [&](const std::vector<FlawSet>& v) {
      json arr = json::array();
      for (const auto& s : v) arr.push_back(flaw_set(s, names));
      return arr;
    };
    doc["break_sequence"] = {{"b_star", sets(bs.b_star)},
                             {"b", sets(bs.b)},
                             {"collateral", sets(bs.collateral)},
                             {"lingering", sets(bs.lingering)},
                             {"lengths", bs.lengths}};
    const BitString bits = encode(bs.b_star[0], bs.lengths);
    const DecodedBreak back = decode(bits, model.flaw_count());
    const bool round_trip = back.b0_star == bs.b_star[0] && back.lengths == bs.lengths;
    const bool reconstructed = reconstruct_witness(bs.b_star, model.priority()) == w;
    const std::size_t expected = encoded_length(model.flaw_count(), bs.z, bs.b_star[0].count());
    verified = round_trip && reconstructed && bits.size() == expected;
    doc["encoding"] = {{"binary", bits.to_binary()},
                       {"hex", bits.to_hex()},
                       {"bits", bits.size()},
                       {"expected_bits", expected},
                       {"round_trip", round_trip},
                       {"reconstructed", reconstructed}};
  }
  doc["verified"] = verified;

  if (format_ == "text") {
    std::ostringstream os;
    os << man.comment_line() << "terminal " << to_string(tr.terminal) << "  Z " << tr.z << '\n';
    for (const auto& s : doc["trajectory"]) {
      os << "  " << s["state"].get<StateId>() << "  " << (s["flaw"].is_null() ? "-" : s["flaw"].get<std::string>());
      if (!s["noise"].is_null()) os << (s["noise"].get<bool>() ? "  noise" : "  principal");
      os << '\n';
    }
    os << "witness";
    for (const auto& n : witness_names) os << ' ' << n.get<std::string>();
    os << '\n';
    if (!doc["encoding"].is_null()) {
      os << "L";
      for (auto v : doc["break_sequence"]["lengths"]) os << ' ' << v.get<std::size_t>();
      os << "\nbinary " << doc["encoding"]["binary"].get<std::string>() << "\nhex " << doc["encoding"]["hex"].get<std::string>()
         << "\nbits " << doc["encoding"]["bits"].get<std::size_t>() << " (expected "
         << doc["encoding"]["expected_bits"].get<std::size_t>() << ")\n";
    }
    os << "round trip " << (verified ? "ok" : "FAILED") << '\n';
    emit(out_path_, os.str(), out_);
  } else {
    emit(out_path_, json_text(doc), out_);
  }
  return kExitOk;
}

int Dispatcher::cmd_tree() {
  const Loaded l = load(instance_path_, cap_);
  const Instance& inst = require_explicit(l.chain());
  TreeOptions opt;
  opt.cap = tree_cap_;
  opt.expand_flawless = expand_flawless_;
  opt.root = root_;

  RunManifest man{"tree",
                  l.digest,
                  {},
                  {{"x", x_},
                   {"tree_cap", tree_cap_},
                   {"expand_flawless", expand_flawless_},
                   {"root", root_ ? json(*root_) : json(nullptr)},
                   {"leaf_limit", leaf_limit_}}};

  const TruncatedTree tree = truncated_tree(inst, x_, opt);
  const Certificate c = certify(flaw_profiles(inst));
  const StratificationReport rep = verify_stratification(inst, c.bounds, {x_}, opt);

  json leaves = json::array();
  for (std::size_t i = 0; i < tree.leaves.size() && i < leaf_limit_; ++i) {
    const Leaf& lf = tree.leaves[i];
    leaves.push_back({{"path", lf.path},
                      {"prob", lf.prob},
                      {"log2_prob", lf.log2_prob},
                      {"red_length", lf.red_length},
                      {"bad", lf.bad},
                      {"kind", lf.kind == LeafKind::stratum ? "stratum" : "absorbed"}});
  }
  json checks = json::array();
  for (const auto& ch : rep.checks) checks.push_back(stratum_json(ch));
  json doc = {{"manifest", man.to_json()},
              {"x", x_},
              {"B", tree.arc_bound > 0 ? json(tree.arc_bound) : json(nullptr)},
              {"leaf_count", tree.leaves.size()},
              {"leaves", std::move(leaves)},
              {"bad_mass", bad_mass(tree)},
              {"H_P", prefix_entropy(tree)},
              {"certified", c.theorem1.certified},
              {"checks", std::move(checks)},
              {"ok", rep.ok()}};
  emit(out_path_, json_text(doc), out_);
  return kExitOk;
}

int Dispatcher::cmd_audit() {
  if (grid_.delta_max < grid_.delta_min || grid_.b_ns_max < grid_.b_ns_min || grid_.p_max_pct < grid_.p_min_pct) {
    throw ValidationError({"empty audit grid"});
  }
  RunManifest man{"audit",
                  "",
                  {},
                  {{"delta_max", grid_.delta_max}, {"b_max", grid_.b_ns_max}, {"p_min_pct", grid_.p_min_pct},
                   {"p_max_pct", grid_.p_max_pct}, {"pad", pad_}, {"format", format_}}};
  const AuditReport rep = inequality_audit(grid_);
  json doc = audit_json(grid_, rep);
  bool ok = rep.ok();
  json instances = json::array();
  json digests = json::array();
  for (const auto& path : audit_instances_) {
    const Loaded l = load(path, cap_);
    digests.push_back(l.digest);
    const Analysis a = analysis_of(l);
    CertifyOptions opt;
    opt.lambda_pad = pad_;
    const Certificate c = certify(a, opt);
    json entry = {{"instance_digest", l.digest}, {"certified", c.theorem1.certified}};
    if (c.bounds) {
      const PotentialAudit pa = audit_certified(a, c.bounds->lambda);
      entry["lambda"] = c.bounds->lambda;
      entry["ok"] = pa.ok;
      entry["witnesses"] = pa.witnesses;
      ok = ok && pa.ok;
    }
    instances.push_back(std::move(entry));
  }
  man.params["instances"] = digests;
  doc["instances"] = std::move(instances);
  doc["ok"] = ok;
  doc["manifest"] = man.to_json();
  if (format_ == "text") {
    std::ostringstream os;
    os << man.comment_line() << "grid points " << rep.points << "  entropy-chain failures "
       << rep.entropy_chain_failures << "  q-bound failures " << rep.q_bound_failures << '\n';
    for (const auto& w : rep.witnesses) os << "  " << w << '\n';
    for (const auto& e : doc["instances"]) {
      os << "  instance " << e["instance_digest"].get<std::string>()
         << (e.contains("ok") ? (e["ok"].get<bool>() ? "  ok" : "  FAIL") : "  not certified") << '\n';
    }
    os << (ok ? "audit ok" : "audit FAILED") << '\n';
    emit(out_path_, os.str(), out_);
  } else {
    emit(out_path_, json_text(doc), out_);
  }
  return kExitOk;
}

}  // namespace

const char* version() { return FLAWSIM_VERSION; }

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Dispatcher d(out, err);
  return d.run(args);
}

}  // namespace flawsim::cli
