#include "flawsim/instance_io.hpp"

#include <cstdio>
#include <fstream>

#include "flawsim/error.hpp"

namespace flawsim {
namespace {

using nlohmann::json;

json row_to_json(std::span<const Arc> row) {
  json r = json::array();
  for (const auto& a : row) r.push_back({a.target, a.prob});
  return r;
}

std::vector<Arc> row_from_json(const json& j) {
  std::vector<Arc> row;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw ValidationError({"row entries must be [state, probability] pairs"});
    row.push_back({pair[0].get<StateId>(), pair[1].get<double>()});
  }
  return row;
}

std::map<StateId, std::vector<Arc>> rows_from_json(const json& j) {
  std::map<StateId, std::vector<Arc>> rows;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2) throw ValidationError({"rows must be [source, [[target, p], ...]]"});
    const auto src = entry[0].get<StateId>();
    if (!rows.emplace(src, row_from_json(entry[1])).second) {
      throw ValidationError({"duplicate row for state " + std::to_string(src)});
    }
  }
  return rows;
}

json initial_to_json(const InitialCondition& init) {
  if (const auto* s = std::get_if<StateId>(&init)) return {{"state", *s}};
  return {{"distribution", row_to_json(std::get<Distribution>(init).arcs())}};
}

NoiseModel noise_model_from_json(const json& j) {
  const auto kind = j.at("model").get<std::string>();
  if (kind == "selfloop") return NoiseModel::selfloop();
  if (kind == "uniform") return NoiseModel::uniform();
  if (kind == "point") return NoiseModel::point(j.at("target").get<StateId>());
  if (kind == "greedy_adversarial") {
    const auto c = j.value("candidates", std::string("principal_support"));
    return NoiseModel::greedy(c == "single_variable" ? NoiseModel::Candidates::single_variable
                                                     : NoiseModel::Candidates::principal_support);
  }
  throw ValidationError({"unknown noise model " + kind});
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json doc;
  doc["format"] = "flawsim-instance/1";
  if (inst.widths().empty()) {
    doc["states"] = inst.state_count();
  } else {
    doc["states"] = {{"count", inst.state_count()}, {"widths", inst.widths()}};
  }
  doc["flaws"] = json::array();
  for (FlawId f = 0; f < inst.flaw_count(); ++f) {
    doc["flaws"].push_back({{"name", inst.flaw_names()[f]}, {"members", inst.members(f)}});
  }
  doc["priority"] = json::array();
  for (FlawId f : inst.priority().order()) doc["priority"].push_back(inst.flaw_names()[f]);
  // Flawless principal rows and unit noise self-loops are implied.
  doc["principal"] = json::array();
  doc["noise"] = json::array();
  for (StateId s = 0; s < inst.state_count(); ++s) {
    if (inst.is_flawed(s)) doc["principal"].push_back({s, row_to_json(inst.principal(s).arcs())});
    const auto& ns = inst.noise(s);
    if (!(ns.size() == 1 && ns.arcs()[0].target == s)) doc["noise"].push_back({s, row_to_json(ns.arcs())});
  }
  doc["p"] = inst.p();
  doc["initial"] = initial_to_json(inst.initial());
  return doc;
}

json instance_to_json(const GeneratedModel& model) {
  if (const auto* inst = std::get_if<Instance>(&model)) return instance_to_json(*inst);
  const auto& imp = std::get<ImplicitInstance>(model);
  json doc;
  doc["format"] = "flawsim-instance/1";
  doc["states"] = {{"count", imp.state_count()}, {"widths", imp.widths()}};
  doc["generator"] = json::parse(imp.descriptor());
  doc["p"] = imp.p();
  doc["initial"] = initial_to_json(imp.initial());
  return doc;
}

RawInstance raw_from_json(const json& doc) {
  RawInstance raw;
  const auto& st = doc.at("states");
  if (st.is_number_integer()) {
    raw.state_count = st.get<std::uint64_t>();
  } else {
    raw.widths = st.at("widths").get<std::vector<std::uint32_t>>();
    std::uint64_t prod = 1;
    for (auto w : raw.widths) prod *= w;
    raw.state_count = st.value("count", prod);
  }
  for (const auto& f : doc.value("flaws", json::array())) {
    raw.flaws.push_back({f.value("name", std::string{}), f.at("members").get<std::vector<StateId>>()});
  }
  raw.priority = doc.value("priority", std::vector<std::string>{});
  if (doc.contains("principal")) raw.principal = rows_from_json(doc["principal"]);
  if (doc.contains("noise")) raw.noise = rows_from_json(doc["noise"]);
  raw.p = doc.value("p", 0.0);
  if (doc.contains("initial")) {
    const auto& init = doc["initial"];
    if (init.contains("distribution")) {
      std::vector<Arc> arcs = row_from_json(init["distribution"]);
      std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.target < b.target; });
      raw.initial = Distribution::from_sorted_unchecked(std::move(arcs));
    } else {
      raw.initial = init.at("state").get<StateId>();
    }
  }
  return raw;
}

GeneratedModel model_from_json(const json& doc, std::uint64_t cap) {
  try {
    if (!doc.contains("generator")) return validate_instance(raw_from_json(doc));
    const auto& g = doc["generator"];
    const auto kind = g.at("kind").get<std::string>();
    GeneratedModel base = [&]() -> GeneratedModel {
      if (kind == "coloring") {
        std::vector<Edge> edges;
        for (const auto& e : g.at("edges")) edges.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>()});
        return gen_coloring(g.at("vertices").get<std::uint32_t>(), edges, g.at("q").get<std::uint32_t>(), cap);
      }
      if (kind == "ksat") {
        return gen_ksat(g.at("variables").get<std::uint32_t>(), g.at("clauses").get<std::vector<std::vector<int>>>(),
                        cap);
      }
      throw ValidationError({"unknown generator kind " + kind});
    }();
    if (g.contains("noise_model")) {
      return attach_noise(base, noise_model_from_json(g["noise_model"]), g.value("p", doc.value("p", 0.0)));
    }
    return base;
  } catch (const json::exception& e) {
    throw ValidationError({std::string("malformed instance document: ") + e.what()});
  }
}

GeneratedModel load_model(const std::string& path, std::uint64_t cap) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"cannot open " + path});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("instance file does not parse: ") + e.what()});
  }
  return model_from_json(doc, cap);
}

std::string instance_digest(const json& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace flawsim
