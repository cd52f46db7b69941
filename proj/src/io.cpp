// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pmuplace/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace pmu {

namespace {

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw Error(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(where + ": non-finite numeric");
  return v;
}

Complex complex_value(const Json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error(where + ": expected [re, im]");
  return {number(j[0], where), number(j[1], where)};
}

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

CMatrix complex_matrix(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(where + ": expected a matrix of [re, im] entries");
  const auto rows = static_cast<Index>(j.size());
  CMatrix m(rows, rows);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<Index>(row.size()) != rows)
      throw Error(where + ": row " + std::to_string(r) + " must have " + std::to_string(rows) + " entries");
    for (Index c = 0; c < rows; ++c) m(r, c) = complex_value(row[c], where);
  }
  return m;
}

Json matrix_json(const CMatrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

std::string string_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw Error(where + ": missing field '" + key + "'");
  if (!obj[key].is_string()) throw Error(where + ": field '" + key + "' must be a string");
  return obj[key].get<std::string>();
}

std::string parse_phases(const Json& j, const std::string& where) {
  if (!j.is_string()) throw Error(where + ": field 'phases' must be a string such as \"abc\"");
  std::string p = j.get<std::string>();
  for (char c : p)
    if (c < 'a' || c > 'c') throw Error(where + ": field 'phases': unknown phase label '" + std::string(1, c) + "'");
  std::sort(p.begin(), p.end());
  if (p.empty() || std::adjacent_find(p.begin(), p.end()) != p.end())
    throw Error(where + ": field 'phases' must list distinct phases");
  return p;
}

// Per-phase object {"a": value, ...}; absent phases take `fallback`.
std::vector<Complex> per_phase(const Json& obj, const char* key, const std::string& phases,
                               const std::string& where) {
  std::vector<Complex> out(phases.size(), Complex(0.0));
  if (!obj.contains(key)) return out;
  const auto& field = obj[key];
  if (!field.is_object()) throw Error(where + ": field '" + key + "' must be an object keyed by phase");
  for (const auto& [label, value] : field.items()) {
    if (label.size() != 1 || phases.find(label[0]) == std::string::npos)
      throw Error(where + ": field '" + key + "': unknown phase label '" + label + "'");
    out[phases.find(label[0])] = complex_value(value, where + ": field '" + key + "'");
  }
  return out;
}

Json per_phase_json(const std::vector<Complex>& v, const std::string& phases) {
  Json out = Json::object();
  for (std::size_t p = 0; p < phases.size(); ++p) out[std::string(1, phases[p])] = complex_json(v[p]);
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

static Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

GridModel parse_grid(const Json& doc) {
  if (!doc.is_object()) throw Error("grid file: top level must be an object");
  GridModel g;
  if (!doc.contains("buses") || !doc["buses"].is_array()) throw Error("grid file: missing array 'buses'");
  if (!doc.contains("branches") || !doc["branches"].is_array())
    throw Error("grid file: missing array 'branches'");
  if (!doc.contains("source") || !doc["source"].is_object()) throw Error("grid file: missing object 'source'");

  std::set<std::string> ids;
  for (std::size_t k = 0; k < doc["buses"].size(); ++k) {
    const auto& jb = doc["buses"][k];
    if (!jb.is_object()) throw Error("bus " + std::to_string(k) + ": expected an object");
    Bus bus;
    bus.id = string_field(jb, "id", "bus " + std::to_string(k));
    const std::string where = "bus '" + bus.id + "'";
    if (!ids.insert(bus.id).second) throw Error("duplicate bus id '" + bus.id + "'");
    if (!jb.contains("phases")) throw Error(where + ": missing field 'phases'");
    bus.phases = parse_phases(jb["phases"], where);
    bus.load = per_phase(jb, "load", bus.phases, where);
    bus.shunt = per_phase(jb, "shunt", bus.phases, where);
    bus.zero_injection.assign(bus.phases.size(), false);
    if (jb.contains("zero_injection")) {
      const auto& z = jb["zero_injection"];
      if (z.is_boolean()) {
        bus.zero_injection.assign(bus.phases.size(), z.get<bool>());
      } else if (z.is_string()) {
        for (char c : z.get<std::string>()) {
          const auto pos = bus.phases.find(c);
          if (pos == std::string::npos)
            throw Error(where + ": field 'zero_injection': unknown phase label '" + std::string(1, c) + "'");
          bus.zero_injection[pos] = true;
        }
      } else {
        throw Error(where + ": field 'zero_injection' must be a boolean or a phase string");
      }
    }
    g.buses.push_back(std::move(bus));
  }

  for (std::size_t k = 0; k < doc["branches"].size(); ++k) {
    const auto& jb = doc["branches"][k];
    const std::string where = "branch " + std::to_string(k);
    if (!jb.is_object()) throw Error(where + ": expected an object");
    Branch br;
    br.from = string_field(jb, "from", where);
    br.to = string_field(jb, "to", where);
    if (jb.contains("phases")) {
      br.phases = parse_phases(jb["phases"], where);
    } else {
      const Index i = g.bus_index(br.from), j = g.bus_index(br.to);
      if (i < 0 || j < 0) throw Error(where + ": unknown bus '" + (i < 0 ? br.from : br.to) + "'");
      for (char c : g.buses[i].phases)
        if (g.buses[j].phase_position(c) >= 0) br.phases += c;
    }
    if (!jb.contains("admittance")) throw Error(where + ": missing field 'admittance'");
    br.admittance = complex_matrix(jb["admittance"], where + ": field 'admittance'");
    g.branches.push_back(std::move(br));
  }

  const auto& js = doc["source"];
  g.source.bus = string_field(js, "bus", "source");
  const Index src = g.bus_index(g.source.bus);
  if (src < 0) throw Error("source: unknown bus '" + g.source.bus + "'");
  if (!js.contains("voltage")) throw Error("source: missing field 'voltage'");
  const auto& phases = g.buses[src].phases;
  g.source.voltage = per_phase(js, "voltage", phases, "source");
  for (char c : phases)
    if (!js["voltage"].contains(std::string(1, c)))
      throw Error("source: field 'voltage' has no value for phase '" + std::string(1, c) + "'");

  if (doc.contains("prior_covariance"))
    g.prior_covariance = complex_matrix(doc["prior_covariance"], "field 'prior_covariance'");

  g.validate();
  return g;
}

GridModel load_grid(const std::string& path) {
  try {
    return parse_grid(parse_json_file(path));
  } catch (const Json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

Json grid_to_json(const GridModel& model) {
  Json doc;
  Json buses = Json::array();
  for (const auto& bus : model.buses) {
    Json jb;
    jb["id"] = bus.id;
    jb["phases"] = bus.phases;
    jb["load"] = per_phase_json(bus.load, bus.phases);
    if (std::any_of(bus.shunt.begin(), bus.shunt.end(), [](Complex z) { return z != Complex(0.0); }))
      jb["shunt"] = per_phase_json(bus.shunt, bus.phases);
    std::string zi;
    for (std::size_t p = 0; p < bus.phases.size(); ++p)
      if (bus.zero_injection[p]) zi += bus.phases[p];
    if (!zi.empty()) jb["zero_injection"] = zi;
    buses.push_back(std::move(jb));
  }
  Json branches = Json::array();
  for (const auto& br : model.branches)
    branches.push_back({{"from", br.from}, {"to", br.to}, {"phases", br.phases},
                        {"admittance", matrix_json(br.admittance)}});
  doc["buses"] = std::move(buses);
  doc["branches"] = std::move(branches);
  const Index src = model.source_index();
  doc["source"] = {{"bus", model.source.bus},
                   {"voltage", per_phase_json(model.source.voltage, model.buses.at(src).phases)}};
  if (model.prior_covariance) doc["prior_covariance"] = matrix_json(*model.prior_covariance);
  return doc;
}

std::vector<CostRule> parse_cost_map(const Json& doc) {
  const Json& list = doc.is_object() && doc.contains("costs") ? doc["costs"] : doc;
  if (!list.is_array()) throw Error("cost map: expected an array of rules or {\"costs\": [...]}");
  std::vector<CostRule> rules;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto& j = list[k];
    const std::string where = "cost rule " + std::to_string(k);
    if (!j.is_object()) throw Error(where + ": expected an object");
    CostRule r;
    for (const char* key : {"kind", "bus", "to", "phase"})
      if (j.contains(key)) {
        const std::string v = string_field(j, key, where);
        if (std::string(key) == "kind") r.kind = v;
        else if (std::string(key) == "bus") r.bus = v;
        else if (std::string(key) == "to") r.to = v;
        else r.phase = v;
      }
    if (r.kind != "*" && r.kind != "voltage" && r.kind != "current" && r.kind != "branch")
      throw Error(where + ": unknown kind '" + r.kind + "'");
    if (!j.contains("cost")) throw Error(where + ": missing field 'cost'");
    r.cost = number(j["cost"], where + ": field 'cost'");
    rules.push_back(std::move(r));
  }
  return rules;
}

std::vector<CostRule> load_cost_map(const std::string& path) {
  try {
    return parse_cost_map(parse_json_file(path));
  } catch (const Json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<MeasuredValue> load_measurements(const std::string& path) {
  const Json doc = parse_json_file(path);
  const Json& list = doc.is_object() && doc.contains("measurements") ? doc["measurements"] : doc;
  if (!list.is_array()) throw Error(path + ": expected {\"measurements\": [...]}");
  std::vector<MeasuredValue> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = path + ": measurement " + std::to_string(k);
    const auto& j = list[k];
    if (!j.is_object() || !j.contains("value")) throw Error(where + ": expected {candidate, value}");
    out.push_back({string_field(j, "candidate", where), complex_value(j["value"], where)});
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (sweep.empty()) throw Error("sweep must contain at least one value");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!(sweep[i] > 0.0) || !std::isfinite(sweep[i])) throw Error("sweep values must be positive");
    if (i > 0 && !(sweep[i] > sweep[i - 1])) throw Error("sweep values must be strictly increasing");
    if (kind == Constraint::Kind::Cardinality && sweep[i] != std::floor(sweep[i]))
      throw Error("cardinality sweep values must be integers");
  }
  if (solve.samples < 0) throw Error("sample count must be non-negative");
  if (!(problem.sigma_psd >= 0.0) || !(problem.noise.sigma_mag > 0.0) || !(problem.noise.sigma_ang > 0.0))
    throw Error("noise parameters must be positive");
}

Json config_to_json(const ExperimentConfig& c) {
  return {{"grid", c.grid_path},
          {"metric", to_string(c.metric)},
          {"constraint", to_string(c.kind)},
          {"sweep", c.sweep},
          {"cost_map", c.cost_path},
          {"normalize_costs", c.problem.normalize_costs},
          {"sigma_psd", c.problem.sigma_psd},
          {"sigma_mag", c.problem.noise.sigma_mag},
          {"sigma_ang", c.problem.noise.sigma_ang},
          {"samples", c.solve.samples},
          {"seed", c.solve.seed},
          {"online_from_greedy", c.solve.online_from_greedy},
          {"pgd", {{"alpha", c.solve.pgd.alpha},
                   {"max_iterations", c.solve.pgd.max_iterations},
                   {"tolerance", c.solve.pgd.tolerance}}}};
}

Json report_to_json(const BoundReport& rep, const PlacementInstance<Complex>& inst, const CandidateSet& candidates) {
  Json j;
  j["level"] = rep.constraint.level;
  j["constraint"] = to_string(rep.constraint.kind);
  j["metric"] = to_string(rep.metric);
  j["status"] = "ok";
  j["empty_value"] = rep.empty_value;
  Json values = Json::object();
  for (const auto& [name, s] : rep.values) values[name] = {{"value", s.value}, {"role", to_string(s.role)}};
  j["series"] = std::move(values);
  j["lower"] = rep.lower;
  j["upper"] = rep.upper;
  j["gap"] = rep.gap;
  j["valid"] = rep.valid;

  Json placements = Json::object();
  for (const auto& [name, set] : rep.placements) {
    Json labels = Json::array();
    double cost = 0.0;
    for (Index i : inst.to_original(set)) {
      labels.push_back(candidates.descriptors[i].label());
      cost += candidates.cost(i);
    }
    placements[name] = {{"candidates", std::move(labels)}, {"count", set.size()}, {"cost", cost}};
  }
  j["placements"] = std::move(placements);

  Json random = {{"samples", rep.random_values.size()}};
  if (!rep.random_values.empty()) {
    random["min"] = *std::min_element(rep.random_values.begin(), rep.random_values.end());
    random["max"] = *std::max_element(rep.random_values.begin(), rep.random_values.end());
    random["values"] = rep.random_values;
  }
  j["random"] = std::move(random);
  j["convex"] = {{"iterations", rep.convex_iterations}, {"converged", rep.convex_converged}};
  if (rep.gamma) {
    Json f = {{"gamma", *rep.gamma}};
    if (rep.beta) f["beta"] = *rep.beta;
    if (rep.beta_a) f["beta_a"] = *rep.beta_a;
    j["factors"] = std::move(f);
  }
  return j;
}

SweepResult run_sweep(const ExperimentConfig& config, const PlacementProblem& problem) {
  config.validate();
  SweepResult out;
  out.results["format"] = "pmuplace-results";
  out.results["version"] = 1;
  out.results["config"] = config_to_json(config);
  out.results["state_dim"] = problem.subspace.basis.rows();
  out.results["reduced_dim"] = problem.subspace.basis.cols();
  out.results["candidates"] = problem.candidates.size();
  Json records = Json::array();
  for (std::size_t k = 0; k < config.sweep.size(); ++k) {
    const double level = config.sweep[k];
    const Constraint constraint = config.kind == Constraint::Kind::Budget
                                      ? Constraint::budget(level)
                                      : Constraint::cardinality(static_cast<Index>(level));
    try {
      const auto inst = problem.instance(constraint, config.metric);
      SolveOptions opts = config.solve;
      opts.seed = config.solve.seed + k;
      const BoundReport rep = solve_bounds(inst, opts);
      Json rec = report_to_json(rep, inst, problem.candidates);
      if (!rep.valid) {
        rec["status"] = "error";
        rec["error"] = "lower bound exceeds upper bound";
        out.all_ok = false;
      }
      records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      records.push_back({{"level", level}, {"constraint", to_string(config.kind)},
                         {"metric", to_string(config.metric)}, {"status", "error"}, {"error", e.what()}});
      out.all_ok = false;
    }
  }
  out.results["records"] = std::move(records);
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const GridModel model = load_grid(config.grid_path);
  ProblemOptions opts = config.problem;
  if (!config.cost_path.empty()) opts.costs = load_cost_map(config.cost_path);
  return run_sweep(config, build_problem(model, opts));
}

std::string emit_curves(const Json& results) {
  static const std::vector<std::string> order = {
      series::kConvex,   series::kConvexCertified,  series::kGreedyCorrected, series::kGreedy1Corrected,
      series::kGreedy1aCorrected, series::kOnline, series::kFeasible, series::kGreedy,
      series::kGreedy1,  series::kGreedy2,          series::kGreedy1a};
  if (!results.contains("records") || !results["records"].is_array())
    throw Error("results: missing array 'records'");
  std::vector<const Json*> ok;
  for (const auto& rec : results["records"])
    if (rec.value("status", "") == "ok") ok.push_back(&rec);

  std::vector<std::string> columns;
  for (const auto& name : order) {
    const bool everywhere = !ok.empty() && std::all_of(ok.begin(), ok.end(), [&](const Json* r) {
      return (*r)["series"].contains(name);
    });
    if (everywhere) columns.push_back(name);
  }
  const bool random = !ok.empty() && std::all_of(ok.begin(), ok.end(), [](const Json* r) {
    return r->contains("random") && (*r)["random"].contains("min");
  });

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream csv;
  csv << "level";
  for (const auto& c : columns) csv << "," << c;
  csv << ",lower,upper";
  if (random) csv << ",random_min,random_max";
  csv << "\n";
  for (const Json* r : ok) {
    csv << fmt((*r)["level"].get<double>());
    for (const auto& c : columns) csv << "," << fmt((*r)["series"][c]["value"].get<double>());
    csv << "," << fmt((*r)["lower"].get<double>()) << "," << fmt((*r)["upper"].get<double>());
    if (random) csv << "," << fmt((*r)["random"]["min"].get<double>()) << "," << fmt((*r)["random"]["max"].get<double>());
    csv << "\n";
  }
  return csv.str();
}

}  // namespace pmu
