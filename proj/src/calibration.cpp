#include "qbudget/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qbudget {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string qubit_tag(int q) { return "qubit " + std::to_string(q); }

std::string gate_tag(const GateCalibration& g) {
  std::string s = "gate " + g.name + "(";
  for (std::size_t i = 0; i < g.qubits.size(); ++i) s += (i ? "," : "") + std::to_string(g.qubits[i]);
  return s + ")";
}

void check_probability(double p, const std::string& what, const std::string& who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(who + ": " + what + " = " + std::to_string(p) + " outside [0, 1]");
  }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& who) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(who + ": missing mandatory field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(who + ": field '" + key + "' has the wrong type");
  }
}

double time_or_inf(const json& obj, const char* key, const std::string& who) {
  if (!obj.contains(key)) throw ValidationError(who + ": missing mandatory field '" + key + "'");
  if (obj.at(key).is_null()) return kInf;
  return require<double>(obj, key, who);
}

void warn_unknown(const json& obj, std::initializer_list<std::string_view> known,
                  const std::string& where, std::vector<std::string>& warnings) {
  if (!obj.is_object()) return;
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      warnings.push_back("ignored unknown field '" + key + "' in " + where);
    }
  }
}

LoadedCalibration load_native(const json& doc) {
  LoadedCalibration out;
  auto& cal = out.calibration;
  auto& warnings = out.warnings;
  warn_unknown(doc, {"name", "n_qubits", "coupling", "measure_duration_ns", "qubits", "gates"},
               "document", warnings);
  cal.name = require<std::string>(doc, "name", "document");
  cal.num_qubits = require<int>(doc, "n_qubits", "document");
  cal.measure_duration_ns = require<double>(doc, "measure_duration_ns", "document");
  for (const auto& edge : require<json>(doc, "coupling", "document")) {
    if (!edge.is_array() || edge.size() != 2) throw ValidationError("coupling entries must be pairs");
    cal.coupling.emplace_back(edge[0].get<int>(), edge[1].get<int>());
  }
  const auto qubits = require<json>(doc, "qubits", "document");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto& q = qubits[i];
    const std::string who = qubit_tag(static_cast<int>(i));
    warn_unknown(q, {"t1_us", "t2_us", "readout_error", "p01", "p10"}, who, warnings);
    QubitCalibration qc;
    qc.t1_us = time_or_inf(q, "t1_us", who);
    qc.t2_us = time_or_inf(q, "t2_us", who);
    qc.readout_error = require<double>(q, "readout_error", who);
    if (q.contains("p01")) qc.p01 = require<double>(q, "p01", who);
    if (q.contains("p10")) qc.p10 = require<double>(q, "p10", who);
    cal.qubits.push_back(qc);
  }
  const auto gates = require<json>(doc, "gates", "document");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& g = gates[i];
    const std::string who = "gate entry " + std::to_string(i);
    warn_unknown(g, {"name", "qubits", "error", "duration_ns"}, who, warnings);
    GateCalibration gc;
    gc.name = require<std::string>(g, "name", who);
    gc.qubits = require<std::vector<int>>(g, "qubits", who);
    gc.error = require<double>(g, "error", who);
    gc.duration_ns = require<double>(g, "duration_ns", who);
    cal.add_gate(std::move(gc));
  }
  return out;
}

double time_scale(const std::string& unit, const std::string& who) {
  if (unit == "ns") return 1.0;
  if (unit == "us" || unit == "\xc2\xb5s") return 1e3;
  if (unit == "ms") return 1e6;
  if (unit == "s") return 1e9;
  throw ValidationError(who + ": unsupported time unit '" + unit + "'");
}

// Scale factors are exact powers of ten, so divide rather than multiply by
// their reciprocals to keep round values round.
double to_microseconds(double value, const std::string& unit, const std::string& who) {
  const double s = time_scale(unit, who);
  return s < 1e3 ? value / (1e3 / s) : value * (s / 1e3);
}

double to_nanoseconds(double value, const std::string& unit, const std::string& who) {
  return value * time_scale(unit, who);
}

// Vendor properties export: every quantity is a {name, value, unit} record.
LoadedCalibration load_vendor(const json& doc) {
  LoadedCalibration out;
  auto& cal = out.calibration;
  auto& warnings = out.warnings;
  warn_unknown(doc,
               {"backend_name", "backend_version", "last_update_date", "qubits", "gates", "general"},
               "document", warnings);
  cal.name = require<std::string>(doc, "backend_name", "document");
  const auto qubits = require<json>(doc, "qubits", "document");
  cal.num_qubits = static_cast<int>(qubits.size());
  double readout_length = 0.0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const std::string who = qubit_tag(static_cast<int>(i));
    std::optional<double> t1, t2, ro;
    QubitCalibration qc;
    for (const auto& rec : qubits[i]) {
      const auto name = require<std::string>(rec, "name", who);
      const auto value = require<double>(rec, "value", who);
      const std::string unit = rec.value("unit", "");
      if (name == "T1") {
        t1 = to_microseconds(value, unit, who);
      } else if (name == "T2") {
        t2 = to_microseconds(value, unit, who);
      } else if (name == "readout_error") {
        ro = value;
      } else if (name == "prob_meas0_prep1") {
        qc.p01 = value;
      } else if (name == "prob_meas1_prep0") {
        qc.p10 = value;
      } else if (name == "readout_length") {
        readout_length = std::max(readout_length, to_nanoseconds(value, unit, who));
      } else {
        warnings.push_back("ignored qubit property '" + name + "' on " + who);
      }
    }
    if (!t1) throw ValidationError(who + ": missing mandatory field 'T1'");
    if (!t2) throw ValidationError(who + ": missing mandatory field 'T2'");
    if (!ro) throw ValidationError(who + ": missing mandatory field 'readout_error'");
    qc.t1_us = *t1;
    qc.t2_us = *t2;
    qc.readout_error = *ro;
    cal.qubits.push_back(qc);
  }
  cal.measure_duration_ns = readout_length;
  std::set<std::pair<int, int>> edges;
  const auto gates = require<json>(doc, "gates", "document");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& g = gates[i];
    const std::string who = "gate entry " + std::to_string(i);
    warn_unknown(g, {"gate", "qubits", "parameters", "name"}, who, warnings);
    GateCalibration gc;
    gc.name = require<std::string>(g, "gate", who);
    gc.qubits = require<std::vector<int>>(g, "qubits", who);
    std::optional<double> err, len;
    for (const auto& p : require<json>(g, "parameters", who)) {
      const auto name = require<std::string>(p, "name", who);
      if (name == "gate_error") {
        err = require<double>(p, "value", who);
      } else if (name == "gate_length") {
        len = to_nanoseconds(require<double>(p, "value", who), p.value("unit", "ns"), who);
      } else {
        warnings.push_back("ignored gate parameter '" + name + "' on " + who);
      }
    }
    if (!err) throw ValidationError(who + ": missing mandatory field 'gate_error'");
    if (!len) throw ValidationError(who + ": missing mandatory field 'gate_length'");
    gc.error = *err;
    gc.duration_ns = *len;
    if (gc.qubits.size() == 2) {
      edges.insert({std::min(gc.qubits[0], gc.qubits[1]), std::max(gc.qubits[0], gc.qubits[1])});
    }
    cal.add_gate(std::move(gc));
  }
  cal.coupling.assign(edges.begin(), edges.end());
  return out;
}

json time_json(double t) { return std::isinf(t) ? json(nullptr) : json(t); }

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

void BackendCalibration::add_gate(GateCalibration g) {
  GateKey key{g.name, g.qubits};
  gates[std::move(key)] = std::move(g);
}

const GateCalibration* BackendCalibration::find_gate(std::string_view gate,
                                                     const std::vector<int>& qs) const {
  GateKey key{std::string(gate), qs};
  if (auto it = gates.find(key); it != gates.end()) return &it->second;
  if (qs.size() == 2) {
    key.second = {qs[1], qs[0]};
    if (auto it = gates.find(key); it != gates.end()) return &it->second;
  }
  return nullptr;
}

bool BackendCalibration::coupled(int a, int b) const { return coupling_map().coupled(a, b); }

double BackendCalibration::median_1q_duration_ns() const {
  std::vector<double> d;
  for (const auto& [_, g] : gates) {
    if (g.qubits.size() == 1 && g.duration_ns > 0.0) d.push_back(g.duration_ns);
  }
  if (d.empty()) return 0.0;
  std::sort(d.begin(), d.end());
  const std::size_t m = d.size() / 2;
  return d.size() % 2 ? d[m] : 0.5 * (d[m - 1] + d[m]);
}

void BackendCalibration::validate() const {
  if (num_qubits < 1) throw ValidationError("backend must have at least one qubit");
  if (static_cast<int>(qubits.size()) != num_qubits) {
    throw ValidationError("n_qubits = " + std::to_string(num_qubits) + " but " +
                          std::to_string(qubits.size()) + " qubit entries");
  }
  if (!(measure_duration_ns >= 0.0) || !std::isfinite(measure_duration_ns)) {
    throw ValidationError("measure_duration_ns must be finite and >= 0");
  }
  for (const auto& [a, b] : coupling) {
    if (a < 0 || b < 0 || a >= num_qubits || b >= num_qubits || a == b) {
      throw ValidationError("coupling edge (" + std::to_string(a) + "," + std::to_string(b) +
                            ") references invalid qubits");
    }
  }
  for (int q = 0; q < num_qubits; ++q) {
    const auto& qc = qubits[q];
    const std::string who = qubit_tag(q);
    if (!(qc.t1_us > 0.0)) throw ValidationError(who + ": t1 must be > 0");
    if (!(qc.t2_us > 0.0)) throw ValidationError(who + ": t2 must be > 0");
    if (qc.t2_us > 2.0 * qc.t1_us) {
      throw ValidationError(who + ": t2 = " + std::to_string(qc.t2_us) + " us exceeds 2*t1 = " +
                            std::to_string(2.0 * qc.t1_us) + " us");
    }
    check_probability(qc.readout_error, "readout_error", who);
    if (qc.p01) check_probability(*qc.p01, "p01", who);
    if (qc.p10) check_probability(*qc.p10, "p10", who);
  }
  for (const auto& [_, g] : gates) {
    const std::string who = gate_tag(g);
    if (g.qubits.empty()) throw ValidationError(who + ": no qubits");
    for (int q : g.qubits) {
      if (q < 0 || q >= num_qubits) throw ValidationError(who + ": references missing qubit");
    }
    check_probability(g.error, "error", who);
    if (!std::isfinite(g.duration_ns) || g.duration_ns < 0.0) {
      throw ValidationError(who + ": duration must be finite and >= 0");
    }
    if (g.name == "cx" && (g.qubits.size() != 2 || !coupled(g.qubits[0], g.qubits[1]))) {
      throw ValidationError(who + ": cx entry not on a coupling edge");
    }
  }
}

LoadedCalibration load_calibration(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("calibration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("calibration document must be an object");
  const bool vendor = doc.contains("backend_name") ||
                      (doc.contains("qubits") && doc["qubits"].is_array() &&
                       !doc["qubits"].empty() && doc["qubits"][0].is_array());
  LoadedCalibration out = vendor ? load_vendor(doc) : load_native(doc);
  out.calibration.validate();
  return out;
}

LoadedCalibration load_calibration_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open calibration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_calibration(ss.str());
}

std::string dump_calibration(const BackendCalibration& cal) {
  json doc;
  doc["name"] = cal.name;
  doc["n_qubits"] = cal.num_qubits;
  doc["measure_duration_ns"] = cal.measure_duration_ns;
  doc["coupling"] = json::array();
  for (const auto& [a, b] : cal.coupling) doc["coupling"].push_back({a, b});
  doc["qubits"] = json::array();
  for (const auto& q : cal.qubits) {
    json j{{"t1_us", time_json(q.t1_us)},
           {"t2_us", time_json(q.t2_us)},
           {"readout_error", q.readout_error}};
    if (q.p01) j["p01"] = *q.p01;
    if (q.p10) j["p10"] = *q.p10;
    doc["qubits"].push_back(j);
  }
  doc["gates"] = json::array();
  for (const auto& [_, g] : cal.gates) {
    doc["gates"].push_back(
        {{"name", g.name}, {"qubits", g.qubits}, {"error", g.error}, {"duration_ns", g.duration_ns}});
  }
  return doc.dump(2) + "\n";
}

Topology parse_topology(std::string_view s) {
  if (s == "line") return Topology::Line;
  if (s == "ring") return Topology::Ring;
  if (s == "full") return Topology::Full;
  throw ValidationError("unknown topology '" + std::string(s) + "' (line, ring, full)");
}

std::string_view topology_name(Topology t) {
  switch (t) {
    case Topology::Line:
      return "line";
    case Topology::Ring:
      return "ring";
    case Topology::Full:
      return "full";
  }
  return "?";
}

BackendCalibration synth_calibration(std::uint64_t seed, int num_qubits, Topology topology) {
  if (num_qubits < 1) throw ValidationError("synth_calibration needs at least one qubit");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  BackendCalibration cal;
  cal.name = "synth-" + std::to_string(seed) + "-" + std::string(topology_name(topology)) +
             std::to_string(num_qubits);
  cal.num_qubits = num_qubits;
  for (int a = 0; a < num_qubits; ++a) {
    for (int b = a + 1; b < num_qubits; ++b) {
      const bool edge = topology == Topology::Full || b == a + 1 ||
                        (topology == Topology::Ring && a == 0 && b == num_qubits - 1 &&
                         num_qubits > 2);
      if (edge) cal.coupling.emplace_back(a, b);
    }
  }
  cal.measure_duration_ns = uniform(500.0, 5000.0);
  for (int q = 0; q < num_qubits; ++q) {
    QubitCalibration qc;
    qc.t1_us = uniform(50.0, 300.0);
    qc.t2_us = uniform(0.5 * qc.t1_us, 2.0 * qc.t1_us);
    qc.readout_error = log_uniform(rng, 5e-3, 5e-2);
    cal.qubits.push_back(qc);

    const double err = log_uniform(rng, 1e-4, 1e-3);
    const double len = uniform(20.0, 70.0);
    cal.add_gate({"rz", {q}, 0.0, 0.0});
    cal.add_gate({"sx", {q}, err, len});
    cal.add_gate({"x", {q}, err, len});
  }
  for (const auto& [a, b] : cal.coupling) {
    cal.add_gate({"cx", {a, b}, log_uniform(rng, 1e-3, 1e-2), uniform(200.0, 600.0)});
  }
  return cal;
}

BackendCalibration without_gate_errors(BackendCalibration cal) {
  for (auto& [_, g] : cal.gates) g.error = 0.0;
  return cal;
}

BackendCalibration without_decoherence(BackendCalibration cal) {
  for (auto& q : cal.qubits) q.t1_us = q.t2_us = kInf;
  return cal;
}

BackendCalibration without_readout_errors(BackendCalibration cal) {
  for (auto& q : cal.qubits) {
    q.readout_error = 0.0;
    if (q.p01) q.p01 = 0.0;
    if (q.p10) q.p10 = 0.0;
  }
  return cal;
}

}  // namespace qbudget
