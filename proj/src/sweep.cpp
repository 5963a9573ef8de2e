#include "qbudget/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <random>
#include <sstream>

#include "qbudget/estimator.hpp"
#include "qbudget/mitigation.hpp"
#include "qbudget/models.hpp"
#include "qbudget/observables.hpp"

namespace qbudget {

std::string_view model_name(ModelId id) {
  switch (id) {
    case ModelId::Ising:
      return "ising";
    case ModelId::Qpe:
      return "qpe";
    case ModelId::Grover2:
      return "grover2";
    case ModelId::Grover3:
      return "grover3";
  }
  return "?";
}

ModelId parse_model(std::string_view s) {
  for (ModelId id : {ModelId::Ising, ModelId::Qpe, ModelId::Grover2, ModelId::Grover3}) {
    if (s == model_name(id)) return id;
  }
  throw ValidationError("unknown model '" + std::string(s) + "' (ising, qpe, grover2, grover3)");
}

namespace {

/// Model column value; qpe rows carry t unless it is the default 3.
std::string row_model_id(const ModelInstance& m) {
  if (m.id == ModelId::Qpe && m.register_size != 3) {
    return "qpe-t" + std::to_string(m.register_size);
  }
  return std::string(model_name(m.id));
}

int qpe_t_from_id(const std::string& id) {
  if (id == "qpe") return 3;
  return std::stoi(id.substr(5));
}

}  // namespace

ModelInstance make_model(ModelId id, const ModelOptions& opts) {
  ModelInstance m{id, {}, {}, "none", std::numeric_limits<double>::quiet_NaN(), 0};
  Circuit c;
  switch (id) {
    case ModelId::Ising:
      c = build_ising_ground_circuit(opts.lambda);
      m.observable = "magnetization_ratio";
      m.register_size = kIsingSites;
      break;
    case ModelId::Qpe:
      c = build_qpe_x_plus(opts.qpe_t);
      m.observable = "phase";
      m.register_size = opts.qpe_t;
      break;
    case ModelId::Grover2:
      c = build_grover(2, opts.grover_target);
      break;
    case ModelId::Grover3:
      c = build_grover(3, opts.grover_target);
      break;
  }
  m.logical = lower_to_basis(c);
  m.ideal = simulate_ideal(m.logical).distribution;
  m.observable_sim = model_observable(m, m.ideal);
  return m;
}

double model_observable(const ModelInstance& m, const Distribution& dist) {
  if (m.observable == "magnetization_ratio") return magnetization(dist);
  if (m.observable == "phase") return phase_estimate(dist);
  return std::numeric_limits<double>::quiet_NaN();
}

std::string_view noise_mode_name(NoiseMode m) {
  switch (m) {
    case NoiseMode::Full:
      return "full";
    case NoiseMode::ReadoutOnly:
      return "readout-only";
    case NoiseMode::None:
      return "none";
  }
  return "?";
}

NoiseMode parse_noise_mode(std::string_view s) {
  for (NoiseMode m : {NoiseMode::Full, NoiseMode::ReadoutOnly, NoiseMode::None}) {
    if (s == noise_mode_name(m)) return m;
  }
  throw ValidationError("unknown noise mode '" + std::string(s) + "' (full, readout-only, none)");
}

BackendCalibration apply_noise_mode(const BackendCalibration& cal, NoiseMode mode) {
  switch (mode) {
    case NoiseMode::ReadoutOnly:
      return readout_only(cal);
    case NoiseMode::None:
      return noiseless(cal);
    case NoiseMode::Full:
      break;
  }
  return cal;
}

Topology default_topology(ModelId id) {
  return id == ModelId::Ising || id == ModelId::Grover2 ? Topology::Ring : Topology::Full;
}

int default_backend_qubits(ModelId id) {
  return id == ModelId::Ising || id == ModelId::Grover2 ? 8 : 6;
}

std::pair<double, bool> evaluate_bound(const SweepRow& row) {
  if (row.model == "ising") {
    const double bound = 1.0 - 2.0 * kIsingSites * row.p_total / std::abs(row.observable_sim);
    return {bound, row.observable_phys / row.observable_sim >= bound};
  }
  if (row.model.starts_with("qpe")) {
    const double scale = std::ldexp(1.0, qpe_t_from_id(row.model));
    const double bound = row.p_total * (scale - 1.0) / scale;
    return {bound, std::abs(row.observable_phys - row.observable_sim) <= bound};
  }
  return {row.s_total, row.avg_state_fidelity >= row.s_total};
}

std::vector<std::size_t> spread_indices(std::size_t total, std::size_t count) {
  std::vector<std::size_t> out;
  if (total == 0 || count == 0) return out;
  if (count >= total) {
    for (std::size_t i = 0; i < total; ++i) out.push_back(i);
    return out;
  }
  if (count == 1) return {0};
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back((i * (total - 1) + (count - 1) / 2) / (count - 1));
  }
  return out;
}

namespace {

SweepRow run_row(const ModelInstance& model, const BackendCalibration& cal, const Layout& layout,
                 const SweepConfig& config, std::uint64_t seed) {
  const Circuit physical = apply_layout(model.logical, layout, cal.coupling_map());
  SweepRow row;
  row.model = row_model_id(model);
  row.backend = cal.name;
  row.layout = layout.physical;
  row.shots = config.shots;
  row.seed = seed;
  const ErrorBudget budget = success_probability(physical, cal, true);
  row.s_total = budget.success;
  row.p_total = budget.error;
  const RunResult run = simulate_noisy(physical, cal, config.shots, row.seed);
  row.avg_state_fidelity = run.avg_state_fidelity;
  row.clean_fraction = run.clean_fraction;
  const Distribution phys = to_distribution(run.counts);
  row.classical_fidelity = classical_fidelity(model.ideal, phys);
  row.observable = model.observable;
  row.observable_sim = model.observable_sim;
  row.observable_phys = model_observable(model, phys);
  std::tie(row.bound_value, row.within_bound) = evaluate_bound(row);

  if (config.mitigate) {
    row.s_total_no_meas = success_probability(physical, cal, false).success;
    const MitigationMatrix mm = exact_mitigation_matrix(cal, readout_layout(physical));
    const MitigatedCounts mc = mitigate_counts(mm, run.counts);
    row.classical_fidelity_mitigated = classical_fidelity(model.ideal, to_distribution(mc));
    row.within_bound_mitigated = *row.classical_fidelity_mitigated >= *row.s_total_no_meas;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.backends < 1 || config.layouts_per_backend < 1) {
    throw ValidationError("sweep needs at least one backend and one layout");
  }
  const ModelInstance model = make_model(config.model, config.options);
  const Topology topo = config.topology.value_or(default_topology(config.model));
  const int nq = config.backend_qubits > 0 ? config.backend_qubits : default_backend_qubits(config.model);
  std::mt19937_64 seeds(config.seed);

  // Seeds and placements are fixed serially in (backend, layout) order; the
  // rows themselves are independent and run in parallel into their slots.
  struct Job {
    std::size_t backend;
    Layout layout;
    std::uint64_t seed;
  };
  std::vector<BackendCalibration> cals;
  std::vector<Job> jobs;
  for (int b = 0; b < config.backends; ++b) {
    const std::uint64_t backend_seed = seeds() % 1000000000ULL;
    cals.push_back(apply_noise_mode(synth_calibration(backend_seed, nq, topo), config.noise));
    const auto ranked = best_chains(cals.back(), model.logical, 0, true);
    for (std::size_t idx : spread_indices(ranked.size(), config.layouts_per_backend)) {
      jobs.push_back({cals.size() - 1, ranked[idx].layout, seeds()});
    }
  }

  std::vector<SweepRow> rows(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      rows[i] = run_row(model, cals[jobs[i].backend], jobs[i].layout, config, jobs[i].seed);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

const std::vector<std::string> kSweepColumns = {
    "model",        "backend",     "layout",
    "shots",        "seed",        "p_total",
    "s_total",      "avg_state_fidelity", "classical_fidelity",
    "observable",   "observable_sim", "observable_phys",
    "bound_value",  "within_bound"};

const std::vector<std::string> kMitigationColumns = {
    "s_total_no_meas", "classical_fidelity_mitigated", "within_bound_mitigated"};

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_layout(const std::vector<int>& l) {
  std::string s;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(l[i]);
  }
  return s;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  const bool mitigated = !rows.empty() && rows.front().classical_fidelity_mitigated.has_value();
  std::string header;
  for (const auto& c : kSweepColumns) header += (header.empty() ? "" : ",") + c;
  if (mitigated) {
    for (const auto& c : kMitigationColumns) header += "," + c;
  }
  out << header << '\n';
  for (const auto& r : rows) {
    out << r.model << ',' << r.backend << ',' << join_layout(r.layout) << ',' << r.shots << ','
        << r.seed << ',' << fmt(r.p_total) << ',' << fmt(r.s_total) << ','
        << fmt(r.avg_state_fidelity) << ',' << fmt(r.classical_fidelity) << ',' << r.observable
        << ',' << fmt(r.observable_sim) << ',' << fmt(r.observable_phys) << ','
        << fmt(r.bound_value) << ',' << (r.within_bound ? "true" : "false");
    if (mitigated) {
      out << ',' << fmt(r.s_total_no_meas.value_or(NAN)) << ','
          << fmt(r.classical_fidelity_mitigated.value_or(NAN)) << ','
          << (r.within_bound_mitigated.value_or(false) ? "true" : "false");
    }
    out << '\n';
  }
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

namespace {

struct FieldError {
  std::string message;
};

double parse_num(const std::string& s, const char* col) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw FieldError{std::string("bad number '") + s + "' in column " + col};
  }
  return v;
}

std::uint64_t parse_uint(const std::string& s, const char* col) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw FieldError{std::string("bad integer '") + s + "' in column " + col};
  }
  return v;
}

bool parse_bool(const std::string& s, const char* col) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw FieldError{std::string("bad flag '") + s + "' in column " + col};
}

}  // namespace

std::vector<ParsedRow> parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(start, end - start);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back(l);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ValidationError("CSV is empty");

  const auto header = split(lines[0], ',');
  std::vector<std::string> with_mit = kSweepColumns;
  with_mit.insert(with_mit.end(), kMitigationColumns.begin(), kMitigationColumns.end());
  const bool mitigated = header == with_mit;
  if (!mitigated && header != kSweepColumns) {
    throw ValidationError("line 1: header does not match the sweep schema");
  }
  std::vector<ParsedRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i + 1);
    const auto f = split(lines[i], ',');
    if (f.size() != header.size()) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    }
    SweepRow r;
    try {
      r.model = f[0];
      r.backend = f[1];
      for (const auto& part : split(f[2], '-')) r.layout.push_back(static_cast<int>(parse_uint(part, "layout")));
      r.shots = parse_uint(f[3], "shots");
      r.seed = parse_uint(f[4], "seed");
      r.p_total = parse_num(f[5], "p_total");
      r.s_total = parse_num(f[6], "s_total");
      r.avg_state_fidelity = parse_num(f[7], "avg_state_fidelity");
      r.classical_fidelity = parse_num(f[8], "classical_fidelity");
      r.observable = f[9];
      r.observable_sim = parse_num(f[10], "observable_sim");
      r.observable_phys = parse_num(f[11], "observable_phys");
      r.bound_value = parse_num(f[12], "bound_value");
      r.within_bound = parse_bool(f[13], "within_bound");
      if (mitigated) {
        r.s_total_no_meas = parse_num(f[14], "s_total_no_meas");
        r.classical_fidelity_mitigated = parse_num(f[15], "classical_fidelity_mitigated");
        r.within_bound_mitigated = parse_bool(f[16], "within_bound_mitigated");
      }
      if (r.model.empty()) throw FieldError{"empty model"};
      if (std::isnan(r.p_total) || std::isnan(r.s_total) || std::isnan(r.avg_state_fidelity)) {
        throw FieldError{"missing p_total, s_total or avg_state_fidelity"};
      }
    } catch (const FieldError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.message);
    }
    rows.push_back({line_no, std::move(r)});
  }
  return rows;
}

}  // namespace qbudget
