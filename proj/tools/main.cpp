#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbudget/calibration.hpp"
#include "qbudget/estimator.hpp"
#include "qbudget/lowering.hpp"
#include "qbudget/mitigation.hpp"
#include "qbudget/models.hpp"
#include "qbudget/noisy_sim.hpp"
#include "qbudget/qasm.hpp"
#include "qbudget/report.hpp"
#include "qbudget/sweep.hpp"

using namespace qbudget;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to `path`, or stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

BackendCalibration load_cal(const std::string& path) {
  LoadedCalibration loaded = load_calibration_file(path);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  return loaded.calibration;
}

Layout parse_layout(const std::string& text) {
  Layout l;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || v < 0) throw ValidationError("bad --layout entry '" + part + "'");
    l.physical.push_back(v);
  }
  if (l.physical.empty()) throw ValidationError("--layout is empty");
  return l;
}

struct CircuitArgs {
  std::string circuit;
  std::string cal;
  std::string layout;
  bool lower = false;
};

void add_circuit_args(CLI::App* cmd, CircuitArgs& a) {
  cmd->add_option("circuit", a.circuit, "OpenQASM 2.0 file")->required();
  cmd->add_option("--cal", a.cal, "Calibration JSON (native or vendor export)")->required();
  cmd->add_option("--layout", a.layout, "Physical qubit for each logical qubit, e.g. 3,4,5");
  cmd->add_flag("--lower", a.lower, "Rewrite into {rz, sx, x, cx} first");
}

/// Loads, optionally lowers and places the circuit on the backend.
Circuit physical_circuit(const CircuitArgs& a, const BackendCalibration& cal) {
  Circuit c = parse_qasm(read_file(a.circuit));
  if (a.lower) c = lower_to_basis(c);
  if (!a.layout.empty()) return apply_layout(c, parse_layout(a.layout), cal.coupling_map());
  if (c.num_qubits() > cal.num_qubits) {
    throw ValidationError("circuit has " + std::to_string(c.num_qubits()) + " qubits, backend " +
                          cal.name + " has " + std::to_string(cal.num_qubits));
  }
  return c;
}

struct SweepArgs {
  std::string model = "ising";
  int backends = 25;
  int layouts = 8;
  std::uint64_t shots = 20000;
  std::uint64_t seed = 1;
  std::string noise = "full";
  std::string topology;
  int backend_qubits = 0;
  double lambda = 2.5;
  int qpe_t = 3;
  int target = 3;
  std::string out;
};

void add_sweep_args(CLI::App* cmd, SweepArgs& a) {
  cmd->add_option("--model", a.model, "ising, qpe, grover2 or grover3")->capture_default_str();
  cmd->add_option("--backends", a.backends, "Synthetic backends")->capture_default_str();
  cmd->add_option("--layouts", a.layouts, "Layouts per backend")->capture_default_str();
  cmd->add_option("--shots", a.shots, "Shots per row")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Master seed")->capture_default_str();
  cmd->add_option("--noise", a.noise, "full, readout-only or none")->capture_default_str();
  cmd->add_option("--topology", a.topology, "line, ring or full (default depends on model)");
  cmd->add_option("--backend-qubits", a.backend_qubits, "Qubits per synthetic backend");
  cmd->add_option("--lambda", a.lambda, "Ising field strength")->capture_default_str();
  cmd->add_option("--t", a.qpe_t, "QPE counting qubits")->capture_default_str();
  cmd->add_option("--target", a.target, "Grover marked state")->capture_default_str();
  cmd->add_option("--out", a.out, "CSV output file (default stdout)");
}

SweepConfig sweep_config(const SweepArgs& a, bool mitigate) {
  SweepConfig c;
  c.model = parse_model(a.model);
  c.options = {a.lambda, a.qpe_t, a.target};
  c.backends = a.backends;
  c.layouts_per_backend = a.layouts;
  c.shots = a.shots;
  c.seed = a.seed;
  c.noise = parse_noise_mode(a.noise);
  if (!a.topology.empty()) c.topology = parse_topology(a.topology);
  c.backend_qubits = a.backend_qubits;
  c.mitigate = mitigate;
  return c;
}

std::string mitigation_cost_line(int n) {
  return "mitigation: calibrating M for " + std::to_string(n) + " measured qubits takes 2^" +
         std::to_string(n) + " = " + std::to_string(mitigation_jobs(n)) + " preparation jobs\n";
}

std::string counts_json(const MitigatedCounts& mc) {
  nlohmann::ordered_json j;
  j["counts"] = mc.counts;
  j["residual"] = mc.residual;
  j["iterations"] = mc.iterations;
  j["condition"] = mc.condition;
  j["note"] = "non-negative counts renormalized to the raw shot total";
  return j.dump(2) + "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Error budgets, noisy simulation and readout mitigation for small circuits"};
  app.require_subcommand(1);

  CircuitArgs est_args;
  bool est_no_meas = false, est_json = false;
  std::string est_out;
  auto* estimate = app.add_subcommand("estimate", "Itemized success probability of a circuit");
  add_circuit_args(estimate, est_args);
  estimate->add_flag("--no-measure-error", est_no_meas, "Leave readout out of S_T");
  estimate->add_flag("--json", est_json, "JSON instead of a table");
  estimate->add_option("--out", est_out, "Output file (default stdout)");

  CircuitArgs sim_args;
  std::uint64_t sim_shots = 20000, sim_seed = 1;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo trajectories under the calibration");
  add_circuit_args(simulate, sim_args);
  simulate->add_option("--shots", sim_shots, "Shots")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "RunResult JSON file (default stdout)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Bound-check sweep over synthetic backends and layouts");
  add_sweep_args(sweep, sweep_args);

  SweepArgs msweep_args;
  auto* msweep = app.add_subcommand("mitigate-sweep", "Sweep with readout mitigation columns");
  add_sweep_args(msweep, msweep_args);

  std::string mit_run, mit_cal, mit_layout, mit_mode = "exact", mit_matrix, mit_matrix_out, mit_out;
  std::uint64_t mit_shots = 20000, mit_seed = 1;
  auto* mitigate = app.add_subcommand("mitigate", "Correct the counts of a RunResult for readout error");
  mitigate->add_option("run", mit_run, "RunResult JSON from `simulate`")->required();
  mitigate->add_option("--cal", mit_cal, "Calibration JSON");
  mitigate->add_option("--layout", mit_layout, "Physical qubit read into each clbit, in clbit order");
  mitigate->add_option("--mode", mit_mode, "exact or sampled")->capture_default_str();
  mitigate->add_option("--matrix", mit_matrix, "Use a saved mitigation matrix instead");
  mitigate->add_option("--matrix-out", mit_matrix_out, "Save the matrix");
  mitigate->add_option("--shots", mit_shots, "Shots per preparation job (sampled mode)")->capture_default_str();
  mitigate->add_option("--seed", mit_seed, "Seed (sampled mode)")->capture_default_str();
  mitigate->add_option("--out", mit_out, "Output file (default stdout)");

  std::string rep_csv, rep_out;
  auto* report = app.add_subcommand("report", "Summarize a sweep CSV");
  report->add_option("csv", rep_csv, "Sweep CSV")->required();
  report->add_option("--out", rep_out, "Output file (default stdout)");

  std::string mdl_name, mdl_eig = "plus", mdl_out;
  double mdl_lambda = 2.5;
  int mdl_t = 3, mdl_n = 2, mdl_target = 3;
  bool mdl_uncompiled = false, mdl_measure_eig = false, mdl_lower = false;
  auto* model = app.add_subcommand("model", "Emit a reference circuit as OpenQASM");
  model->add_option("name", mdl_name, "ising, qpe or grover")->required();
  model->add_option("--lambda", mdl_lambda, "Ising field strength")->capture_default_str();
  model->add_option("--t", mdl_t, "QPE counting qubits")->capture_default_str();
  model->add_option("--eigenstate", mdl_eig, "QPE eigenstate: plus or minus")->capture_default_str();
  model->add_flag("--uncompiled", mdl_uncompiled, "QPE with all 2^j controlled powers");
  model->add_flag("--measure-eigenstate", mdl_measure_eig, "QPE: also measure the eigenstate qubit");
  model->add_option("--n", mdl_n, "Grover qubits (2 or 3)")->capture_default_str();
  model->add_option("--target", mdl_target, "Grover marked state")->capture_default_str();
  model->add_flag("--lower", mdl_lower, "Rewrite into {rz, sx, x, cx}");
  model->add_option("--out", mdl_out, "Output file (default stdout)");

  std::uint64_t syn_seed = 1;
  int syn_qubits = 8;
  std::string syn_topology = "ring", syn_out;
  auto* synth = app.add_subcommand("synth-backend", "Write a synthetic calibration");
  synth->add_option("--seed", syn_seed, "Seed")->capture_default_str();
  synth->add_option("--qubits", syn_qubits, "Qubit count")->capture_default_str();
  synth->add_option("--topology", syn_topology, "line, ring or full")->capture_default_str();
  synth->add_option("--out", syn_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*estimate) {
    const BackendCalibration cal = load_cal(est_args.cal);
    const Circuit c = physical_circuit(est_args, cal);
    const ErrorBudget b = success_probability(c, cal, !est_no_meas);
    emit(est_out, est_json ? b.to_json() : b.to_text());
  } else if (*simulate) {
    const BackendCalibration cal = load_cal(sim_args.cal);
    const Circuit c = physical_circuit(sim_args, cal);
    emit(sim_out, simulate_noisy(c, cal, sim_shots, sim_seed).to_json());
  } else if (*sweep || *msweep) {
    const bool mit = msweep->parsed();
    const SweepArgs& a = mit ? msweep_args : sweep_args;
    const SweepConfig cfg = sweep_config(a, mit);
    if (mit) std::cerr << mitigation_cost_line(make_model(cfg.model, cfg.options).logical.num_clbits());
    emit(a.out, to_csv(run_sweep(cfg)));
  } else if (*mitigate) {
    const RunResult raw = RunResult::from_json(read_file(mit_run));
    MitigationMatrix mm;
    if (!mit_matrix.empty()) {
      mm = MitigationMatrix::from_json(read_file(mit_matrix));
    } else {
      if (mit_cal.empty() || mit_layout.empty()) {
        throw ValidationError("mitigate needs --matrix, or --cal and --layout");
      }
      const BackendCalibration cal = load_cal(mit_cal);
      const Layout layout = parse_layout(mit_layout);
      std::cerr << mitigation_cost_line(static_cast<int>(layout.physical.size()));
      if (mit_mode == "exact") {
        mm = exact_mitigation_matrix(cal, layout);
      } else if (mit_mode == "sampled") {
        mm = sampled_mitigation_matrix(cal, layout, mit_shots, mit_seed);
      } else {
        throw ValidationError("unknown --mode '" + mit_mode + "' (exact, sampled)");
      }
    }
    if (!mit_matrix_out.empty()) emit(mit_matrix_out, mm.to_json());
    emit(mit_out, counts_json(mitigate_counts(mm, raw.counts)));
  } else if (*report) {
    emit(rep_out, report_csv(read_file(rep_csv)).to_text());
  } else if (*model) {
    Circuit c;
    if (mdl_name == "ising") {
      c = build_ising_ground_circuit(mdl_lambda);
    } else if (mdl_name == "qpe") {
      Eigenstate e = Eigenstate::Plus;
      if (mdl_eig == "minus") {
        e = Eigenstate::Minus;
      } else if (mdl_eig != "plus") {
        throw ValidationError("unknown --eigenstate '" + mdl_eig + "' (plus, minus)");
      }
      c = build_qpe_x_plus(mdl_t, e, !mdl_uncompiled, mdl_measure_eig);
    } else if (mdl_name == "grover") {
      c = build_grover(mdl_n, mdl_target);
    } else {
      throw ValidationError("unknown model '" + mdl_name + "' (ising, qpe, grover)");
    }
    if (mdl_lower) c = lower_to_basis(c);
    emit(mdl_out, emit_qasm(c));
  } else if (*synth) {
    emit(syn_out, dump_calibration(synth_calibration(syn_seed, syn_qubits, parse_topology(syn_topology))));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
