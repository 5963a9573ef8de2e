#include "qbudget/noisy_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "qbudget/estimator.hpp"

namespace qbudget {

std::string bitstring(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> i) & 1U) s[width - 1 - i] = '1';
  }
  return s;
}

namespace {

std::uint64_t clbit_value(std::size_t basis, const std::vector<std::pair<int, int>>& readout) {
  std::uint64_t v = 0;
  for (const auto& [q, c] : readout) {
    if ((basis >> q) & 1U) v |= std::uint64_t{1} << c;
  }
  return v;
}

std::vector<std::pair<int, int>> readout_map(const Circuit& c) {
  std::vector<std::pair<int, int>> out;
  for (const auto& op : c.ops()) {
    if (op.kind == GateKind::Measure) out.emplace_back(op.qubits[0], op.clbit);
  }
  return out;
}

Distribution born_distribution(const StateVector& psi, const Circuit& c) {
  Distribution dist;
  const auto readout = readout_map(c);
  if (readout.empty()) return dist;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi[i]);
    if (p < 1e-14) continue;
    dist[bitstring(clbit_value(i, readout), c.num_clbits())] += p;
  }
  return dist;
}

}  // namespace

IdealResult simulate_ideal(const Circuit& circuit) {
  if (circuit.num_qubits() > kMaxSimQubits) {
    throw ValidationError("simulate_ideal: " + std::to_string(circuit.num_qubits()) +
                          " qubits exceeds the limit of " + std::to_string(kMaxSimQubits));
  }
  IdealResult r{StateVector(circuit.num_qubits()), {}};
  for (const auto& op : circuit.ops()) r.state.apply(op);
  r.distribution = born_distribution(r.state, circuit);
  return r;
}

CompactCircuit compact_active(const Circuit& circuit) {
  CompactCircuit out;
  out.physical = circuit.active_qubits();
  std::vector<int> local(circuit.num_qubits(), -1);
  for (std::size_t i = 0; i < out.physical.size(); ++i) local[out.physical[i]] = static_cast<int>(i);
  out.circuit = Circuit(static_cast<int>(out.physical.size()), circuit.num_clbits());
  for (std::size_t k = 0; k < circuit.ops().size(); ++k) {
    Operation op = circuit.ops()[k];
    std::vector<int> qs;
    for (int q : op.qubits) {
      if (local[q] >= 0) qs.push_back(local[q]);
    }
    if (op.kind == GateKind::Barrier && qs.empty()) continue;
    op.qubits = std::move(qs);
    out.circuit.append(std::move(op));
    out.source.push_back(k);
  }
  return out;
}

namespace {

enum class StepKind : std::uint8_t { Gate1, Gate2, CX, Decay };

struct Step {
  StepKind kind;
  int a = -1;
  int b = -1;
  int matrix = -1;
  double p = 0.0;   // gate error, or relaxation event probability
  double p2 = 0.0;  // dephasing event probability
};

struct Readout {
  int qubit;
  int clbit;
  double p10;
  double p01;
};

/// Everything a shot needs, precomputed from the deterministic schedule.
struct Program {
  int num_qubits = 0;
  int num_clbits = 0;
  std::vector<Step> steps;
  std::vector<Matrix2> m1;
  std::vector<Matrix4> m2;
  std::vector<Readout> readout;
  StateVector ideal;
  /// Set when no step can fire an event, so every shot reaches the same state
  /// and only readout sampling differs. `support` and `cumulative` hold that
  /// state's non-zero basis indices and running probabilities.
  bool event_free = false;
  std::vector<std::size_t> support;
  std::vector<double> cumulative;
};

double event_probability(double duration_ns, double t_us) {
  if (!std::isfinite(t_us)) return 0.0;
  return -std::expm1(-duration_ns / (t_us * 1e3));
}

Program compile(const Circuit& circuit, const BackendCalibration& cal) {
  if (circuit.num_qubits() > cal.num_qubits) {
    throw ValidationError("circuit uses " + std::to_string(circuit.num_qubits()) +
                          " qubits, backend " + cal.name + " has " + std::to_string(cal.num_qubits));
  }
  const CompactCircuit cc = compact_active(circuit);
  if (cc.circuit.num_qubits() > kMaxSimQubits) {
    throw ValidationError("circuit touches " + std::to_string(cc.circuit.num_qubits()) +
                          " qubits, simulator limit is " + std::to_string(kMaxSimQubits));
  }
  Program prog;
  prog.num_qubits = cc.circuit.num_qubits();
  prog.num_clbits = circuit.num_clbits();
  const int n = prog.num_qubits;
  std::vector<double> clock(n, 0.0), pending(n, 0.0);

  auto flush = [&](int q) {
    if (pending[q] <= 0.0) return;
    const auto& qc = cal.qubits.at(cc.physical[q]);
    Step s{StepKind::Decay, q};
    s.p = event_probability(pending[q], qc.t1_us);
    s.p2 = event_probability(pending[q], qc.t2_us);
    if (s.p > 0.0 || s.p2 > 0.0) prog.steps.push_back(s);
    pending[q] = 0.0;
  };

  const auto& local_ops = cc.circuit.ops();
  const auto& phys_ops = circuit.ops();
  for (std::size_t k = 0; k < local_ops.size(); ++k) {
    const Operation& op = local_ops[k];
    const Operation& phys = phys_ops[cc.source[k]];

    if (op.kind == GateKind::Measure) {
      const auto& qc = cal.qubits.at(phys.qubits[0]);
      prog.readout.push_back({op.qubits[0], op.clbit, qc.prob_meas1_prep0(), qc.prob_meas0_prep1()});
      continue;
    }
    double start = 0.0;
    for (int q : op.qubits) start = std::max(start, clock[q]);
    for (int q : op.qubits) {
      pending[q] += start - clock[q];
      clock[q] = start;
    }
    if (op.kind == GateKind::Barrier) continue;

    const GateCost cost = gate_cost(phys, cal);
    // rz is diagonal, so it commutes with both decay channels up to a global
    // phase and need not split the pending interval.
    if (op.kind != GateKind::RZ) {
      for (int q : op.qubits) flush(q);
    }
    Step s{};
    s.p = cost.error;
    if (op.kind == GateKind::CX) {
      s.kind = StepKind::CX;
      s.a = op.qubits[0];
      s.b = op.qubits[1];
    } else if (is_two_qubit(op.kind)) {
      s.kind = StepKind::Gate2;
      s.a = op.qubits[0];
      s.b = op.qubits[1];
      s.matrix = static_cast<int>(prog.m2.size());
      prog.m2.push_back(gate_matrix_2q(op));
    } else if (gate_arity(op.kind) == 1) {
      s.kind = StepKind::Gate1;
      s.a = op.qubits[0];
      s.matrix = static_cast<int>(prog.m1.size());
      prog.m1.push_back(gate_matrix_1q(op));
    } else {
      throw ValidationError("simulate_noisy needs a lowered circuit; found '" + describe(op) + "'");
    }
    prog.steps.push_back(s);
    for (int q : op.qubits) {
      pending[q] += cost.duration_ns;
      clock[q] += cost.duration_ns;
    }
  }
  for (int q = 0; q < n; ++q) flush(q);

  prog.ideal = StateVector(n);
  for (const auto& op : local_ops) prog.ideal.apply(op);

  prog.event_free = std::all_of(prog.steps.begin(), prog.steps.end(),
                                [](const Step& st) { return st.p <= 0.0 && st.p2 <= 0.0; });
  if (prog.event_free) {
    StateVector psi(n);
    for (const Step& st : prog.steps) {
      if (st.kind == StepKind::Gate1) psi.apply_1q(prog.m1[st.matrix], st.a);
      if (st.kind == StepKind::Gate2) psi.apply_2q(prog.m2[st.matrix], st.a, st.b);
      if (st.kind == StepKind::CX) psi.apply_cx(st.a, st.b);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double p = std::norm(psi[i]);
      if (p == 0.0) continue;
      acc += p;
      prog.support.push_back(i);
      prog.cumulative.push_back(acc);
    }
  }
  return prog;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Shots are drawn in fixed blocks, each with its own generator, so the
/// stream a shot sees does not depend on how blocks map to threads.
constexpr std::uint64_t kShotBlock = 256;

class ShotRng {
 public:
  ShotRng(std::uint64_t seed, std::uint64_t block) : gen_(splitmix64(seed ^ splitmix64(block))) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

void apply_pauli(StateVector& psi, int code, int q) {
  switch (code) {
    case 1:
      psi.apply_x(q);
      break;
    case 2:
      psi.apply_y(q);
      break;
    case 3:
      psi.apply_z(q);
      break;
    default:
      break;
  }
}

struct ShotOutcome {
  std::uint64_t bits = 0;
  double fidelity = 0.0;
  bool clean = true;
};

/// Readout of basis state `basis`, with independent bit flips.
void read_out(const Program& prog, std::size_t basis, ShotRng& rng, ShotOutcome& out) {
  for (const Readout& r : prog.readout) {
    bool bit = (basis >> r.qubit) & 1U;
    const double flip = bit ? r.p01 : r.p10;
    if (flip > 0.0 && rng.uniform() < flip) {
      bit = !bit;
      out.clean = false;
    }
    if (bit) out.bits |= std::uint64_t{1} << r.clbit;
  }
}

ShotOutcome run_shot(const Program& prog, ShotRng& rng) {
  ShotOutcome out;
  if (prog.event_free) {
    out.fidelity = 1.0;
    if (prog.readout.empty()) return out;
    // Same draw and tie rule as the state-vector path below.
    const double u = rng.uniform();
    const auto it = std::upper_bound(prog.cumulative.begin(), prog.cumulative.end(), u);
    const std::size_t k = it == prog.cumulative.end() ? prog.support.size() - 1
                                                      : static_cast<std::size_t>(it - prog.cumulative.begin());
    read_out(prog, prog.support[k], rng, out);
    return out;
  }

  StateVector psi(prog.num_qubits);
  for (const Step& s : prog.steps) {
    switch (s.kind) {
      case StepKind::Gate1:
        psi.apply_1q(prog.m1[s.matrix], s.a);
        if (s.p > 0.0 && rng.uniform() < s.p) {
          out.clean = false;
          apply_pauli(psi, 1 + static_cast<int>(rng.uniform() * 3.0), s.a);
        }
        break;
      case StepKind::Gate2:
      case StepKind::CX:
        if (s.kind == StepKind::CX) {
          psi.apply_cx(s.a, s.b);
        } else {
          psi.apply_2q(prog.m2[s.matrix], s.a, s.b);
        }
        if (s.p > 0.0 && rng.uniform() < s.p) {
          out.clean = false;
          const int code = 1 + static_cast<int>(rng.uniform() * 15.0);
          apply_pauli(psi, code >> 2, s.a);
          apply_pauli(psi, code & 3, s.b);
        }
        break;
      case StepKind::Decay:
        if (s.p > 0.0 && rng.uniform() < s.p) {
          out.clean = false;
          if (rng.uniform() < psi.probability_one(s.a)) {
            psi.decay_jump(s.a);
          } else {
            psi.project_zero(s.a);
          }
        }
        if (s.p2 > 0.0 && rng.uniform() < s.p2) {
          out.clean = false;
          if (rng.uniform() < 0.5) psi.apply_z(s.a);
        }
        break;
    }
  }
  // A trajectory without events is the ideal state up to rounding.
  out.fidelity = out.clean ? 1.0 : state_fidelity(prog.ideal, psi);
  if (prog.readout.empty()) return out;

  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t basis = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi[i]);
    if (p == 0.0) continue;
    basis = i;
    acc += p;
    if (u < acc) break;
  }
  read_out(prog, basis, rng, out);
  return out;
}

void run_block(const Program& prog, std::uint64_t seed, std::uint64_t block,
               std::vector<ShotOutcome>& outcomes) {
  ShotRng rng(seed, block);
  const std::uint64_t end = std::min<std::uint64_t>(outcomes.size(), (block + 1) * kShotBlock);
  for (std::uint64_t i = block * kShotBlock; i < end; ++i) outcomes[i] = run_shot(prog, rng);
}

RunResult aggregate(const std::vector<ShotOutcome>& outcomes, const Program& prog,
                    std::uint64_t seed) {
  RunResult r;
  r.shots = outcomes.size();
  r.seed = seed;
  std::map<std::uint64_t, std::uint64_t> tally;
  double fid = 0.0;
  std::uint64_t clean = 0;
  for (const auto& o : outcomes) {
    if (!prog.readout.empty()) ++tally[o.bits];
    fid += o.fidelity;
    clean += o.clean ? 1 : 0;
  }
  for (const auto& [bits, n] : tally) r.counts[bitstring(bits, prog.num_clbits)] = n;
  r.avg_state_fidelity = std::min(1.0, fid / static_cast<double>(r.shots));
  r.clean_fraction = static_cast<double>(clean) / static_cast<double>(r.shots);
  return r;
}

void check_shots(std::uint64_t shots) {
  if (shots == 0) throw ValidationError("shots must be >= 1");
}

}  // namespace

RunResult simulate_noisy(const Circuit& circuit, const BackendCalibration& cal,
                         std::uint64_t shots, std::uint64_t seed) {
  check_shots(shots);
  const Program prog = compile(circuit, cal);
  std::vector<ShotOutcome> outcomes(shots);
  const auto blocks = static_cast<std::int64_t>((shots + kShotBlock - 1) / kShotBlock);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) run_block(prog, seed, static_cast<std::uint64_t>(b), outcomes);
  return aggregate(outcomes, prog, seed);
}

RunResult simulate_noisy_serial(const Circuit& circuit, const BackendCalibration& cal,
                                std::uint64_t shots, std::uint64_t seed) {
  check_shots(shots);
  const Program prog = compile(circuit, cal);
  std::vector<ShotOutcome> outcomes(shots);
  for (std::uint64_t b = 0; b * kShotBlock < shots; ++b) run_block(prog, seed, b, outcomes);
  return aggregate(outcomes, prog, seed);
}

std::string RunResult::to_json() const {
  nlohmann::ordered_json j;
  j["shots"] = shots;
  j["seed"] = seed;
  j["avg_state_fidelity"] = avg_state_fidelity;
  j["clean_fraction"] = clean_fraction;
  j["counts"] = counts;
  return j.dump(2) + "\n";
}

RunResult RunResult::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("run result: ") + e.what());
  }
  RunResult r;
  try {
    r.shots = j.at("shots").get<std::uint64_t>();
    r.seed = j.value("seed", std::uint64_t{0});
    r.avg_state_fidelity = j.value("avg_state_fidelity", 0.0);
    r.clean_fraction = j.value("clean_fraction", 0.0);
    r.counts = j.at("counts").get<Counts>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("run result: ") + e.what());
  }
  std::uint64_t total = 0;
  std::size_t width = std::string::npos;
  for (const auto& [k, v] : r.counts) {
    if (width == std::string::npos) width = k.size();
    if (k.size() != width || k.find_first_not_of("01") != std::string::npos) {
      throw ValidationError("run result: bad bitstring '" + k + "'");
    }
    total += v;
  }
  if (!r.counts.empty() && total != r.shots) {
    throw ValidationError("run result: counts sum to " + std::to_string(total) + ", shots = " +
                          std::to_string(r.shots));
  }
  return r;
}

}  // namespace qbudget
