#include "qbudget/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "json.hpp"

namespace qbudget {

namespace {

void check_layout(const BackendCalibration& cal, const Layout& layout) {
  const int n = static_cast<int>(layout.physical.size());
  if (n < 1 || n > kMaxMitigationQubits) {
    throw ValidationError("mitigation matrix needs 1.." + std::to_string(kMaxMitigationQubits) +
                          " qubits, got " + std::to_string(n) + " (" +
                          std::to_string(mitigation_jobs(std::max(0, std::min(n, 62)))) +
                          " preparation jobs)");
  }
  for (int p : layout.physical) {
    if (p < 0 || p >= cal.num_qubits) {
      throw ValidationError("layout qubit " + std::to_string(p) + " not on backend " + cal.name);
    }
  }
}

}  // namespace

Layout readout_layout(const Circuit& circuit) {
  Layout l{std::vector<int>(circuit.num_clbits(), -1)};
  for (const auto& op : circuit.ops()) {
    if (op.kind != GateKind::Measure) continue;
    if (l.physical[op.clbit] != -1) {
      throw ValidationError("clbit " + std::to_string(op.clbit) + " is written more than once");
    }
    l.physical[op.clbit] = op.qubits[0];
  }
  for (int c = 0; c < circuit.num_clbits(); ++c) {
    if (l.physical[c] < 0) throw ValidationError("clbit " + std::to_string(c) + " is never measured");
  }
  return l;
}

MitigationMatrix exact_mitigation_matrix(const BackendCalibration& cal, const Layout& layout) {
  check_layout(cal, layout);
  const int n = static_cast<int>(layout.physical.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
  // Kronecker order: later clbits are more significant.
  for (int c = n - 1; c >= 0; --c) {
    const auto& qc = cal.qubits.at(layout.physical[c]);
    const double p10 = qc.prob_meas1_prep0(), p01 = qc.prob_meas0_prep1();
    Eigen::Matrix2d f;
    f << 1 - p10, p01, p10, 1 - p01;
    Eigen::MatrixXd next(m.rows() * 2, m.cols() * 2);
    for (int r = 0; r < m.rows(); ++r) {
      for (int k = 0; k < m.cols(); ++k) next.block(r * 2, k * 2, 2, 2) = m(r, k) * f;
    }
    m = std::move(next);
  }
  return {n, "exact", std::move(m)};
}

MitigationMatrix sampled_mitigation_matrix(const BackendCalibration& cal, const Layout& layout,
                                           std::uint64_t shots, std::uint64_t seed) {
  check_layout(cal, layout);
  if (shots == 0) throw ValidationError("sampled mitigation needs shots >= 1");
  const int n = static_cast<int>(layout.physical.size());
  const auto dim = static_cast<std::int64_t>(mitigation_jobs(n));
  const BackendCalibration ro = readout_only(cal);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<std::string> failures(dim);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t j = 0; j < dim; ++j) {
    try {
      Circuit prep(cal.num_qubits, n);
      for (int c = 0; c < n; ++c) {
        if ((j >> c) & 1) prep.x(layout.physical[c]);
      }
      for (int c = 0; c < n; ++c) prep.measure(layout.physical[c], c);
      const RunResult r = simulate_noisy_serial(prep, ro, shots, seed + static_cast<std::uint64_t>(j));
      for (const auto& [bits, count] : r.counts) {
        m(static_cast<Eigen::Index>(std::stoull(bits, nullptr, 2)), j) =
            static_cast<double>(count) / static_cast<double>(shots);
      }
    } catch (const std::exception& e) {
      failures[j] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw ValidationError(f);
  }
  return {n, "sampled", std::move(m)};
}

std::string MitigationMatrix::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["mode"] = mode;
  std::vector<double> flat;
  flat.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  j["matrix"] = flat;
  return j.dump() + "\n";
}

MitigationMatrix MitigationMatrix::from_json(std::string_view text) {
  MitigationMatrix mm;
  std::vector<double> flat;
  try {
    const auto j = nlohmann::json::parse(text);
    mm.n = j.at("n").get<int>();
    mm.mode = j.value("mode", std::string("exact"));
    flat = j.at("matrix").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("mitigation matrix: ") + e.what());
  }
  if (mm.n < 1 || mm.n > kMaxMitigationQubits) {
    throw ValidationError("mitigation matrix: n out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << mm.n;
  if (static_cast<Eigen::Index>(flat.size()) != dim * dim) {
    throw ValidationError("mitigation matrix: expected " + std::to_string(dim * dim) + " entries, got " +
                          std::to_string(flat.size()));
  }
  mm.m.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) mm.m(r, c) = flat[r * dim + c];
  }
  return mm;
}

Eigen::VectorXd counts_vector(const Counts& counts, int n) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index{1} << n);
  for (const auto& [bits, count] : counts) {
    if (static_cast<int>(bits.size()) != n || bits.find_first_not_of("01") != std::string::npos) {
      throw ValidationError("counts key '" + bits + "' is not a " + std::to_string(n) + "-bit string");
    }
    v(static_cast<Eigen::Index>(std::stoull(bits, nullptr, 2))) += static_cast<double>(count);
  }
  return v;
}

namespace {

/// Euclidean projection onto {c >= 0, sum c = total}.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v, double total) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - total) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  return (v.array() - tau).max(0.0).matrix();
}

}  // namespace

MitigatedVector mitigate(const MitigationMatrix& mm, const Eigen::VectorXd& r) {
  const Eigen::Index dim = mm.m.rows();
  if (mm.m.cols() != dim || dim != (Eigen::Index{1} << mm.n)) {
    throw ValidationError("mitigation matrix is not 2^n x 2^n");
  }
  if (r.size() != dim) throw ValidationError("raw vector does not match the matrix dimension");
  const double total = r.sum();
  if (!(total > 0.0) || r.minCoeff() < 0.0) {
    throw ValidationError("raw counts must be non-negative with a positive total");
  }

  MitigatedVector out;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(mm.m);
  const double rcond = lu.rcond();
  out.condition = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(out.condition <= 1e12)) {
    throw std::runtime_error("mitigation matrix is singular or ill-conditioned (condition estimate " +
                             std::to_string(out.condition) + ")");
  }
  Eigen::VectorXd c = lu.solve(r).cwiseMax(0.0);
  if (c.sum() > 0.0) {
    c *= total / c.sum();
  } else {
    c.setConstant(total / static_cast<double>(dim));
  }

  const Eigen::MatrixXd mtm = mm.m.transpose() * mm.m;
  const Eigen::VectorXd mtr = mm.m.transpose() * r;
  const double lipschitz = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mtm, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .maxCoeff();
  const double tol = 1e-10 * std::max(1.0, total);
  bool converged = false;
  for (out.iterations = 0; out.iterations < 10000; ++out.iterations) {
    const Eigen::VectorXd next = project_simplex(c - (mtm * c - mtr) / lipschitz, total);
    const double step = (next - c).norm();
    c = next;
    if (step <= tol) {
      converged = true;
      break;
    }
  }
  out.residual = (mm.m * c - r).norm() / total;
  if (!converged) {
    throw std::runtime_error("mitigation did not converge in 10000 iterations (residual " +
                             std::to_string(out.residual) + ")");
  }
  out.values = std::move(c);
  return out;
}

MitigatedCounts mitigate_counts(const MitigationMatrix& mm, const Counts& raw) {
  if (mm.n < 1 || mm.n > kMaxMitigationQubits) throw ValidationError("mitigation matrix: n out of range");
  const MitigatedVector v = mitigate(mm, counts_vector(raw, mm.n));
  MitigatedCounts out;
  out.residual = v.residual;
  out.iterations = v.iterations;
  out.condition = v.condition;
  for (Eigen::Index i = 0; i < v.values.size(); ++i) {
    if (v.values(i) > 0.0) out.counts[bitstring(static_cast<std::uint64_t>(i), mm.n)] = v.values(i);
  }
  return out;
}

Distribution to_distribution(const MitigatedCounts& mc) {
  double total = 0.0;
  for (const auto& [k, v] : mc.counts) total += v;
  Distribution d;
  for (const auto& [k, v] : mc.counts) d[k] = v / total;
  return d;
}

}  // namespace qbudget
