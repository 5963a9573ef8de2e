#include "qbudget/models.hpp"

#include <cmath>
#include <numbers>

namespace qbudget {

using std::numbers::pi;

std::string_view boundary_name(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Eigen::MatrixXd ising_hamiltonian(double lambda, Boundary boundary) {
  if (!std::isfinite(lambda)) throw ValidationError("lambda must be finite");
  constexpr int n = kIsingSites;
  constexpr int dim = 1 << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::Periodic) bonds.emplace_back(n - 1, 0);
  for (int s = 0; s < dim; ++s) {
    for (const auto& [a, b] : bonds) h((s ^ (1 << a)) ^ (1 << b), s) += 1.0;
    for (int i = 0; i < n; ++i) h(s, s) += lambda * (((s >> i) & 1) ? -1.0 : 1.0);
  }
  return h;
}

IsingOracleResult brute_force_ising(double lambda, Boundary boundary) {
  const Eigen::MatrixXd h = ising_hamiltonian(lambda, boundary);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  IsingOracleResult r;
  r.boundary = boundary;
  r.eigenvalues = es.eigenvalues();
  r.e0 = r.eigenvalues(0);
  r.ground_state = es.eigenvectors().col(0);
  for (int s = 0; s < h.rows(); ++s) {
    int z = 0;
    for (int i = 0; i < kIsingSites; ++i) z += ((s >> i) & 1) ? -1 : 1;
    r.magnetization += r.ground_state(s) * r.ground_state(s) * z;
  }
  return r;
}

double bogoliubov_theta(double lambda, double k) {
  const double phi = 2.0 * pi * k / kIsingSites;
  const double a = -lambda + std::cos(phi);
  const double b = std::sin(phi);
  return std::acos(a / std::hypot(a, b));
}

namespace {

const Complex I{0.0, 1.0};

Matrix4 bogoliubov(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, 0, 0, I * s,  //
          0, 1, 0, 0,      //
          0, 0, 1, 0,      //
          I * s, 0, 0, c};
}

Matrix4 fourier(int k) {
  const Complex e = std::polar(1.0, 2.0 * pi * k / kIsingSites);
  const double r = 1.0 / std::sqrt(2.0);
  return {1, 0, 0, 0,          //
          0, r, e * r, 0,      //
          0, r, -e * r, 0,     //
          0, 0, 0, -e};
}

Matrix4 fswap() {
  return {1, 0, 0, 0,  //
          0, 0, 1, 0,  //
          0, 1, 0, 0,  //
          0, 0, 0, -1};
}

}  // namespace

Circuit build_ising_ground_circuit(double lambda, bool measure) {
  if (!std::isfinite(lambda)) throw ValidationError("lambda must be finite");
  Circuit c(kIsingSites, measure ? kIsingSites : 0);
  c.unitary2q(bogoliubov(bogoliubov_theta(lambda, 0.5) / 2), "bogoliubov", 0, 1);
  c.unitary2q(bogoliubov(bogoliubov_theta(lambda, 1.5) / 2), "bogoliubov", 2, 3);
  c.unitary2q(fswap(), "fswap", 1, 2);
  c.unitary2q(fswap(), "fswap", 2, 3);
  c.unitary2q(fourier(0), "f2k0", 0, 1);
  c.unitary2q(fourier(2), "f2k2", 2, 3);
  c.unitary2q(fswap(), "fswap", 1, 2);
  c.unitary2q(fourier(0), "f2k0", 0, 1);
  c.unitary2q(fourier(1), "f2k1", 2, 3);
  c.unitary2q(fswap(), "fswap", 1, 2);
  for (int j = 1; j < kIsingSites; ++j) c.rz(j * pi / 4, j);
  if (measure) {
    for (int j = 0; j < kIsingSites; ++j) c.measure(j, j);
  }
  return c;
}

void append_inverse_qft(Circuit& c, const std::vector<int>& qubits) {
  const int t = static_cast<int>(qubits.size());
  for (int i = 0; i < t / 2; ++i) c.swap(qubits[i], qubits[t - 1 - i]);
  for (int j = 0; j < t; ++j) {
    for (int m = 0; m < j; ++m) c.cp(-pi / std::ldexp(1.0, j - m), qubits[m], qubits[j]);
    c.h(qubits[j]);
  }
}

Circuit build_qpe_x_plus(int t, Eigenstate eigenstate, bool compiled, bool measure_eigenstate) {
  if (t < 1 || t > 6) throw ValidationError("qpe: t must be in [1, 6], got " + std::to_string(t));
  Circuit c(t + 1, measure_eigenstate ? t + 1 : t);
  c.h(t);
  if (eigenstate == Eigenstate::Minus) c.z(t);
  std::vector<int> counting;
  for (int j = 0; j < t; ++j) {
    c.h(j);
    counting.push_back(j);
  }
  for (int j = 0; j < t; ++j) {
    const int reps = compiled ? (j == 0 ? 1 : 0) : (1 << j);
    for (int r = 0; r < reps; ++r) c.cx(j, t);
  }
  append_inverse_qft(c, counting);
  for (int j = 0; j < t; ++j) c.measure(j, j);
  if (measure_eigenstate) c.measure(t, t);
  return c;
}

int grover_iterations(int n) {
  return std::max(1, static_cast<int>(std::floor(pi / 4 * std::sqrt(std::ldexp(1.0, n)))));
}

double grover_success_probability(int n) {
  const double s = std::sin((2 * grover_iterations(n) + 1) * std::asin(std::pow(2.0, -n / 2.0)));
  return s * s;
}

namespace {

void mcz(Circuit& c, int n) {
  if (n == 2) {
    c.cz(0, 1);
  } else {
    c.ccz(0, 1, 2);
  }
}

}  // namespace

Circuit build_grover(int n, int w) {
  if (n != 2 && n != 3) throw ValidationError("grover: n must be 2 or 3, got " + std::to_string(n));
  if (w < 0 || w >= (1 << n)) {
    throw ValidationError("grover: target " + std::to_string(w) + " out of range for n = " +
                          std::to_string(n));
  }
  Circuit c(n, n);
  for (int q = 0; q < n; ++q) c.h(q);
  for (int it = 0; it < grover_iterations(n); ++it) {
    for (int q = 0; q < n; ++q) {
      if (!((w >> q) & 1)) c.x(q);
    }
    mcz(c, n);
    for (int q = 0; q < n; ++q) {
      if (!((w >> q) & 1)) c.x(q);
    }
    for (int q = 0; q < n; ++q) c.h(q);
    for (int q = 0; q < n; ++q) c.x(q);
    mcz(c, n);
    for (int q = 0; q < n; ++q) c.x(q);
    for (int q = 0; q < n; ++q) c.h(q);
  }
  for (int q = 0; q < n; ++q) c.measure(q, q);
  return c;
}

}  // namespace qbudget
