#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "qbudget/circuit.hpp"

namespace qbudget {

inline constexpr int kIsingSites = 4;

enum class Boundary { Open, Periodic };
std::string_view boundary_name(Boundary b);

/// H = sum XX over neighbouring sites (plus X_3 X_0 when periodic) +
/// lambda * sum Z, on 4 sites. Site i is qubit i, i.e. bit i of the index.
Eigen::MatrixXd ising_hamiltonian(double lambda, Boundary boundary);

struct IsingOracleResult {
  Boundary boundary;
  Eigen::VectorXd eigenvalues;  // ascending
  double e0 = 0.0;
  Eigen::VectorXd ground_state;
  /// <sum_i Z_i> in the ground state.
  double magnetization = 0.0;
};

/// Exact diagonalization of ising_hamiltonian.
IsingOracleResult brute_force_ising(double lambda, Boundary boundary);

/// Bogoliubov angle for momentum k on the 4-site ring.
double bogoliubov_theta(double lambda, double k);

/// Ground state of the periodic 4-site chain prepared from |0000> by two
/// Bogoliubov rotations at half-integer momenta, fermionic Fourier gates and
/// fermionic swaps, all as unitary2q gates, followed by rz phase delays.
/// Measures qubit i into clbit i when `measure` is set.
Circuit build_ising_ground_circuit(double lambda, bool measure = true);

enum class Eigenstate { Plus, Minus };

/// Appends the inverse Fourier transform over `qubits` (qubits[0] least
/// significant).
void append_inverse_qft(Circuit& c, const std::vector<int>& qubits);

/// Phase estimation of U = X on |+> or |->. Counting qubits 0..t-1 (qubit j
/// controls U^(2^j)), eigenstate qubit t. Counting qubit j is measured into
/// clbit j, so the printed string reads theta_1 theta_2 ... theta_t. With
/// `compiled`, U^(2^j) = I for j >= 1 is dropped; otherwise every power is
/// emitted as 2^j cx gates. `measure_eigenstate` adds clbit t for qubit t.
Circuit build_qpe_x_plus(int t, Eigenstate eigenstate = Eigenstate::Plus, bool compiled = true,
                         bool measure_eigenstate = false);

/// max(1, floor(pi/4 * sqrt(2^n))).
int grover_iterations(int n);
/// sin^2((2k+1) * asin(2^(-n/2))).
double grover_success_probability(int n);

/// Grover search on n in {2, 3} qubits for basis state w, measured qubit i
/// into clbit i.
Circuit build_grover(int n, int w);

}  // namespace qbudget
