#pragma once

#include "qbudget/noisy_sim.hpp"

namespace qbudget {

/// Normalized frequencies of a count table.
Distribution to_distribution(const Counts& counts);

/// Bhattacharyya coefficient sum_x sqrt(p_x q_x). Both inputs must sum to 1
/// within 1e-9.
double classical_fidelity(const Distribution& p, const Distribution& q);

/// Sample mean of sum_i Z_i: each 0 contributes +1, each 1 contributes -1.
double magnetization(const Counts& counts);
double magnetization(const Distribution& dist);

/// Linear phase estimator sum_x freq(x) * int(x) / 2^t over t-bit strings,
/// where the leftmost bit is the most significant.
double phase_estimate(const Counts& counts);
double phase_estimate(const Distribution& dist);

/// Counts restricted to the clbits in `keep` (ascending), e.g. to drop an
/// auxiliary register before phase_estimate.
Counts marginal(const Counts& counts, const std::vector<int>& keep);
Distribution marginal(const Distribution& dist, const std::vector<int>& keep);

}  // namespace qbudget
