#include "qbudget/observables.hpp"

#include <cmath>

namespace qbudget {

namespace {

void require_normalized(const Distribution& d, const char* which) {
  double s = 0.0;
  for (const auto& [k, v] : d) {
    if (v < 0.0) throw ValidationError(std::string(which) + ": negative probability for " + k);
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) {
    throw ValidationError(std::string(which) + ": distribution sums to " + std::to_string(s));
  }
}

template <typename Map>
double total_weight(const Map& m, const char* op) {
  double total = 0.0;
  for (const auto& [k, v] : m) total += static_cast<double>(v);
  if (m.empty() || total <= 0.0) throw ValidationError(std::string(op) + ": empty counts");
  return total;
}

template <typename Map>
double magnetization_impl(const Map& m) {
  const double total = total_weight(m, "magnetization");
  double acc = 0.0;
  for (const auto& [bits, w] : m) {
    int z = 0;
    for (char c : bits) z += c == '0' ? 1 : -1;
    acc += static_cast<double>(w) * z;
  }
  return acc / total;
}

template <typename Map>
double phase_impl(const Map& m) {
  const double total = total_weight(m, "phase_estimate");
  double acc = 0.0;
  for (const auto& [bits, w] : m) {
    const double x = static_cast<double>(std::stoull(bits, nullptr, 2));
    acc += static_cast<double>(w) * x / std::ldexp(1.0, static_cast<int>(bits.size()));
  }
  return acc / total;
}

template <typename Map>
Map marginal_impl(const Map& m, const std::vector<int>& keep) {
  Map out;
  for (const auto& [bits, w] : m) {
    const int width = static_cast<int>(bits.size());
    std::string key(keep.size(), '0');
    for (std::size_t i = 0; i < keep.size(); ++i) {
      const int c = keep[i];
      if (c < 0 || c >= width) throw ValidationError("marginal: clbit " + std::to_string(c) + " out of range");
      key[keep.size() - 1 - i] = bits[width - 1 - c];
    }
    out[key] += w;
  }
  return out;
}

}  // namespace

Distribution to_distribution(const Counts& counts) {
  const double total = total_weight(counts, "to_distribution");
  Distribution d;
  for (const auto& [k, v] : counts) d[k] = static_cast<double>(v) / total;
  return d;
}

double classical_fidelity(const Distribution& p, const Distribution& q) {
  require_normalized(p, "classical_fidelity");
  require_normalized(q, "classical_fidelity");
  double f = 0.0;
  for (const auto& [k, pv] : p) {
    auto it = q.find(k);
    if (it != q.end()) f += std::sqrt(pv * it->second);
  }
  return std::min(1.0, f);
}

double magnetization(const Counts& counts) { return magnetization_impl(counts); }
double magnetization(const Distribution& dist) { return magnetization_impl(dist); }
double phase_estimate(const Counts& counts) { return phase_impl(counts); }
double phase_estimate(const Distribution& dist) { return phase_impl(dist); }

Counts marginal(const Counts& counts, const std::vector<int>& keep) {
  return marginal_impl(counts, keep);
}
Distribution marginal(const Distribution& dist, const std::vector<int>& keep) {
  return marginal_impl(dist, keep);
}

}  // namespace qbudget
