#pragma once

#include "qchaos/ensembles.hpp"
#include "qchaos/linalg.hpp"

#include <cmath>
#include <vector>

namespace qchaos::testing {

inline UnitaryMatrixd cue(Index n, std::uint64_t seed, std::uint64_t index = 0) {
  return sample_cue(n, RngStream{seed, index});
}

inline UnitaryMatrixd diag_unitary(std::initializer_list<Complex<double>> entries) {
  CMatrixd m = CMatrixd::Zero(Index(entries.size()), Index(entries.size()));
  Index k = 0;
  for (auto e : entries) m(k, k) = e, ++k;
  return UnitaryMatrixd(m);
}

inline UnitaryMatrixd pauli_x() {
  CMatrixd m(2, 2);
  m << 0, 1, 1, 0;
  return UnitaryMatrixd(m);
}

// Oracle: |Tr U^n|^2 with U^n formed by plain repeated multiplication.
inline double power_trace_oracle(const CMatrixd& u, int n) {
  CMatrixd p = CMatrixd::Identity(u.rows(), u.cols());
  for (int k = 0; k < n; ++k) p = p * u;
  return std::norm(p.trace());
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / double(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
  const double m = mean(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / double(xs.size() - 1));
}

}  // namespace qchaos::testing
