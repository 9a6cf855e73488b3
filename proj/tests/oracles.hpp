#pragma once

// Independent reference computations used as test oracles. Nothing here shares
// code with the library routines they check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace oracle {

/// Leibniz expansion: sum over permutations of sign * prod m[i][p(i)].
inline double leibniz_det(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  double total = 0.0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    double term = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][p[i]];
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

/// Cross product / generalised cross product by expanding det(e_j; anchors).
inline std::vector<double> cofactor_by_units(const std::vector<std::vector<double>>& anchors) {
  const std::size_t n = anchors.size() + 1;
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<double>> m;
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    m.push_back(e);
    for (const auto& a : anchors) m.push_back(a);
    v[j] = leibniz_det(m);
  }
  return v;
}

inline bool close(double a, double b, double rel, double abs_tol = 0.0) {
  return std::abs(a - b) <= abs_tol + rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace oracle
